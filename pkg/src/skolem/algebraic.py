"""Algebraic numbers, number fields and their Archimedean places.

An :class:`AlgebraicNumber` is a pair (minimal polynomial, root index), where
the index refers to the deterministic root ordering of
:func:`numerics.root_isolator`.  A :class:`NumberField` is ``Q(theta)`` for
an algebraic integer ``theta`` with monic minimal polynomial; its elements
(:class:`FieldElement`) are rational polynomials in ``theta`` reduced modulo
that polynomial.  Exact comparisons never trust floating point: numerical
values only ever serve as certified enclosures or as proposals that are
verified exactly afterwards.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Optional, Sequence

import mpmath

from .errors import DomainError, InternalError, PrecisionExhausted
from .numerics import (
    ComplexBox,
    IntPolynomial,
    composed_product,
    composed_sum,
    cyclotomic,
    euler_phi,
    eval_box_rounded,
    factor_over_q,
    from_power_sums,
    is_squarefree,
    padd,
    pcompose,
    pderiv,
    pinvert_mod,
    pmod,
    pmul,
    power_sums,
    pscale,
    psub,
    reciprocal,
    root_isolator,
    squarefree_part,
    strip,
)

MAX_LEVEL = 14


@contextlib.contextmanager
def iv_precision(bits: int):
    """Temporarily raise the working precision of ``mpmath.iv``."""
    old = mpmath.iv.prec
    mpmath.iv.prec = max(old, bits)
    try:
        yield
    finally:
        mpmath.iv.prec = old


def frac_to_iv(x: Fraction):
    return mpmath.iv.mpf(x.numerator) / x.denominator


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpf (or a degenerate iv endpoint)."""
    m, e = mpmath.mpf(x).man_exp
    m = int(m)
    return Fraction(m) * 2 ** e if e >= 0 else Fraction(m, 1 << -e)


def iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Rational endpoints of an ``mpmath.iv`` interval."""
    return mpf_to_fraction(x.a), mpf_to_fraction(x.b)


def _reduce(c: Sequence, mod: Sequence[int]) -> tuple:
    """Remainder of ``c`` modulo the monic integer polynomial ``mod``."""
    c = list(strip(tuple(c)))
    d = len(mod) - 1
    for k in range(len(c) - 1, d - 1, -1):
        t = c[k]
        if t:
            for j in range(d):
                if mod[j]:
                    c[k - d + j] -= t * mod[j]
    return strip(tuple(Fraction(x) for x in c[:d]))


# ---------------------------------------------------------------------------
# root identification


def identify_root(f: IntPolynomial, enclose: Callable[[int], ComplexBox]) -> int:
    """Index of the unique root of irreducible ``f`` lying in the enclosures
    ``enclose(bits)`` (boxes that shrink as ``bits`` grows)."""
    if f.degree == 1:
        return 0
    iso = root_isolator(f.coeffs)
    for k in range(MAX_LEVEL):
        target = enclose(64 << k)
        hits = [i for i, b in enumerate(iso.level(k)) if b.overlaps(target)]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            raise InternalError("value is not a root of the claimed polynomial")
    raise PrecisionExhausted("could not separate roots during identification")


def identify_among(polys: Sequence[IntPolynomial],
                   enclose: Callable[[int], ComplexBox]) -> tuple[IntPolynomial, int]:
    """Find which root of which pairwise coprime irreducible polynomial is
    the value enclosed by ``enclose``."""
    for k in range(MAX_LEVEL):
        target = enclose(64 << k)
        hits = []
        for f in polys:
            if f.degree == 1:
                r = Fraction(-f.coeffs[0], f.coeffs[1])
                if target.contains_point(r):
                    hits.append((f, 0))
                continue
            for i, b in enumerate(root_isolator(f.coeffs).level(k)):
                if b.overlaps(target):
                    hits.append((f, i))
        if len(hits) == 1:
            return hits[0]
        if not hits:
            raise InternalError("value is not a root of any candidate factor")
    raise PrecisionExhausted("could not separate roots during identification")


# ---------------------------------------------------------------------------
# algebraic numbers


@dataclass(frozen=True)
class AlgebraicNumber:
    """Root number ``index`` of the irreducible primitive polynomial
    ``minpoly`` (positive leading coefficient)."""

    minpoly: IntPolynomial
    index: int = 0

    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(IntPolynomial((-q.numerator, q.denominator)), 0)

    @classmethod
    def from_poly(cls, poly, enclose: Callable[[int], ComplexBox]) -> "AlgebraicNumber":
        """The root of the rational polynomial ``poly`` enclosed by ``enclose``."""
        facs = [f for f, _ in factor_over_q(poly)]
        f, i = identify_among(facs, enclose)
        return cls(f, i)

    @classmethod
    def root_near(cls, poly, z: complex) -> "AlgebraicNumber":
        """Root of ``poly`` closest to the complex number ``z`` (convenience
        constructor; the choice is made among certified boxes)."""
        best = None
        for f, _ in factor_over_q(poly):
            for i in range(f.degree):
                a = cls(f, i)
                d = abs(complex(a.approx(60)) - complex(z))
                if best is None or d < best[0]:
                    best = (d, a)
        if best is None:
            raise DomainError("root_near: constant polynomial")
        return best[1]

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise DomainError("not a rational number")
        c = self.minpoly.coeffs
        return Fraction(-c[0], c[1])

    @property
    def is_zero(self) -> bool:
        return self.minpoly.coeffs == (0, 1)

    @property
    def box(self) -> ComplexBox:
        return self.refine(1)

    def refine(self, eps) -> ComplexBox:
        if self.is_rational:
            return ComplexBox.point(self.rational_value)
        iso = root_isolator(self.minpoly.coeffs)
        k = 0
        eps = Fraction(eps)
        while True:
            b = iso.level(k)[self.index]
            if b.width <= eps:
                return b
            k += 1
            if k > MAX_LEVEL:
                raise PrecisionExhausted("root refinement limit reached")

    def enclose(self, bits: int) -> ComplexBox:
        return self.refine(Fraction(1, 1 << bits))

    def approx(self, prec: int = 53):
        box = self.enclose(prec + 4)
        with mpmath.workprec(prec + 16):
            return box.to_mpc()

    @property
    def is_real(self) -> bool:
        return self.is_rational or root_isolator(self.minpoly.coeffs).level(0)[self.index].is_real

    @cached_property
    def conjugate_index(self) -> int:
        if self.is_real:
            return self.index
        f = self.minpoly
        return identify_root(f, lambda bits: self.enclose(bits).conj())

    def conjugate(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.minpoly, self.conjugate_index)

    # arithmetic through composed polynomials ------------------------------
    def __add__(self, other):
        other = _as_alg(other)
        P = composed_sum(self.minpoly.coeffs, other.minpoly.coeffs, 1)
        return AlgebraicNumber.from_poly(P, lambda b: self.enclose(b) + other.enclose(b))

    __radd__ = __add__

    def __neg__(self):
        c = self.minpoly.coeffs
        P = tuple(x * (-1) ** k for k, x in enumerate(c))
        return AlgebraicNumber.from_poly(P, lambda b: -self.enclose(b))

    def __sub__(self, other):
        return self + (-_as_alg(other))

    def __mul__(self, other):
        other = _as_alg(other)
        P = composed_product(self.minpoly.coeffs, other.minpoly.coeffs)
        return AlgebraicNumber.from_poly(P, lambda b: (self.enclose(b) * other.enclose(b)).round_out(b + 8))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero:
            raise DomainError("inverse of zero")
        P = reciprocal(self.minpoly.coeffs)
        return AlgebraicNumber.from_poly(P, lambda b: self.enclose(b + 16).inverse().round_out(b + 8))

    def __truediv__(self, other):
        return self * _as_alg(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = AlgebraicNumber.rational(1)
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicNumber({self.rational_value})"
        z = complex(self.approx(40))
        return f"AlgebraicNumber({self.minpoly}, root~{z.real:.6g}{z.imag:+.6g}i)"


def _as_alg(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    return AlgebraicNumber.rational(x)


def sqrt(n) -> AlgebraicNumber:
    """Principal square root of a rational."""
    n = Fraction(n)
    if n >= 0:
        return AlgebraicNumber.root_near((-n, 0, 1), complex(math.sqrt(float(n))))
    return AlgebraicNumber.root_near((-n, 0, 1), complex(0, math.sqrt(float(-n))))


# ---------------------------------------------------------------------------
# root of unity, integrality, height


def _minpoly_of(a) -> IntPolynomial:
    if isinstance(a, FieldElement):
        return a.minpoly
    if isinstance(a, AlgebraicNumber):
        return a.minpoly
    return AlgebraicNumber.rational(a).minpoly


def is_root_of_unity(a) -> Optional[int]:
    """Exact multiplicative order of ``a`` if it is a root of unity."""
    f = _minpoly_of(a)
    if f.coeffs == (0, 1):
        raise DomainError("is_root_of_unity: zero")
    if f.lc != 1 or abs(f.coeffs[0]) != 1:
        return None
    n = f.degree
    for k in range(1, 2 * n * n + 1):
        if euler_phi(k) == n and cyclotomic(k) == f:
            return k
    return None


def is_algebraic_integer(a) -> bool:
    f = _minpoly_of(a)
    if f.coeffs == (0, 1):
        raise DomainError("is_algebraic_integer: zero")
    return f.lc == 1


def _log_max1(lo2: Fraction, hi2: Fraction):
    """Interval for log max(1, r) given r^2 in [lo2, hi2]."""
    lo = mpmath.iv.sqrt(frac_to_iv(lo2)).a if lo2 > 0 else mpmath.mpf(0)
    hi = mpmath.iv.sqrt(frac_to_iv(hi2)).b
    lo = max(lo, mpmath.mpf(1))
    hi = max(hi, mpmath.mpf(1))
    return mpmath.iv.log(mpmath.iv.mpf([lo, hi]))


@lru_cache(maxsize=8192)
def _height_cached(coeffs: tuple[int, ...], eps: Fraction):
    f = IntPolynomial(coeffs)
    n = f.degree
    iso = root_isolator(coeffs) if n > 1 else None
    bits = max(64, int(-math.log2(float(eps))) + 40)
    with iv_precision(bits):
        lc_log = mpmath.iv.log(mpmath.iv.mpf(f.lc))
        for k in range(MAX_LEVEL):
            total = lc_log
            if n == 1:
                r = Fraction(-coeffs[0], coeffs[1])
                total = total + _log_max1(r * r, r * r)
            else:
                for b in iso.level(k):
                    lo2, hi2 = b.abs2()
                    total = total + _log_max1(lo2, hi2)
            h = total / n
            lo, hi = iv_bounds(h)
            if hi - lo <= eps:
                return h
            if n == 1:
                break
    raise PrecisionExhausted("height enclosure did not reach requested width")


def height(a, eps=Fraction(1, 10 ** 12)):
    """Absolute logarithmic height as an ``mpmath.iv`` interval of width
    at most ``eps`` (via the Mahler measure of the minimal polynomial)."""
    f = _minpoly_of(a)
    if f.coeffs == (0, 1):
        raise DomainError("height: zero")
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("height: eps must be positive")
    if is_root_of_unity(a) is not None:
        return mpmath.iv.mpf(0)
    return _height_cached(f.coeffs, eps)


def height_upper(a) -> float:
    """A float that is certainly >= h(a)."""
    h = height(a, Fraction(1, 10 ** 9))
    return float(iv_bounds(h)[1]) * (1 + 1e-12) + 1e-12


# ---------------------------------------------------------------------------
# number fields


@dataclass(frozen=True)
class ArchPlace:
    """Archimedean place: an embedding theta -> root ``index`` of the defining
    polynomial.  Complex places use the root with positive imaginary part and
    name the conjugate root as ``conjugation_partner``."""

    index: int
    embedding: ComplexBox
    local_degree: int
    conjugation_partner: Optional[int] = None

    @property
    def is_real(self) -> bool:
        return self.local_degree == 1


class NumberField:
    """``Q(theta)`` with ``theta`` an algebraic integer.

    ``generators`` holds, for each number the field was built from, its
    expression as a polynomial in ``theta``; ``theta_tuple`` records the
    integer combination ``theta = sum t_i * gen_i``.
    """

    def __init__(self, modulus: IntPolynomial, theta_index: int,
                 gen_numbers: Sequence[AlgebraicNumber] = (),
                 gen_exprs: Sequence[Sequence] = (), theta_tuple: Sequence[int] = ()):
        if modulus.lc != 1:
            raise DomainError("defining polynomial must be monic")
        self.modulus = modulus
        self.mod = modulus.coeffs
        self.D = modulus.degree
        self.theta_index = theta_index
        self.gen_numbers = tuple(gen_numbers)
        self.generators = tuple(self.element(e) for e in gen_exprs)
        self.theta_tuple = tuple(theta_tuple)
        self._minpoly_cache: dict = {}
        self._trace_basis = [Fraction(self.D)] + power_sums(self.mod, 2 * self.D)

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(IntPolynomial((0, 1)), 0)

    @property
    def degree(self) -> int:
        return self.D

    def __repr__(self):
        return f"NumberField({self.modulus}, D={self.D})"

    # elements ------------------------------------------------------------
    def element(self, coeffs) -> "FieldElement":
        return FieldElement.from_fractions(self, coeffs)

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise DomainError("element of a different field")
            return x
        return self.element((Fraction(x),))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, ())

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,))

    @property
    def theta(self) -> "FieldElement":
        return self.element((0, 1))

    @cached_property
    def theta_number(self) -> AlgebraicNumber:
        return AlgebraicNumber(self.modulus, self.theta_index)

    def trace(self, a: "FieldElement") -> Fraction:
        tb = self._trace_basis
        return sum((c * tb[i] for i, c in enumerate(a.c)), Fraction(0))

    def charpoly(self, a: "FieldElement") -> tuple[Fraction, ...]:
        traces = []
        p = self.one
        for _ in range(self.D):
            p = p * a
            traces.append(self.trace(p))
        return from_power_sums(traces, self.D)

    def minpoly(self, a: "FieldElement") -> IntPolynomial:
        key = (a.num, a.den)
        m = self._minpoly_cache.get(key)
        if m is None:
            if len(a.c) <= 1:
                m = AlgebraicNumber.rational(a.c[0] if a.c else 0).minpoly
            else:
                m = squarefree_part(self.charpoly(a))
            self._minpoly_cache[key] = m
        return m

    def norm(self, a: "FieldElement") -> Fraction:
        cp = self.charpoly(a)
        return cp[0] * (-1) ** self.D

    # embeddings ----------------------------------------------------------
    @cached_property
    def arch_places(self) -> tuple[ArchPlace, ...]:
        if self.D == 1:
            return (ArchPlace(0, ComplexBox.point(-self.mod[0]), 1, None),)
        iso = root_isolator(self.mod)
        boxes = iso.level(0)
        out = []
        for i, b in enumerate(boxes):
            if b.is_real:
                out.append(ArchPlace(i, b, 1, None))
            elif b.im_lo > 0:
                partner = identify_root(self.modulus, lambda bits, i=i: iso.box(i, Fraction(1, 1 << bits)).conj())
                out.append(ArchPlace(i, b, 2, partner))
        assert sum(p.local_degree for p in out) == self.D
        return tuple(out)

    def theta_box(self, index: int, bits: int) -> ComplexBox:
        if self.D == 1:
            return ComplexBox.point(-self.mod[0])
        return root_isolator(self.mod).box(index, Fraction(1, 1 << bits))

    def embed(self, a: "FieldElement", index: int, bits: int) -> ComplexBox:
        """Enclosure of sigma(a) where sigma sends theta to root ``index``."""
        if len(a.c) <= 1:
            return ComplexBox.point(a.c[0] if a.c else 0)
        scale = max(1, max(abs(x) for x in a.c))
        extra = scale.numerator.bit_length() + 2 * self.D + 16
        return eval_box_rounded(a.c, self.theta_box(index, bits + extra), bits + 8)

    def to_algebraic(self, a: "FieldElement", index: Optional[int] = None) -> AlgebraicNumber:
        """sigma(a) as an :class:`AlgebraicNumber` for sigma: theta -> root
        ``index`` (default: the distinguished root)."""
        if index is None:
            index = self.theta_index
        f = self.minpoly(a)
        if f.degree == 1:
            return AlgebraicNumber(f, 0)
        return AlgebraicNumber(f, identify_root(f, lambda bits: self.embed(a, index, bits)))

    def hom_from(self, src: "NumberField", image_of_theta: "FieldElement"):
        """Map elements of ``src`` into this field given the image of src's
        theta."""
        def phi(x: FieldElement) -> FieldElement:
            if x.field is self:
                return x
            return x.compose(image_of_theta)
        return phi


def _reduce_int(num: list, mod: Sequence[int]) -> list:
    """In-place remainder of an integer coefficient list modulo a monic
    integer polynomial."""
    d = len(mod) - 1
    for k in range(len(num) - 1, d - 1, -1):
        t = num[k]
        if t:
            base = k - d
            for j in range(d):
                mj = mod[j]
                if mj:
                    num[base + j] -= t * mj
            num[k] = 0
    return num[:d] if len(num) > d else num


def _imul_poly(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class FieldElement:
    """Element of a :class:`NumberField`: ``sum num[k] theta^k / den`` with
    ``deg < D``, ``den > 0`` and the representation fully reduced."""

    __slots__ = ("field", "num", "den", "_c")

    def __init__(self, field: NumberField, num: Sequence[int], den: int = 1):
        num = list(num)
        while num and num[-1] == 0:
            num.pop()
        if den < 0:
            num, den = [-x for x in num], -den
        g = den
        for x in num:
            if g == 1:
                break
            g = math.gcd(g, x)
        if not num:
            den = 1
        elif g > 1:
            num = [x // g for x in num]
            den //= g
        self.field = field
        self.num = tuple(num)
        self.den = den
        self._c = None

    @classmethod
    def from_fractions(cls, field: NumberField, coeffs: Sequence) -> "FieldElement":
        fr = [Fraction(x) for x in coeffs]
        den = 1
        for x in fr:
            den = math.lcm(den, x.denominator)
        num = [int(x * den) for x in fr]
        if len(num) > field.D:
            num = _reduce_int(num, field.mod)
        return cls(field, num, den)

    @property
    def c(self) -> tuple:
        """Coefficients as Fractions, constant term first."""
        if self._c is None:
            self._c = tuple(Fraction(x, self.den) for x in self.num)
        return self._c

    def _lift(self, o) -> "FieldElement":
        if isinstance(o, FieldElement):
            if o.field is not self.field:
                raise DomainError("elements of different fields")
            return o
        return self.field(o)

    def __add__(self, o):
        o = self._lift(o)
        a, b = self.num, o.num
        da, db = self.den, o.den
        n = max(len(a), len(b))
        out = [0] * n
        for i, x in enumerate(a):
            out[i] = x * db
        for i, x in enumerate(b):
            out[i] += x * da
        return FieldElement(self.field, out, da * db)

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __neg__(self):
        return FieldElement(self.field, [-x for x in self.num], self.den)

    def __mul__(self, o):
        o = self._lift(o)
        if not self.num or not o.num:
            return self.field.zero
        prod = _imul_poly(self.num, o.num)
        if len(prod) > self.field.D:
            prod = _reduce_int(prod, self.field.mod)
        return FieldElement(self.field, prod, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.num:
            raise DomainError("division by zero in number field")
        if len(self.num) == 1:
            return FieldElement(self.field, [self.den], self.num[0])
        inv = pinvert_mod(self.num, self.field.mod)
        return FieldElement.from_fractions(self.field, inv) * self.den

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return o.field is self.field and o.num == self.num and o.den == self.den
        try:
            q = Fraction(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.c == strip((q,))

    def __hash__(self):
        return hash((self.num, self.den))

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_rational(self) -> bool:
        return len(self.num) <= 1

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise DomainError("field element is not rational")
        return Fraction(self.num[0], self.den) if self.num else Fraction(0)

    @property
    def minpoly(self) -> IntPolynomial:
        return self.field.minpoly(self)

    def norm(self) -> Fraction:
        return self.field.norm(self)

    def compose(self, image: "FieldElement") -> "FieldElement":
        """This element's polynomial evaluated at ``image`` (any field)."""
        acc = image.field.zero
        for x in reversed(self.c):
            acc = acc * image + x
        return acc

    def __repr__(self):
        if self.is_rational:
            return f"FieldElement({self.rational_value})"
        terms = []
        for k, x in enumerate(self.c):
            if x:
                terms.append(f"{x}" + ("" if k == 0 else "*t" if k == 1 else f"*t^{k}"))
        return "FieldElement(" + " + ".join(terms) + ")"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# exact comparison of absolute values at an Archimedean place

EXACT_SQUARE_DEGREE = 8


def _abs2_number(x: AlgebraicNumber) -> AlgebraicNumber:
    """|x|^2 as an algebraic number."""
    if x.is_real:
        return x * x
    P = composed_product(x.minpoly.coeffs, x.minpoly.coeffs)
    return AlgebraicNumber.from_poly(
        P, lambda b: ComplexBox.point(0) + _abs2_box(x.enclose(b + 4), b))


def _abs2_box(box: ComplexBox, bits: int) -> ComplexBox:
    lo, hi = box.abs2()
    return ComplexBox(lo, hi, 0, 0).round_out(bits)


def _abs_equal(a: FieldElement, b: FieldElement, place: ArchPlace) -> bool:
    K = a.field
    if a == b or a == -b:
        return True
    if a.is_zero or b.is_zero:
        return False
    if place.is_real:
        return a * a == b * b
    A = K.to_algebraic(a, place.index)
    B = K.to_algebraic(b, place.index)
    if A.minpoly == B.minpoly and (A.index == B.index or A.index == B.conjugate_index):
        return True
    if A.degree <= EXACT_SQUARE_DEGREE and B.degree <= EXACT_SQUARE_DEGREE:
        return _abs2_number(A) == _abs2_number(B)
    # Liouville: nonzero z = |sa|^2 - |sb|^2 of degree <= D^2 has
    # log|z| >= -D^2 h(z) with h(z) <= 2h(a) + 2h(b) + log 2
    hz = 2 * height_upper(a) + 2 * height_upper(b) + math.log(2)
    log_bound = -(K.D ** 2) * hz
    need = int(-log_bound / math.log(2)) + 32
    bits = 128
    while True:
        za = _abs2_box(K.embed(a, place.index, bits), bits)
        zb = _abs2_box(K.embed(b, place.index, bits), bits)
        z = za - zb
        if z.re_lo > 0 or z.re_hi < 0:
            return False
        mag = max(abs(z.re_lo), abs(z.re_hi))
        if mag < Fraction(1, 1 << need) or (mag > 0 and math.log(float(mag)) < log_bound - 1):
            return True
        bits *= 2
        if bits > 1 << 17:
            raise PrecisionExhausted("absolute value comparison did not resolve")


def compare_abs_at(a: FieldElement, b: FieldElement, place: ArchPlace) -> int:
    """Sign of |sigma(a)| - |sigma(b)| at ``place``, decided exactly."""
    K = a.field
    b = a._lift(b)

    def intervals(bits):
        A = K.embed(a, place.index, bits).abs2()
        B = K.embed(b, place.index, bits).abs2()
        if A[1] < B[0]:
            return -1
        if A[0] > B[1]:
            return 1
        return None

    for bits in (64, 160):
        s = intervals(bits)
        if s is not None:
            return s
    if _abs_equal(a, b, place):
        return 0
    bits = 320
    while True:
        s = intervals(bits)
        if s is not None:
            return s
        bits *= 2
        if bits > 1 << 18:
            raise PrecisionExhausted("absolute value comparison did not resolve")


# ---------------------------------------------------------------------------
# primitive element construction


def _root_approx(coeffs: tuple[int, ...], prec: int) -> list:
    if len(coeffs) == 2:
        return [mpmath.mpc(mpmath.mpf(-coeffs[0]) / coeffs[1])]
    iso = root_isolator(coeffs)
    return [iso.approx(i, prec) for i in range(len(coeffs) - 1)]


def _interpolate(P: tuple[int, ...], vals: list, prec: int) -> Optional[tuple[int, ...]]:
    """Integer polynomial G = sum_l val_l * P(x)/(x - rho_l) for monic P,
    rounded from a numerical evaluation; None if rounding is not clean."""
    n = len(P) - 1
    roots = _root_approx(P, prec)
    with mpmath.workprec(prec + 32):
        G = [mpmath.mpc(0)] * n
        for rho, v in zip(roots, vals):
            acc = mpmath.mpc(0)
            for k in range(n, 0, -1):
                acc = acc * rho + P[k]
                G[k - 1] += v * acc
        out = []
        for g in G:
            r = mpmath.nint(g.real)
            if abs(g.real - r) > 0.25 or abs(g.imag) > 0.25:
                return None
            out.append(int(r))
    return tuple(out)


def _pair_roots(M: tuple[int, ...], m: tuple[int, ...], b: tuple[int, ...], c: int, prec: int):
    """For each root rho of M find the unique (i, j) with
    rho = theta_i + c*beta_j; None if the numerics are ambiguous."""
    rM = _root_approx(M, prec)
    rm = _root_approx(m, prec)
    rb = _root_approx(b, prec)
    with mpmath.workprec(prec):
        out = []
        for rho in rM:
            ds = sorted((abs(ti + c * bj - rho), i, j)
                        for i, ti in enumerate(rm) for j, bj in enumerate(rb))
            if len(ds) > 1 and not ds[0][0] * 8 < ds[1][0]:
                return None
            out.append((ds[0][1], ds[0][2]))
    return out, rm, rb


def _express(P: tuple[int, ...], vals: list, prec: int) -> Optional[tuple]:
    G = _interpolate(P, vals, prec)
    if G is None:
        return None
    inv_d = pinvert_mod(pderiv(P), P)
    return _reduce(pmul(G, inv_d), P)


def _check_expr(expr: tuple, target: IntPolynomial, target_index: int,
                P: IntPolynomial, p_index: int) -> bool:
    """Exactly verify that expr(rho) is a root of ``target`` for a root rho
    of P, and that at rho = root p_index it is root ``target_index``."""
    K = NumberField(P, p_index)
    e = K.element(expr)
    acc = K.zero
    for x in reversed(target.coeffs):
        acc = acc * e + x
    if not acc.is_zero:
        return False
    if target.degree == 1:
        return True
    try:
        idx = identify_root(target, lambda bits: K.embed(e, p_index, bits))
    except InternalError:
        return False
    return idx == target_index


def construct_field(gens: Sequence[AlgebraicNumber]) -> NumberField:
    """Smallest field containing ``gens``, with a primitive element
    theta = sum t_i * gen_i found by trying small integer multipliers."""
    gens = [g if isinstance(g, AlgebraicNumber) else AlgebraicNumber.rational(g) for g in gens]
    if not gens:
        raise DomainError("construct_field: empty generator list")
    m: tuple[int, ...] = (0, 1)
    m_idx = 0
    exprs: list[tuple] = []
    tup = [0] * len(gens)
    for gi, g in enumerate(gens):
        if g.is_rational:
            exprs.append((g.rational_value,) if g.rational_value else ())
            continue
        dup = next((k for k in range(gi) if gens[k] == g), None)
        if dup is not None:
            exprs.append(exprs[dup])
            continue
        same = [k for k in range(gi) if gens[k].minpoly == g.minpoly]
        if len({gens[k].index for k in same}) == g.degree - 1:
            # last missing conjugate: coefficient sum minus the others
            f = g.minpoly.coeffs
            e: tuple = (Fraction(-f[-2], f[-1]),)
            seen = set()
            for k in same:
                if gens[k].index not in seen:
                    seen.add(gens[k].index)
                    e = psub(e, exprs[k])
            exprs.append(strip(e))
            continue
        f = g.minpoly.coeffs
        n = len(f) - 1
        lead = f[-1]
        bprime = tuple(f[k] * lead ** (n - 1 - k) for k in range(n)) + (1,)
        bpoly = IntPolynomial(bprime)
        b_idx = identify_root(bpoly, lambda bits, g=g, lead=lead: g.enclose(bits + lead.bit_length()) * lead)
        m, m_idx, exprs, c_used = _adjoin(m, m_idx, exprs, bpoly, b_idx, lead)
        if c_used:
            tup = [t for t in tup]
            tup[gi] = c_used * lead
    K = NumberField(IntPolynomial(m), m_idx, gens, exprs, tup)
    # box certification of every generator expression
    for g, e in zip(gens, K.generators):
        if not g.is_rational and K.to_algebraic(e) != g:
            raise InternalError("generator expression failed certification")
    return K


def _compose_into(e: Sequence, img: FieldElement) -> tuple:
    acc = img.field.zero
    for x in reversed(e):
        acc = acc * img + x
    return acc.c


def _candidates():
    c = 1
    while c < 64:
        yield c
        yield -c
        c += 1


def _adjoin(m, m_idx, exprs, bpoly: IntPolynomial, b_idx: int, lead: int):
    """Adjoin the algebraic integer beta' (root b_idx of monic bpoly).
    Returns (new modulus, new index, updated expressions, multiplier c or 0
    if theta is kept)."""
    mpoly = IntPolynomial(m)
    bp = bpoly.coeffs
    for c in _candidates():
        Mfull = composed_sum(m, bp, c)
        if not is_squarefree(Mfull):
            continue
        facs = [F for F, _ in factor_over_q(Mfull)]
        enclose = lambda bits, c=c: (root_isolator(m).box(m_idx, Fraction(1, 1 << bits)) if len(m) > 2
                                     else ComplexBox.point(-m[0])) + \
            c * (root_isolator(bp).box(b_idx, Fraction(1, 1 << bits)) if len(bp) > 2
                 else ComplexBox.point(-bp[0]))
        M, M_idx = identify_among(facs, enclose)
        same_degree = M.degree == mpoly.degree
        prec = 128
        while prec <= 1 << 15:
            res = _adjoin_attempt(m, m_idx, bp, b_idx, c, M, M_idx, same_degree, prec)
            if res is not None:
                break
            prec *= 2
        else:
            continue
        beta_expr, theta_expr = res
        scale = Fraction(1, lead)
        if same_degree:
            return m, m_idx, exprs + [pscale(beta_expr, scale)], 0
        KM = NumberField(M, M_idx)
        img = KM.element(theta_expr)
        new_exprs = [_compose_into(e, img) if len(e) > 1 else e for e in exprs]
        new_exprs.append(pscale(beta_expr, scale))
        return M.coeffs, M_idx, new_exprs, c
    raise InternalError("no primitive element found")


def _adjoin_attempt(m, m_idx, bp, b_idx, c, M: IntPolynomial, M_idx: int, same_degree: bool, prec: int):
    paired = _pair_roots(M.coeffs, m, bp, c, prec)
    if paired is None:
        return None
    pairs, rm, rb = paired
    bpoly = IntPolynomial(bp)
    if same_degree:
        # beta' is already in Q(theta): conjugate of beta' paired with theta_i
        val_for = {}
        for i, j in pairs:
            val_for[i] = rb[j]
        if len(val_for) != len(m) - 1:
            return None
        expr = _express(m, [val_for[i] for i in range(len(m) - 1)], prec)
        if expr is None or not _check_expr(expr, bpoly, b_idx, IntPolynomial(m), m_idx):
            return None
        return expr, None
    theta_expr = _express(M.coeffs, [rm[i] for i, _ in pairs], prec)
    if theta_expr is None:
        return None
    if not _check_expr(theta_expr, IntPolynomial(m), m_idx, M, M_idx):
        return None
    beta_expr = pscale(psub((0, 1), theta_expr), Fraction(1, c))
    if not _check_expr(beta_expr, bpoly, b_idx, M, M_idx):
        return None
    return beta_expr, theta_expr
