"""Exact numerics: integer and rational polynomials, factoring over Q,
resultants, cyclotomic polynomials and certified complex root isolation.

Polynomials are stored constant term first.  Rational polynomials are plain
tuples of ``Fraction``; :class:`IntPolynomial` wraps integer coefficient
tuples and is the type used wherever a minimal or defining polynomial is
meant.

Root isolation works in two stages.  Floating point (mpmath, Aberth
iteration) only *proposes* approximations; every returned box is certified
with exact rational arithmetic by a Gershgorin inclusion argument applied to
the Weierstrass correction matrix, so no floating-point result is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

import mpmath
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_resultant
from sympy.polys.factortools import dup_factor_list
from sympy.polys.sqfreetools import dup_sqf_p, dup_sqf_part

from .errors import DomainError

# ---------------------------------------------------------------------------
# plain coefficient-list helpers (constant term first)


def strip(c: Sequence) -> tuple:
    """Drop trailing zero coefficients."""
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def padd(a: Sequence, b: Sequence) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return strip(out)


def psub(a: Sequence, b: Sequence) -> tuple:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return strip(out)


def pscale(a: Sequence, s) -> tuple:
    if s == 0:
        return ()
    return tuple(x * s for x in a)


def pmul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return strip(out)


def pdivmod(a: Sequence, b: Sequence) -> tuple[tuple, tuple]:
    """Quotient and remainder over a field (exact ``Fraction`` division)."""
    b = strip(b)
    if not b:
        raise DomainError("polynomial division by zero")
    r = list(strip(a))
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    lb = b[-1]
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        c = Fraction(c) / lb if not (isinstance(c, int) and isinstance(lb, int) and c % lb == 0) else c // lb
        q[k] = c
        for j in range(db + 1):
            r[k + j] -= c * b[j]
    return strip(q), strip(r[:db])


def pmod(a: Sequence, b: Sequence) -> tuple:
    return pdivmod(a, b)[1]


def pmonic(a: Sequence) -> tuple:
    a = strip(a)
    if not a:
        return ()
    lc = Fraction(a[-1])
    return tuple(Fraction(x) / lc for x in a)


def pgcd(a: Sequence, b: Sequence) -> tuple:
    """Monic gcd over Q."""
    a, b = strip(a), strip(b)
    while b:
        a, b = b, pmod(a, b)
    return pmonic(a)


def pderiv(a: Sequence) -> tuple:
    return strip(tuple(i * a[i] for i in range(1, len(a))))


def peval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pcompose(a: Sequence, b: Sequence) -> tuple:
    """a(b(x))."""
    acc: tuple = ()
    for c in reversed(a):
        acc = padd(pmul(acc, b), (c,) if c else ())
    return acc


def ppow_mod(a: Sequence, e: int, m: Sequence) -> tuple:
    result: tuple = (1,)
    base = pmod(a, m)
    while e:
        if e & 1:
            result = pmod(pmul(result, base), m)
        e >>= 1
        if e:
            base = pmod(pmul(base, base), m)
    return result


def pinvert_mod(a: Sequence, m: Sequence) -> tuple:
    """Inverse of a modulo m over Q (extended Euclid); m need not be monic."""
    r0, r1 = strip(m), pmod(a, m)
    s0, s1 = (), (Fraction(1),)
    while r1 and len(r1) > 1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
    if not r1:
        raise DomainError("polynomial is not invertible modulo the modulus")
    c = Fraction(r1[0])
    return pmod(pscale(s1, 1 / c), m)


def content_and_primitive(c: Sequence) -> tuple[Fraction, tuple[int, ...]]:
    """Write a rational polynomial as ``content * primitive`` with positive
    leading coefficient in the integer primitive part."""
    c = strip(c)
    if not c:
        raise DomainError("zero polynomial")
    fr = [Fraction(x) for x in c]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# IntPolynomial


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first, trailing zeros removed."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", strip(tuple(int(c) for c in self.coeffs)))

    @classmethod
    def from_rational(cls, c: Sequence) -> "IntPolynomial":
        """Primitive integer polynomial with positive leading coefficient
        proportional to the rational polynomial ``c``."""
        return cls(content_and_primitive(c)[1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def primitive(self) -> "IntPolynomial":
        return IntPolynomial.from_rational(self.coeffs)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(pderiv(self.coeffs))

    def __call__(self, x):
        return peval(self.coeffs, x)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        return poly_to_str(self.coeffs)


def poly_to_str(c: Sequence, var: str = "x") -> str:
    terms = []
    for k in range(len(c) - 1, -1, -1):
        a = c[k]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = -a if a < 0 else a
        if k == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + (var if k == 1 else f"{var}^{k}")
        terms.append((sign, body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def _as_ints(p) -> tuple[int, ...]:
    if isinstance(p, IntPolynomial):
        return p.coeffs
    c = strip(tuple(p))
    if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in c):
        return tuple(int(x) for x in c)
    return content_and_primitive(c)[1]


def _to_dup(c: Sequence[int]) -> list:
    return [ZZ(int(x)) for x in reversed(c)]


def _from_dup(f) -> tuple[int, ...]:
    return strip(tuple(int(x) for x in reversed(f)))


# ---------------------------------------------------------------------------
# factoring, resultants, cyclotomics


def factor_over_q(p) -> list[tuple[IntPolynomial, int]]:
    """Irreducible factorization over Q, up to a rational constant.

    Factors are primitive with positive leading coefficient, sorted by degree
    and then coefficients so that the output is deterministic.
    """
    c = strip(tuple(p.coeffs if isinstance(p, IntPolynomial) else p))
    if not c:
        raise DomainError("factor_over_q: zero polynomial")
    ints = _as_ints(c)
    if len(ints) == 1:
        return []
    _, facs = dup_factor_list(_to_dup(ints), ZZ)
    out = []
    for f, k in facs:
        out.append((IntPolynomial.from_rational(_from_dup(f)), int(k)))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs, t[1]))
    return out


def resultant(p, q) -> int:
    """Sylvester resultant ``lc(p)^deg(q) * prod q(alpha_i)``."""
    a = _as_int_exact(p)
    b = _as_int_exact(q)
    if not a or not b:
        raise DomainError("resultant: zero polynomial")
    if len(a) == 1 and len(b) == 1:
        return 1
    m, n = len(a) - 1, len(b) - 1
    if m < n:
        # the library routine loses the sign when the first argument has lower degree
        return (-1) ** (m * n) * int(dup_resultant(_to_dup(b), _to_dup(a), ZZ))
    return int(dup_resultant(_to_dup(a), _to_dup(b), ZZ))


def _as_int_exact(p) -> tuple[int, ...]:
    c = p.coeffs if isinstance(p, IntPolynomial) else strip(tuple(p))
    return tuple(int(x) for x in c)


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    """The k-th cyclotomic polynomial, by exact division of x^k - 1."""
    if k < 1:
        raise DomainError("cyclotomic: k must be positive")
    num = tuple([-1] + [0] * (k - 1) + [1])
    for d in range(1, k):
        if k % d == 0:
            num, r = pdivmod(num, cyclotomic(d).coeffs)
            assert not r
    return IntPolynomial(tuple(int(x) for x in num))


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def is_squarefree(p) -> bool:
    c = strip(tuple(p.coeffs if isinstance(p, IntPolynomial) else p))
    if len(c) <= 2:
        return bool(c)
    return bool(dup_sqf_p(_to_dup(_as_ints(c)), ZZ))


def squarefree_part(p) -> IntPolynomial:
    c = strip(tuple(p.coeffs if isinstance(p, IntPolynomial) else p))
    if not c:
        raise DomainError("squarefree_part: zero polynomial")
    return IntPolynomial.from_rational(_from_dup(dup_sqf_part(_to_dup(_as_ints(c)), ZZ)))


# ---------------------------------------------------------------------------
# power sums and composed polynomials (root-wise operations)


def power_sums(c: Sequence, count: int) -> list[Fraction]:
    """Newton power sums p_1..p_count of the roots of ``c``."""
    c = strip(c)
    n = len(c) - 1
    lc = Fraction(c[-1])
    e = [Fraction(c[n - k]) / lc * (-1) ** k for k in range(n + 1)]  # elementary
    p = [Fraction(0)] * (count + 1)
    for k in range(1, count + 1):
        s = Fraction(0)
        for i in range(1, min(k, n + 1)):
            s += (-1) ** (i - 1) * e[i] * p[k - i]
        if k <= n:
            s += (-1) ** (k - 1) * k * e[k]
        p[k] = s
    return p[1:]


def from_power_sums(ps: Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    """Monic polynomial of degree n with the given power sums p_1..p_n."""
    e = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * ps[i - 1]
        e[k] = s / k
    return tuple(e[n - k] * (-1) ** (n - k) for k in range(n + 1))


def composed_sum(a: Sequence, b: Sequence, c: int = 1) -> tuple[Fraction, ...]:
    """Monic polynomial with roots alpha + c*beta over all root pairs."""
    na, nb = len(strip(a)) - 1, len(strip(b)) - 1
    n = na * nb
    pa = [Fraction(na)] + power_sums(a, n)
    pb = [Fraction(nb)] + power_sums(b, n)
    binom = [1]
    out = []
    for t in range(1, n + 1):
        binom = [1] + [binom[i] + binom[i + 1] for i in range(len(binom) - 1)] + [1]
        s = Fraction(0)
        for i in range(t + 1):
            s += binom[i] * pa[i] * pb[t - i] * Fraction(c) ** (t - i)
        out.append(s)
    return from_power_sums(out, n)


def composed_product(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    """Monic polynomial with roots alpha*beta over all root pairs."""
    na, nb = len(strip(a)) - 1, len(strip(b)) - 1
    n = na * nb
    pa, pb = power_sums(a, n), power_sums(b, n)
    return from_power_sums([x * y for x, y in zip(pa, pb)], n)


def reciprocal(a: Sequence) -> tuple:
    """Polynomial whose roots are the inverses of the (nonzero) roots of a."""
    return strip(tuple(reversed(strip(a))))


# ---------------------------------------------------------------------------
# rational intervals and complex boxes


def _imul(a: tuple, b: tuple) -> tuple:
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


@dataclass(frozen=True)
class ComplexBox:
    """Closed box [re_lo, re_hi] x [im_lo, im_hi] with rational endpoints."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def __post_init__(self):
        for name in ("re_lo", "re_hi", "im_lo", "im_hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.re_lo > self.re_hi or self.im_lo > self.im_hi:
            raise DomainError("ComplexBox with inverted endpoints")

    @classmethod
    def point(cls, re, im=0) -> "ComplexBox":
        return cls(re, re, im, im)

    @property
    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    @property
    def is_real(self) -> bool:
        return self.im_lo == 0 and self.im_hi == 0

    @property
    def re(self) -> tuple:
        return (self.re_lo, self.re_hi)

    @property
    def im(self) -> tuple:
        return (self.im_lo, self.im_hi)

    def center(self) -> tuple[Fraction, Fraction]:
        return ((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    def contains_box(self, o: "ComplexBox") -> bool:
        return (self.re_lo <= o.re_lo and o.re_hi <= self.re_hi
                and self.im_lo <= o.im_lo and o.im_hi <= self.im_hi)

    def contains_point(self, re, im=0) -> bool:
        return self.re_lo <= re <= self.re_hi and self.im_lo <= im <= self.im_hi

    def overlaps(self, o: "ComplexBox") -> bool:
        return not (self.re_hi < o.re_lo or o.re_hi < self.re_lo
                    or self.im_hi < o.im_lo or o.im_hi < self.im_lo)

    def intersect(self, o: "ComplexBox") -> "ComplexBox":
        return ComplexBox(max(self.re_lo, o.re_lo), min(self.re_hi, o.re_hi),
                          max(self.im_lo, o.im_lo), min(self.im_hi, o.im_hi))

    def contains_zero(self) -> bool:
        return self.contains_point(0, 0)

    def conj(self) -> "ComplexBox":
        return ComplexBox(self.re_lo, self.re_hi, -self.im_hi, -self.im_lo)

    # interval arithmetic ---------------------------------------------------
    def __add__(self, o):
        o = as_box(o)
        return ComplexBox(self.re_lo + o.re_lo, self.re_hi + o.re_hi,
                          self.im_lo + o.im_lo, self.im_hi + o.im_hi)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBox(-self.re_hi, -self.re_lo, -self.im_hi, -self.im_lo)

    def __sub__(self, o):
        return self + (-as_box(o))

    def __rsub__(self, o):
        return as_box(o) + (-self)

    def __mul__(self, o):
        o = as_box(o)
        if o.is_real and o.re_lo == o.re_hi:
            s = o.re_lo
            lo_r, hi_r = sorted((self.re_lo * s, self.re_hi * s))
            lo_i, hi_i = sorted((self.im_lo * s, self.im_hi * s))
            return ComplexBox(lo_r, hi_r, lo_i, hi_i)
        ac = _imul(self.re, o.re)
        bd = _imul(self.im, o.im)
        ad = _imul(self.re, o.im)
        bc = _imul(self.im, o.re)
        return ComplexBox(ac[0] - bd[1], ac[1] - bd[0], ad[0] + bc[0], ad[1] + bc[1])

    __rmul__ = __mul__

    def abs2(self) -> tuple[Fraction, Fraction]:
        """Enclosure of |z|^2."""
        def sq(iv):
            lo, hi = iv
            if lo <= 0 <= hi:
                return (Fraction(0), max(lo * lo, hi * hi))
            a, b = lo * lo, hi * hi
            return (min(a, b), max(a, b))
        r, i = sq(self.re), sq(self.im)
        return (r[0] + i[0], r[1] + i[1])

    def inverse(self) -> "ComplexBox":
        lo, hi = self.abs2()
        if lo <= 0:
            raise DomainError("interval inverse of a box containing zero")
        inv = (1 / hi, 1 / lo)
        re = _imul(self.re, inv)
        im = _imul((-self.im_hi, -self.im_lo), inv)
        return ComplexBox(re[0], re[1], im[0], im[1])

    def __truediv__(self, o):
        return self * as_box(o).inverse()

    def round_out(self, bits: int) -> "ComplexBox":
        """Enlarge to dyadic endpoints with denominator 2**bits."""
        s = 1 << bits

        def dn(x):
            return Fraction((x.numerator * s) // x.denominator, s)

        def up(x):
            return Fraction(-((-x.numerator * s) // x.denominator), s)
        return ComplexBox(dn(self.re_lo), up(self.re_hi), dn(self.im_lo), up(self.im_hi))

    def to_mpc(self):
        c = self.center()
        return mpmath.mpc(mpmath.mpf(c[0].numerator) / c[0].denominator,
                          mpmath.mpf(c[1].numerator) / c[1].denominator)


def as_box(x) -> ComplexBox:
    if isinstance(x, ComplexBox):
        return x
    return ComplexBox.point(Fraction(x))


def eval_box(c: Sequence, box: ComplexBox) -> ComplexBox:
    """Interval Horner evaluation of a rational polynomial over a box."""
    acc = as_box(0)
    for a in reversed(strip(c)):
        acc = acc * box + a
    return acc


def eval_box_rounded(c: Sequence, box: ComplexBox, bits: int) -> ComplexBox:
    """Like :func:`eval_box`, rounding outward to 2**-bits after each step so
    endpoint sizes stay bounded."""
    acc = as_box(0)
    for a in reversed(strip(c)):
        acc = (acc * box + a).round_out(bits)
    return acc


# ---------------------------------------------------------------------------
# certified root isolation


def _aberth(coeffs: Sequence[int], prec: int, init=None, maxiter: int = 400):
    """Approximate all roots of an integer polynomial at ``prec`` bits."""
    n = len(coeffs) - 1
    with mpmath.workprec(prec + 30):
        cs = [mpmath.mpf(int(c)) for c in coeffs]
        dcs = [cs[k] * k for k in range(1, n + 1)]
        if init is None:
            init = _initial_guesses(coeffs)
        z = [mpmath.mpc(w) for w in init]
        tol = mpmath.mpf(2) ** (-prec)
        for _ in range(maxiter):
            biggest = mpmath.mpf(0)
            for i in range(n):
                zi = z[i]
                pv = mpmath.mpc(0)
                for c in reversed(cs):
                    pv = pv * zi + c
                dv = mpmath.mpc(0)
                for c in reversed(dcs):
                    dv = dv * zi + c
                if pv == 0:
                    continue
                s = mpmath.mpc(0)
                for j in range(n):
                    if j != i:
                        d = zi - z[j]
                        if d == 0:
                            d = mpmath.mpf(2) ** (-prec)
                        s += 1 / d
                if dv == 0:
                    dv = tol
                ratio = pv / dv
                den = 1 - ratio * s
                off = ratio / den if den != 0 else ratio
                z[i] = zi - off
                rel = abs(off) / max(1, abs(zi))
                if rel > biggest:
                    biggest = rel
            if biggest < tol:
                break
        return z


def _initial_guesses(coeffs: Sequence[int]):
    n = len(coeffs) - 1
    try:
        import numpy as np
        fl = [float(c) for c in reversed(coeffs)]
        if all(abs(x) < 1e300 for x in fl):
            r = np.roots(fl)
            if len(r) == n and all(np.isfinite(r)):
                # perturb coincident guesses so Aberth can separate them
                out = []
                seen = set()
                for k, w in enumerate(r):
                    w = complex(w)
                    key = (round(w.real, 12), round(w.imag, 12))
                    if key in seen:
                        w += complex(1e-7 * (k + 1), 1e-7 * (k + 2))
                    seen.add(key)
                    out.append(w)
                return out
    except Exception:  # pragma: no cover - numpy failure falls back below
        pass
    # Fujiwara-style radius, points on a rotated circle
    an = abs(coeffs[-1])
    rad = 2 * max(abs(coeffs[n - k] / an) ** (1.0 / k) for k in range(1, n + 1))
    rad = max(rad, 1e-3)
    return [mpmath.mpc(rad * mpmath.cos(2 * mpmath.pi * k / n + 0.4),
                       rad * mpmath.sin(2 * mpmath.pi * k / n + 0.4)) for k in range(n)]


def _certify(coeffs: Sequence[int], approx, prec: int):
    """Gershgorin certification of approximations at scale 2**prec.

    Returns (boxes, is_real flags) or None.  Each square box of half side R_i
    around z_i contains the Gershgorin disk of the Weierstrass matrix; when
    the squares are pairwise disjoint each holds exactly one root.  A disk
    centred on the real axis holding one root of a real polynomial holds a
    real root, because its conjugate would be a second root in the disk.
    """
    n = len(coeffs) - 1
    scale = 1 << prec
    pts = []
    with mpmath.workprec(prec + 30):
        for w in approx:
            re, im = w.real, w.imag
            mag = max(1, abs(w))
            if abs(im) <= mag * mpmath.mpf(2) ** (-(prec // 2)):
                im = mpmath.mpf(0)
            pts.append((int(mpmath.nint(re * scale)), int(mpmath.nint(im * scale))))
    # enforce exact conjugate symmetry
    upper = [k for k, (a, b) in enumerate(pts) if b > 0]
    lower = [k for k, (a, b) in enumerate(pts) if b < 0]
    if len(upper) != len(lower):
        return None
    used = set()
    for k in upper:
        a, b = pts[k]
        best, bd = None, None
        for m in lower:
            if m in used:
                continue
            d = (pts[m][0] - a) ** 2 + (pts[m][1] + b) ** 2
            if bd is None or d < bd:
                best, bd = m, d
        used.add(best)
        pts[best] = (a, -b)
    if len(set(pts)) != n:
        return None
    cn = coeffs[-1]
    q = prec + 8
    boxes = []
    for i, (a, b) in enumerate(pts):
        # 2^{prec*n} p(z_i) as Gaussian integer
        gr, gi = int(cn), 0
        for k in range(n - 1, -1, -1):
            gr, gi = gr * a - gi * b, gr * b + gi * a
            gr += int(coeffs[k]) << (prec * (n - k))
        hr, hi = 1, 0
        for j, (c, d) in enumerate(pts):
            if j != i:
                xr, xi = a - c, b - d
                hr, hi = hr * xr - hi * xi, hr * xi + hi * xr
        hn = hr * hr + hi * hi
        if hn == 0:
            return None
        # |w|^2 = |G|^2 / (4^prec cn^2 |H|^2); R = n |w| rounded up at scale 2^q
        num = (gr * gr + gi * gi) << (2 * q)
        den = (cn * cn * hn) << (2 * prec)
        w2 = -((-num) // den)
        rad = Fraction(n * (isqrt(w2) + 1), 1 << q)
        cre, cim = Fraction(a, scale), Fraction(b, scale)
        boxes.append(ComplexBox(cre - rad, cre + rad, cim - rad, cim + rad))
    for i in range(n):
        for j in range(i + 1, n):
            if boxes[i].overlaps(boxes[j]):
                return None
    out = []
    for (a, b), bx in zip(pts, boxes):
        if b == 0:
            out.append(ComplexBox(bx.re_lo, bx.re_hi, 0, 0))
        else:
            out.append(bx)
    return out


class RootIsolator:
    """Deterministic, nested sequence of certified isolating boxes for the
    roots of one squarefree integer polynomial.

    Level k is computed from approximations at 64*2**k bits (escalating when
    certification fails) and intersected with level k-1, so boxes only ever
    shrink.  Root indices follow the order of the level-0 boxes, sorted by
    centre (real part, then imaginary part).
    """

    def __init__(self, coeffs: Sequence[int]):
        coeffs = tuple(int(c) for c in strip(tuple(coeffs)))
        if not coeffs or len(coeffs) < 2:
            raise DomainError("isolate_roots: polynomial must have positive degree")
        if not is_squarefree(coeffs):
            raise DomainError("isolate_roots: polynomial is not squarefree")
        self.coeffs = coeffs
        self.n = len(coeffs) - 1
        self.levels: list[list[ComplexBox]] = []
        self._approx = None
        self._prec = 0

    def _raw(self, prec: int):
        while True:
            self._approx = _aberth(self.coeffs, prec, init=self._approx)
            self._prec = prec
            boxes = _certify(self.coeffs, self._approx, prec)
            if boxes is not None:
                return boxes, prec
            prec *= 2
            if prec > 1 << 22:
                raise DomainError("root isolation failed to converge")

    def _linear(self) -> list[ComplexBox]:
        r = Fraction(-self.coeffs[0], self.coeffs[1])
        return [ComplexBox(r, r, 0, 0)]

    def level(self, k: int) -> list[ComplexBox]:
        if self.n == 1:
            return self._linear()
        while len(self.levels) <= k:
            lv = len(self.levels)
            prec = max(64 << lv, self._prec)
            if lv == 0:
                boxes, _ = self._raw(prec)
                boxes.sort(key=lambda b: (b.center(), b.re_lo))
                self.levels.append(boxes)
                continue
            prev = self.levels[-1]
            while True:
                raw, prec = self._raw(prec)
                match = self._match(prev, raw)
                if match is not None:
                    break
                prec *= 2
            self.levels.append(match)
        return self.levels[k]

    @staticmethod
    def _match(prev, raw):
        out = []
        taken = set()
        for pb in prev:
            hits = [j for j, rb in enumerate(raw) if rb.overlaps(pb)]
            if len(hits) != 1 or hits[0] in taken:
                return None
            taken.add(hits[0])
            rb = raw[hits[0]]
            nb = pb.intersect(rb)
            if pb.is_real:
                nb = ComplexBox(nb.re_lo, nb.re_hi, 0, 0)
            out.append(nb)
        for ob in raw:
            if not any(ob.overlaps(x) for x in out):
                return None
        return out

    def boxes(self, eps) -> list[ComplexBox]:
        eps = Fraction(eps)
        if eps <= 0:
            raise DomainError("isolate_roots: eps must be positive")
        k = 0
        while True:
            bs = self.level(k)
            if max(b.width for b in bs) <= eps:
                return bs
            k += 1
            if k > 40:
                raise DomainError("isolate_roots: refinement limit reached")

    def box(self, index: int, eps) -> ComplexBox:
        eps = Fraction(eps)
        k = 0
        while True:
            b = self.level(k)[index]
            if b.width <= eps:
                return b
            k += 1
            if k > 40:
                raise DomainError("isolate_roots: refinement limit reached")

    def approx(self, index: int, prec: int = 53):
        """mpmath approximation of root ``index`` (centre of a refined box)."""
        eps = Fraction(1, 1 << (prec + 4))
        box = self.box(index, eps)
        with mpmath.workprec(prec + 16):
            return box.to_mpc()


@lru_cache(maxsize=4096)
def root_isolator(coeffs: tuple[int, ...]) -> RootIsolator:
    return RootIsolator(coeffs)


def isolate_roots(p, eps) -> list[ComplexBox]:
    """Certified pairwise-disjoint isolating boxes of width <= eps, one per
    root of the squarefree polynomial ``p``; real roots get the degenerate
    imaginary interval [0, 0]."""
    c = _as_ints(p.coeffs if isinstance(p, IntPolynomial) else p)
    return list(root_isolator(c).boxes(eps))
