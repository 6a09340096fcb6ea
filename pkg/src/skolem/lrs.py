"""Linear recurrence sequences over a number field.

u_{n+d} = a_{d-1} u_{n+d-1} + ... + a_0 u_n, with coefficients and initial
terms in a :class:`NumberField` F.  After :func:`minimize_order` the order is
minimal and a_0 != 0; a zero characteristic root is removed by shifting the
start, the skipped terms are kept in ``prefix``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

import mpmath
import sympy

from .algebraic import (
    AlgebraicNumber,
    FieldElement,
    NumberField,
    construct_field,
    is_root_of_unity,
)
from .errors import BudgetExceeded, DomainError, InternalError
from .numerics import IntPolynomial, factor_over_q, root_isolator

Element = FieldElement


def coerce(field: NumberField, x) -> FieldElement:
    if isinstance(x, FieldElement):
        if x.field is not field:
            raise DomainError("element of a different field")
        return x
    if isinstance(x, str):
        x = Fraction(x)
    return field(x)


@dataclass(frozen=True)
class LRS:
    """Recurrence u_{n+d} = sum a_j u_{n+j} for n >= shift, with the terms
    below ``shift`` stored explicitly in ``prefix``."""

    field: NumberField
    coeffs: tuple
    initial: tuple
    shift: int = 0
    prefix: tuple = ()

    def __post_init__(self):
        if len(self.coeffs) != len(self.initial):
            raise DomainError("coefficient and initial-value lengths differ")
        if len(self.prefix) != self.shift:
            raise DomainError("prefix length must equal the shift")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return self.order == 0 and all(x.is_zero for x in self.prefix)

    def charpoly(self) -> tuple:
        """x^d - sum a_j x^j, constant term first."""
        return tuple(-a for a in self.coeffs) + (self.field.one,)

    def terms(self, count: int) -> list[FieldElement]:
        """u_0 .. u_{count-1} by direct iteration."""
        out = list(self.prefix[:count])
        d = self.order
        if len(out) < count:
            need = count - len(out)
            if d == 0:
                out += [self.field.zero] * need
            else:
                w = list(self.initial)
                while len(w) < need:
                    acc = self.field.zero
                    for j in range(d):
                        acc = acc + self.coeffs[j] * w[len(w) - d + j]
                    w.append(acc)
                out += w[:need]
        return out

    def core(self) -> "LRS":
        """The shifted sequence v_n = u_{n + shift}."""
        if not self.shift:
            return self
        return LRS(self.field, self.coeffs, self.initial)


def _berlekamp_massey(seq: Sequence[FieldElement], one: FieldElement) -> list[FieldElement]:
    """Connection polynomial C (C[0] = 1) of the shortest recurrence
    sum_{i<=L} C_i s_{n-i} = 0 generating ``seq``; returns (C, L)."""
    zero = one * 0
    C = [one]
    B = [one]
    L = 0
    m = 1
    b = one
    for n in range(len(seq)):
        d = seq[n]
        for i in range(1, L + 1):
            if i < len(C):
                d = d + C[i] * seq[n - i]
        if d.is_zero:
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [zero] * (need - len(C))
        for i, x in enumerate(B):
            C[i + m] = C[i + m] - coef * x
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    while len(C) > 1 and C[-1].is_zero:
        C.pop()
    return C, L


def from_terms(field: NumberField, terms: Sequence[FieldElement]) -> LRS:
    """Minimal recurrence of a sequence known to have order <= len(terms)/2."""
    C, L = _berlekamp_massey(terms, field.one)
    C = C + [field.zero] * (L + 1 - len(C))
    # u_{n+L} = sum_j a_j u_{n+j} with a_j = -C_{L-j}
    a = [-C[L - j] for j in range(L)]
    k = 0
    while k < L and a[k].is_zero:
        k += 1
    if k == L:
        # eventually zero after k terms
        return LRS(field, (), (), L, tuple(terms[:L]))
    return LRS(field, tuple(a[k:]), tuple(terms[k:L]), k, tuple(terms[:k]))


def minimize_order(field: NumberField, coeffs: Sequence, initial: Sequence) -> LRS:
    """Minimal-order form of the raw recurrence ``coeffs``/``initial``."""
    if len(coeffs) != len(initial):
        raise DomainError("coefficient and initial-value lengths differ")
    raw = LRS(field, tuple(coerce(field, a) for a in coeffs), tuple(coerce(field, u) for u in initial))
    d = raw.order
    if d == 0:
        return raw
    return from_terms(field, raw.terms(2 * d))


# ---------------------------------------------------------------------------
# polynomials over F (lists of FieldElements, constant term first)


def _fstrip(a: list) -> list:
    a = list(a)
    while a and a[-1].is_zero:
        a.pop()
    return a


def _fdivmod(a: list, b: list) -> tuple[list, list]:
    a = _fstrip(a)
    b = _fstrip(b)
    if not b:
        raise ZeroDivisionError
    if len(a) < len(b):
        return [], a
    inv = b[-1].inverse()
    r = list(a)
    q = [b[0] * 0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] * inv
        q[k] = c
        if c.is_zero:
            continue
        for j, x in enumerate(b):
            r[k + j] = r[k + j] - c * x
    return _fstrip(q), _fstrip(r[: len(b) - 1])


def _fmonic(a: list) -> list:
    a = _fstrip(a)
    inv = a[-1].inverse()
    return [x * inv for x in a]


def _fgcd(a: list, b: list) -> list:
    a, b = _fstrip(a), _fstrip(b)
    while b:
        a, b = b, _fdivmod(a, b)[1]
    return _fmonic(a)


def _fderiv(a: list) -> list:
    return _fstrip([a[i] * i for i in range(1, len(a))])


def _yun(g: list) -> list[tuple[list, int]]:
    """Squarefree decomposition of a monic polynomial over a field of
    characteristic zero."""
    out = []
    c = _fgcd(g, _fderiv(g))
    w = _fdivmod(g, c)[0]
    i = 1
    while len(w) > 1:
        y = _fgcd(w, c)
        z = _fdivmod(w, y)[0]
        if len(z) > 1:
            out.append((_fmonic(z), i))
        w = y
        c = _fdivmod(c, y)[0]
        i += 1
    return out


# ---------------------------------------------------------------------------
# characteristic roots


@dataclass(frozen=True)
class RootData:
    """Distinct characteristic roots, their multiplicities, and the field K
    generated by the coefficient field and the roots.

    ``elements[i]`` is root i inside K; ``embed`` maps the coefficient field
    into K."""

    roots: tuple
    multiplicities: tuple
    field: NumberField
    elements: tuple
    source: NumberField
    embed: Callable = dc_field(compare=False, repr=False)

    @property
    def s(self) -> int:
        return len(self.roots)


def _root_order_key(a: AlgebraicNumber):
    """Real part ascending, then imaginary part descending; parts are
    compared after rounding a 200-bit approximation to 40 digits, so equal
    parts of distinct roots tie exactly."""
    z = a.approx(200)
    scale = mpmath.mpf(10) ** 40
    return (int(mpmath.floor(z.real * scale + 0.5)), -int(mpmath.floor(z.imag * scale + 0.5)))


def _roots_over_q(g: Sequence[Fraction]) -> list[tuple[AlgebraicNumber, int]]:
    out = []
    for f, m in factor_over_q(g):
        for i in range(f.degree):
            out.append((AlgebraicNumber(f, i), m))
    return out


def _roots_over_field(F: NumberField, g: list) -> list[tuple[AlgebraicNumber, int]]:
    """Roots of g in C under F's distinguished embedding, via the norm
    polynomial over Q and a certified count per squarefree factor."""
    y, X = sympy.symbols("y X")
    out = []
    for part, m in _yun(g):
        G = sum(sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in co.c])) or [0], y).as_expr()
                * X ** k for k, co in enumerate(part))
        Fy = sympy.Poly(list(reversed(F.mod)), y).as_expr()
        N = sympy.Poly(sympy.resultant(Fy, G, y), X)
        Nc = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(N.all_coeffs())]
        cands = [a for a, _ in _roots_over_q(Nc)]
        want = len(part) - 1
        bits = 64
        alive = list(cands)
        while len(alive) > want:
            keep = []
            for a in alive:
                box = a.enclose(bits)
                acc = None
                for co in reversed(part):
                    cb = F.embed(co, F.theta_index, bits)
                    acc = cb if acc is None else acc * box + cb
                if acc.contains_zero():
                    keep.append(a)
            alive = keep
            bits *= 2
            if bits > 1 << 16:
                raise InternalError("root selection did not converge")
        if len(alive) != want:
            raise InternalError("root count mismatch")
        out += [(a, m) for a in alive]
    return out


def char_roots(lrs: LRS) -> RootData:
    if lrs.order == 0:
        raise DomainError("char_roots: order 0")
    F = lrs.field
    g = list(lrs.charpoly())
    if F.D == 1:
        pairs = _roots_over_q([x.rational_value for x in g])
    else:
        pairs = _roots_over_field(F, g)
    pairs.sort(key=lambda t: _root_order_key(t[0]))
    roots = tuple(a for a, _ in pairs)
    mult = tuple(m for _, m in pairs)
    if F.D == 1:
        K = construct_field(list(roots))
        elems = K.generators

        def embed(x, K=K):
            return K(x.rational_value) if isinstance(x, FieldElement) else K(x)
    else:
        K = construct_field([F.theta_number] + list(roots))
        img = K.generators[0]
        elems = K.generators[1:]

        def embed(x, K=K, img=img, F=F):
            if not isinstance(x, FieldElement):
                return K(x)
            return x.compose(img)
    return RootData(roots, mult, K, tuple(elems), F, embed)


# ---------------------------------------------------------------------------
# exponential-polynomial representation


@dataclass(frozen=True)
class ExpPolyRep:
    """u_n = sum_i P_i(n) lambda_i^n; ``polys[i][k]`` is the coefficient of
    n^k in P_i, an element of ``rd.field``."""

    rd: RootData
    polys: tuple

    def evaluate(self, n: int) -> FieldElement:
        K = self.rd.field
        acc = K.zero
        for lam, P in zip(self.rd.elements, self.polys):
            pn = K.zero
            for c in reversed(P):
                pn = pn * n + c
            acc = acc + pn * lam ** n
        return acc

    def degree(self, i: int) -> int:
        return len(self.polys[i]) - 1


def _solve(A: list[list[FieldElement]], b: list[FieldElement]) -> list[FieldElement]:
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero), None)
        if piv is None:
            raise InternalError("singular generalized Vandermonde system")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def exp_poly(lrs: LRS, rd: Optional[RootData] = None) -> ExpPolyRep:
    """Representation of the core sequence (indices counted from ``shift``)."""
    core = lrs.core()
    if core.order == 0:
        raise DomainError("exp_poly: order 0")
    if rd is None:
        rd = char_roots(core)
    K = rd.field
    if any(x.is_zero for x in rd.elements):
        raise DomainError("exp_poly: characteristic root 0; apply minimize_order first")
    d = core.order
    cols = [(i, k) for i, m in enumerate(rd.multiplicities) for k in range(m)]
    A = []
    for n in range(d):
        row = []
        for i, k in cols:
            row.append(rd.elements[i] ** n * (n ** k))
        A.append(row)
    terms = core.terms(3 * d + 1)
    b = [rd.embed(t) for t in terms[:d]]
    x = _solve(A, b)
    polys = []
    pos = 0
    for m in rd.multiplicities:
        P = tuple(x[pos:pos + m])
        pos += m
        if P[-1].is_zero:
            raise DomainError("exp_poly: recurrence is not minimal; apply minimize_order first")
        polys.append(P)
    rep = ExpPolyRep(rd, tuple(polys))
    for n in range(3 * d + 1):
        if rep.evaluate(n) != rd.embed(terms[n]):
            raise InternalError("exponential polynomial does not reproduce the sequence")
    return rep


# ---------------------------------------------------------------------------
# degeneracy and decomposition


def degeneracy(rd: RootData) -> list[tuple[int, int, int]]:
    out = []
    for i in range(rd.s):
        for j in range(i + 1, rd.s):
            k = is_root_of_unity(rd.elements[i] / rd.elements[j])
            if k is not None:
                out.append((i, j, k))
    return out


@dataclass(frozen=True)
class Branch:
    residue: int
    lrs: LRS
    zero: bool


@dataclass(frozen=True)
class DecompositionResult:
    """Branch r holds the core terms v_{mL + r}; original indices are
    ``shift + m*L + r``."""

    L: int
    branches: tuple
    shift: int = 0


def decompose(lrs: LRS, rd: Optional[RootData] = None) -> DecompositionResult:
    core = lrs.core()
    F = lrs.field
    d = core.order
    if d == 0:
        return DecompositionResult(1, (Branch(0, core, True),), lrs.shift)
    if rd is None:
        rd = char_roots(core)
    L = 1
    for _, _, k in degeneracy(rd):
        L = lcm(L, k)
    if L == 1:
        return DecompositionResult(1, (Branch(0, core, False),), lrs.shift)
    terms = core.terms(2 * d * L + L)
    branches = []
    for r in range(L):
        sub = terms[r::L][: 2 * d]
        b = from_terms(F, sub)
        if b.shift:
            raise InternalError("branch recurrence with a zero root")
        zero = b.order == 0
        if not zero and degeneracy(char_roots(b)):
            raise InternalError("branch is still degenerate")
        branches.append(Branch(r, b, zero))
    return DecompositionResult(L, tuple(branches), lrs.shift)


# ---------------------------------------------------------------------------
# exact evaluation


def _bits(x: FieldElement) -> int:
    return sum(abs(c).bit_length() for c in x.num) + x.den.bit_length()


def eval_exact(lrs: LRS, n: int, budget: Optional[int] = None) -> FieldElement:
    """u_n by binary powering of x modulo the characteristic polynomial
    (equivalently, of the companion matrix)."""
    if n < 0:
        raise DomainError("negative index")
    if n < lrs.shift:
        return lrs.prefix[n]
    m = n - lrs.shift
    d = lrs.order
    F = lrs.field
    if d == 0:
        return F.zero
    if m < d:
        return lrs.initial[m]
    g = list(lrs.charpoly())

    def mulmod(a, b):
        if budget is not None and max(map(_bits, a)) + max(map(_bits, b)) > budget:
            raise BudgetExceeded(f"evaluation of u_{n} exceeds {budget} bits")
        prod = [F.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero:
                continue
            for j, y in enumerate(b):
                prod[i + j] = prod[i + j] + x * y
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c.is_zero:
                continue
            for j in range(d):
                prod[k - d + j] = prod[k - d + j] - c * g[j]
            prod[k] = F.zero
        out = prod[:d]
        if budget is not None and sum(_bits(x) for x in out) > budget:
            raise BudgetExceeded(f"evaluation of u_{n} exceeds {budget} bits")
        return out

    result = [F.one]
    base = [F.zero, F.one] if d > 1 else [lrs.coeffs[0]]
    e = m
    while e:
        if e & 1:
            result = mulmod(result, base)
        e >>= 1
        if e:
            base = mulmod(base, base)
    acc = F.zero
    for c, u in zip(result, lrs.initial):
        acc = acc + c * u
    return acc
