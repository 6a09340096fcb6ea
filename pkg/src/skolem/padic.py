"""Non-Archimedean places of a number field and valuations at them.

The places above p of K = Q(theta) correspond to the irreducible factors of
the defining polynomial F over Q_p.  They are found here with MacLane's
inductive valuations, organised the way the Montes algorithm does it: a tree
of *types*, each a chain of key polynomials phi_1, phi_2, ... with slopes
lambda_i, residual polynomials over finite-field towers, and branching on
the irreducible factors of those residual polynomials.  A leaf of the tree is
one place; its ramification index and residue degree come directly from the
type.  No ring of integers is ever computed.

Valuations are normalised so that v(p) = 1.  At a leaf with base valuation
mu_r and approximant phi (degree n_w, v(phi(theta)) = lam_phi), the value of
g(theta) is read off the phi-adic expansion; when the minimum is not attained
uniquely, phi is refined by one more MacLane step and the test repeated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from sympy import factorint

from .algebraic import FieldElement, NumberField
from .errors import DomainError, InternalError, PrecisionExhausted
from .finite_fields import ExtField, PrimeField, ffactor, fmonic, fstrip
from .numerics import padd, pdivmod, pmul, pscale, strip

INF = math.inf
DEFAULT_PRECISION = 32
DEFAULT_CEILING = 4096


def vp(x, p: int):
    """p-adic valuation of a rational, infinity for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _vadd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _vscale(a: Sequence[int], k: int) -> list[int]:
    return [k * x for x in a]


def _ppow(a: tuple, n: int) -> tuple:
    out: tuple = (Fraction(1),)
    for _ in range(n):
        out = pmul(out, a)
    return out


def _expand(a: tuple, phi: tuple) -> list[tuple]:
    """phi-adic expansion a = sum a_s phi^s with deg a_s < deg phi."""
    a = strip(a)
    out = []
    while a:
        q, r = pdivmod(a, phi)
        out.append(strip(r))
        a = strip(q)
    return out


class _Escalate(Exception):
    """Working precision too small for the slopes met so far."""


@dataclass(frozen=True)
class _Level:
    phi: tuple
    kappa: object
    lam: Optional[Fraction] = None
    e: int = 1
    E: int = 1
    u: tuple = ()
    psi: Optional[tuple] = None
    next_kappa: object = None
    z: object = None


class _Type:
    """Computations relative to a chain of levels (list index i-1 holds
    level i)."""

    def __init__(self, p: int, levels: Sequence[_Level]):
        self.p = p
        self.lv = list(levels)

    def E(self, k: int) -> int:
        return 1 if k == 0 else self.lv[k - 1].E

    def mu(self, i: int, a: tuple):
        a = strip(a)
        if not a:
            return INF
        if i == 0:
            return min(vp(c, self.p) for c in a if c)
        L = self.lv[i - 1]
        best = INF
        for s, b in enumerate(_expand(a, L.phi)):
            if b:
                v = self.mu(i - 1, b) + s * L.lam
                if v < best:
                    best = v
        return best

    def std_mono(self, k: int, gamma) -> list[int]:
        gamma = Fraction(gamma)
        if k == 0:
            if gamma.denominator != 1:
                raise InternalError("value outside the value group")
            return [int(gamma)]
        L = self.lv[k - 1]
        Eprev = self.E(k - 1)
        for n in range(L.e):
            r = gamma - n * L.lam
            if (r * Eprev).denominator == 1:
                return self.std_mono(k - 1, r) + [n]
        raise InternalError("value outside the value group")

    def mono_red(self, i: int, vec: Sequence[int]):
        """Reduction in kappa_i of a value-zero monomial in p, phi_1..phi_{i-1}."""
        if i == 1:
            if vec and vec[0] != 0:
                raise InternalError("monomial of nonzero value")
            return self.lv[0].kappa.one()
        k = i - 1
        L = self.lv[k - 1]
        nk = vec[k] if len(vec) > k else 0
        if nk % L.e:
            raise InternalError("monomial of nonzero value")
        q = nk // L.e
        rest = _vadd(list(vec[:k]), _vscale(L.u, q))
        r = self.mono_red(k, rest)
        Ki = L.next_kappa
        return Ki.mul(Ki.embed(r), Ki.pow(L.z, q))

    def res(self, i: int, a: tuple):
        """(mu_{i-1}(a), residue in kappa_i) for nonzero a with deg < m_i."""
        p = self.p
        if i == 1:
            g = min(vp(c, p) for c in a if c)
            K1 = self.lv[0].kappa
            coeffs = []
            for c in a:
                c = Fraction(c) / Fraction(p) ** g
                coeffs.append(c.numerator * pow(c.denominator, -1, p) % p)
            coeffs += [0] * (K1.k - len(coeffs))
            return g, tuple(coeffs)
        k = i - 1
        L = self.lv[k - 1]
        Kk = L.kappa
        Ki = L.next_kappa
        data = []
        for s, b in enumerate(_expand(a, L.phi)):
            if b:
                gs, rs = self.res(k, b)
                data.append((s, gs, rs))
        gamma = min(gs + s * L.lam for s, gs, _ in data)
        n = self.std_mono(k, gamma)[-1]
        base = self.std_mono(k - 1, gamma - n * L.lam)
        acc = Ki.zero()
        for s, gs, rs in data:
            if gs + s * L.lam != gamma:
                continue
            j = (s - n) // L.e
            vec = _vadd(_vadd(self.std_mono(k - 1, gs), _vscale(L.u, j)), _vscale(base, -1))
            t = Kk.mul(rs, self.mono_red(k, vec))
            acc = Ki.add(acc, Ki.mul(Ki.embed(t), Ki.pow(L.z, j)))
        return gamma, acc

    def lift(self, i: int, gamma, zeta) -> tuple:
        """Polynomial c, deg c < m_i, with mu_{i-1}(c) = gamma and
        res_i(c) = zeta."""
        p = self.p
        gamma = Fraction(gamma)
        if i == 1:
            if gamma.denominator != 1:
                raise InternalError("lift: value outside the value group")
            g = int(gamma)
            scale = Fraction(p) ** g
            return strip(tuple(scale * x for x in zeta))
        k = i - 1
        L = self.lv[k - 1]
        Kk = L.kappa
        n = self.std_mono(k, gamma)[-1]
        base = self.std_mono(k - 1, gamma - n * L.lam)
        out: tuple = ()
        for j, zj in enumerate(zeta):
            if Kk.is_zero(zj):
                continue
            s = n + j * L.e
            gs = gamma - s * L.lam
            vec = _vadd(_vadd(self.std_mono(k - 1, gs), _vscale(L.u, j)), _vscale(base, -1))
            t = self.mono_red(k, vec)
            b = self.lift(k, gs, Kk.mul(zj, Kk.inv(t)))
            out = padd(out, pmul(b, _ppow(L.phi, s)))
        return strip(out)

    def residual_poly(self, i: int, data: dict, s0: int, s1: int) -> tuple:
        """Residual polynomial of the side [s0, s1] of slope -lam_i, from the
        precomputed (gamma_s, rho_s) of the phi_i-expansion coefficients."""
        L = self.lv[i - 1]
        K = L.kappa
        g0 = data[s0][0]
        line = g0 + s0 * L.lam
        base = self.std_mono(i - 1, g0)
        out = []
        for j in range((s1 - s0) // L.e + 1):
            s = s0 + j * L.e
            if s in data and data[s][0] + s * L.lam == line:
                gs, rs = data[s]
                vec = _vadd(_vadd(self.std_mono(i - 1, gs), _vscale(L.u, j)), _vscale(base, -1))
                out.append(K.mul(rs, self.mono_red(i, vec)))
            else:
                out.append(K.zero())
        return tuple(out)

    def key(self, i: int, psi: tuple) -> tuple:
        """Key polynomial phi_{i+1} with residual polynomial psi at level i."""
        L = self.lv[i - 1]
        K = L.kappa
        f = len(psi) - 1
        phi_e = _ppow(L.phi, L.e)
        out = _ppow(phi_e, f)
        for j in range(f):
            if K.is_zero(psi[j]):
                continue
            gj = (f - j) * L.e * L.lam
            vec = _vadd(_vadd(self.std_mono(i - 1, gj), _vscale(L.u, j)), _vscale(L.u, -f))
            zeta = K.mul(psi[j], K.inv(self.mono_red(i, vec)))
            c = self.lift(i, gj, zeta)
            out = padd(out, pmul(c, _ppow(phi_e, j)))
        return strip(out)


def _truncate(poly: tuple, p: int, K: int) -> tuple:
    """Reduce p-integral coefficients modulo p^K."""
    mod = p ** K
    out = []
    for c in poly:
        c = Fraction(c)
        if c.denominator % p:
            r = c.numerator * pow(c.denominator, -1, mod) % mod
            out.append(Fraction(r))
        else:
            out.append(c)
    return strip(tuple(out))


def _lower_hull(points: list[tuple[int, object]]) -> list[tuple[int, object]]:
    hull: list = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the new segment
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


# ---------------------------------------------------------------------------
# places


class PadicPlace:
    """A place above p: ramification index ``e``, residue degree ``f`` and a
    local factor of the defining polynomial known to the current
    precision (``local_factor``, with v(local_factor(theta)) = ``precision``
    at this place, or exact when ``precision`` is infinite)."""

    def __init__(self, field: NumberField, p: int, index: int, levels: list[_Level],
                 phi: tuple, lam, kappa_next, e: int, f: int, ceiling: int):
        self.field = field
        self.p = p
        self.index = index
        self._levels = levels
        self._phi = phi
        self._lam = lam
        self._kappa_next = kappa_next
        self.e = e
        self.f = f
        self.ceiling = ceiling

    @property
    def d_v(self) -> int:
        return self.e * self.f

    local_degree = d_v

    @property
    def local_factor(self) -> tuple:
        return self._phi

    @property
    def precision(self):
        return self._lam

    def __repr__(self):
        return f"PadicPlace(p={self.p}, index={self.index}, e={self.e}, f={self.f})"

    # valuation ------------------------------------------------------------
    def _value_poly(self, q: tuple):
        T = _Type(self.p, self._levels)
        r = len(self._levels)
        while True:
            if self._lam == INF:
                return T.mu(r, pdivmod(q, self._phi)[1])
            vals = [T.mu(r, b) + s * self._lam for s, b in enumerate(_expand(q, self._phi)) if b]
            best = min(vals)
            if vals.count(best) == 1:
                return best
            self._refine()

    def _refine(self):
        if self._lam > self.ceiling:
            raise PrecisionExhausted(f"valuation at a place above {self.p} needs more than p^{self.ceiling}")
        p = self.p
        lv = self._levels
        r = len(lv)
        T0 = _Type(p, lv)
        lam = Fraction(self._lam)
        E = T0.E(r)
        if (lam * E).denominator != 1:
            raise InternalError("leaf refinement with ramified slope")
        new = _Level(phi=self._phi, kappa=self._kappa_next, lam=lam, e=1, E=E,
                     u=tuple(T0.std_mono(r, lam)))
        T = _Type(p, lv + [new])
        F = tuple(Fraction(c) for c in self.field.mod)
        coeffs = _expand(F, self._phi)
        data = {s: T.res(r + 1, coeffs[s]) for s in (0, 1)}
        R = T.residual_poly(r + 1, data, 0, 1)
        K = self._kappa_next
        psi = (K.mul(R[0], K.inv(R[1])), K.one())
        phi = T.key(r + 1, psi)
        phi = _truncate(phi, p, 2 * int(lam) + 16)
        self._phi = phi
        self._lam = _leaf_slope(T0, r, F, phi)


def _leaf_slope(T: _Type, r: int, F: tuple, phi: tuple):
    co = _expand(F, phi)
    if not co[0]:
        return INF
    return T.mu(r, co[0]) - T.mu(r, co[1])


def _om_tree(field: NumberField, p: int, K: int, ceiling: int) -> list[PadicPlace]:
    F = tuple(Fraction(c) for c in field.mod)
    Fp = PrimeField(p)
    Fbar = fstrip(Fp, [int(c) % p for c in field.mod])
    leaves: list = []
    for phibar, omega in ffactor(Fp, Fbar):
        phi1 = tuple(Fraction(int(c)) for c in phibar)
        kappa1 = ExtField(Fp, phibar)
        _branch(p, F, [_Level(phi=phi1, kappa=kappa1)], omega, leaves, K)
    out = []
    for idx, (levels, phi, lam, kn, e, f) in enumerate(leaves):
        out.append(PadicPlace(field, p, idx, levels, phi, lam, kn, e, f, ceiling))
    return out


def _branch(p: int, F: tuple, levels: list[_Level], omega: int, leaves: list, K: int,
            floor=None):
    i = len(levels)
    cur = levels[-1]
    T = _Type(p, levels)
    coeffs = _expand(F, cur.phi)
    if not coeffs[0]:
        # phi_i is the defining polynomial itself
        if omega != 1:
            raise InternalError("exact factor with multiplicity")
        leaves.append((levels[:-1], cur.phi, INF, cur.kappa, T.E(i - 1), cur.kappa.abs_degree))
        return
    data = {}
    for s, b in enumerate(coeffs):
        if b:
            data[s] = T.res(i, b)
    thresh = T.mu(i - 1, cur.phi) if floor is None else floor
    hull = _lower_hull([(s, data[s][0]) for s in sorted(data)])
    total = 0
    for (s0, g0), (s1, g1) in zip(hull, hull[1:]):
        lam = Fraction(g0 - g1) / (s1 - s0)
        if lam <= thresh:
            break
        total += s1 - s0
        Eprev = T.E(i - 1)
        e = (lam * Eprev).denominator
        if lam * (s1 - s0) + 2 >= K:
            raise _Escalate()
        lvl = replace(cur, lam=lam, e=e, E=Eprev * e)
        lvl = replace(lvl, u=tuple(_Type(p, levels[:-1] + [lvl]).std_mono(i - 1, e * lam)))
        base = levels[:-1] + [lvl]
        Tb = _Type(p, base)
        R = Tb.residual_poly(i, data, s0, s1)
        Ki = cur.kappa
        R = fmonic(Ki, R)
        for psi, a in ffactor(Ki, R):
            nk = ExtField(Ki, psi)
            full = replace(lvl, psi=psi, next_kappa=nk, z=nk.gen())
            chain = levels[:-1] + [full]
            Tc = _Type(p, chain)
            phi_next = Tc.key(i, psi)
            if e * (len(psi) - 1) * lam + 2 >= K:
                raise _Escalate()
            phi_next = _truncate(phi_next, p, K)
            if a == 1:
                lam_phi = _leaf_slope(Tc, i, F, phi_next)
                leaves.append((chain, phi_next, lam_phi, nk, full.E, nk.abs_degree))
            elif e == 1 and len(psi) == 2:
                # same-degree refinement: replace phi_i, keep only the steeper sides
                _branch(p, F, levels[:-1] + [_Level(phi=phi_next, kappa=Ki)], a, leaves, K, lam)
            else:
                _branch(p, F, chain + [_Level(phi=phi_next, kappa=nk)], a, leaves, K)
    if total != omega:
        raise InternalError(f"principal polygon length {total} != {omega}")


_PLACE_CACHE: dict = {}


def places_above(field: NumberField, p: int, precision: int = DEFAULT_PRECISION,
                 ceiling: int = DEFAULT_CEILING) -> list[PadicPlace]:
    """All places of ``field`` above the prime ``p`` with certified (e, f)."""
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise DomainError(f"{p} is not prime")
    key = (id(field), p, ceiling)
    hit = _PLACE_CACHE.get(key)
    if hit is not None and hit[0] is field:
        return hit[1]
    K = max(8, precision)
    while True:
        try:
            places = _om_tree(field, p, K, ceiling)
            break
        except _Escalate:
            K *= 2
            if K > ceiling:
                raise PrecisionExhausted(f"places above {p}: precision ceiling p^{ceiling} reached")
    if sum(pl.d_v for pl in places) != field.D:
        raise InternalError("local degrees do not sum to the field degree")
    _PLACE_CACHE[key] = (field, places)
    return places


# ---------------------------------------------------------------------------
# valuations


@dataclass(frozen=True)
class ValuationVector:
    place: PadicPlace
    values: tuple

    def abs_value_log(self, k: int) -> float:
        """log |x_k|_v with |x|_v = p^(-v(x))."""
        return -float(self.values[k]) * math.log(self.place.p)


def valuation(place: PadicPlace, x: FieldElement) -> Fraction:
    if x.is_zero:
        raise DomainError("valuation of zero")
    if x.field is not place.field:
        raise DomainError("element of a different field")
    v = place._value_poly(tuple(Fraction(c) for c in x.num))
    return Fraction(v) - vp(x.den, place.p)


def valuations_at(place: PadicPlace, elements: Sequence[FieldElement]) -> ValuationVector:
    return ValuationVector(place, tuple(valuation(place, x) for x in elements))


def relevant_primes(field: NumberField, elements: Sequence[FieldElement]) -> list[int]:
    """Primes at which some element can have nonzero valuation: those
    dividing the leading or constant coefficient of a minimal polynomial."""
    primes: set[int] = set()
    for x in elements:
        if x.is_zero:
            raise DomainError("relevant_primes: zero element")
        f = x.minpoly.coeffs
        for c in (f[0], f[-1]):
            primes.update(int(q) for q in factorint(abs(int(c))))
    return sorted(primes)
