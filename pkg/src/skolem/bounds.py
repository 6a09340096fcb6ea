"""Explicit linear-forms-in-logarithms bounds and zero-free tails.

``matveev_lower`` and ``yu_upper`` evaluate the two inequalities in outward
rounded interval arithmetic.  ``tail_threshold`` turns a witness into an
index N with u_n != 0 for every n > N.

At the witness place write u_n = (dominant sum) + R(n).  The dominant sum is
bounded below and R(n) above; both bounds are explicit functions of n whose
difference is eventually increasing, and N is the first index at which the
difference is certified positive and increasing (found by doubling then
bisection, so any later index is also covered).

Height bookkeeping for polynomial coefficients: for P(n) = sum_k c_k n^k,
h(P(n)) <= sum_k h(c_k) + log(#terms) + deg(P) log n.  The constant part,
maximised over the dominant roots, is the ``H`` recorded in the audit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import iv

from .algebraic import FieldElement, height, iv_precision, is_root_of_unity, mpf_to_fraction
from .classifier import Witness
from .errors import ConfigurationError, DomainError, InternalError
from .lrs import ExpPolyRep, RootData
from .padic import valuation

PREC = 160
_MIN_A = Fraction(4, 25)  # 0.16


# ---------------------------------------------------------------------------
# the two inequalities


@dataclass(frozen=True)
class BoundParams:
    s: int
    D: int
    A: tuple
    B: object
    p: Optional[int] = None
    e: Optional[int] = None
    f: Optional[int] = None
    C: Optional[object] = None


def lo(x):
    """Exact lower endpoint of an interval as an mpf."""
    return mpmath.mp.make_mpf(x._mpi_[0])


def hi(x):
    """Exact upper endpoint of an interval as an mpf."""
    return mpmath.mp.make_mpf(x._mpi_[1])


def _frac_up(x) -> Fraction:
    return mpf_to_fraction(hi(x))


def _to_iv(x):
    if hasattr(x, "a") and hasattr(x, "b"):
        return x
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return iv.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return _to_iv(Fraction(x))
    return iv.mpf(x)


def _check_matveev(params: BoundParams):
    if params.s < 1 or len(params.A) != params.s:
        raise DomainError("Matveev: need s >= 1 and one A_j per logarithm")
    if params.D < 1:
        raise DomainError("Matveev: D must be a positive integer")
    for a in params.A:
        if Fraction(a) < _MIN_A:
            raise DomainError("Matveev: A_j must be at least 0.16")
    if Fraction(params.B) < 1:
        raise DomainError("Matveev: B must be at least 1")


def matveev_exponent(params: BoundParams):
    """2^(6s+20) D^2 A_1...A_s (1 + log D)(1 + log B) as an interval."""
    _check_matveev(params)
    with iv_precision(PREC):
        prod = iv.mpf(1)
        for a in params.A:
            prod = prod * _to_iv(a)
        D = iv.mpf(params.D)
        return iv.mpf(2) ** (6 * params.s + 20) * D * D * prod * (1 + iv.log(D)) * (1 + iv.log(_to_iv(params.B)))


def matveev_lower(params: BoundParams):
    """Certified lower bound (an mpf) on |Lambda|."""
    E = matveev_exponent(params)
    with iv_precision(PREC):
        return lo(iv.exp(-E))


def _check_yu(params: BoundParams):
    if params.s < 1 or len(params.A) != params.s:
        raise DomainError("Yu: need s >= 1 and one A_j per term")
    if Fraction(params.B) < 3:
        raise DomainError("Yu: B must be at least 3")
    if params.p is not None:
        logp = math.log(params.p)
        for a in params.A:
            if float(Fraction(a)) < logp * (1 - 1e-15):
                raise DomainError("Yu: A_j must be at least log p")
    if params.C is None:
        raise ConfigurationError("Yu: no constant C configured")


def yu_upper(params: BoundParams):
    """Certified upper bound (an mpf) on v_p(Xi) = C A_1...A_s log B."""
    _check_yu(params)
    with iv_precision(PREC):
        prod = _to_iv(params.C)
        for a in params.A:
            prod = prod * _to_iv(a)
        return hi(prod * iv.log(_to_iv(params.B)))


@dataclass(frozen=True)
class YuProvider:
    """Source of the constant in the p-adic inequality."""

    name: str
    func: Callable = field(compare=False)

    def __call__(self, s: int, D: int, p: int, e: int, f: int):
        return self.func(s, D, p, e, f)


def yu_default_constant(s: int, D: int, p: int, e: int, f: int):
    """Conservative constant: D^s times the larger of the two explicit forms
    of Yu's 2007 bound (the factor D^s absorbs the difference between
    absolute and degree-scaled heights)."""
    with iv_precision(PREC):
        s_, D_, e_ = iv.mpf(s), iv.mpf(D), iv.mpf(e)
        logp = iv.log(iv.mpf(p))
        pf = iv.mpf(p) ** f
        flog = iv.mpf(f) * logp
        c1 = 19 * (20 * iv.sqrt(s_ + 1) * D_) ** (2 * (s + 1)) * e_ ** (s - 1) * pf / flog ** 2 \
            * iv.log(iv.exp(5) * s_ * D_)
        c2 = (16 * iv.e * D_) ** (2 * (s + 1)) * s_ ** 1.5 * iv.log(2 * s_ * D_) * iv.log(2 * D_) \
            * e_ ** s * pf / flog ** (s + 2)
        return hi(D_ ** s * iv.mpf([max(c1.a, c2.a), max(c1.b, c2.b)]))


DEFAULT_YU = YuProvider("yu-2007-max-of-two-forms", yu_default_constant)


def fixed_yu(C) -> YuProvider:
    return YuProvider(f"fixed:{C}", lambda s, D, p, e, f, C=C: C)


@dataclass(frozen=True)
class BoundConfig:
    yu: Optional[YuProvider] = None
    min_height: float = 0.0


# ---------------------------------------------------------------------------
# tail thresholds


@dataclass(frozen=True)
class TailBound:
    witness: Witness
    N: Optional[int]
    h_data: dict
    audit: dict
    reason: Optional[str] = None


def voutier_factor(D: int):
    """4 D (log 3D)^3: n h(alpha) <= h(beta) forces n <= this times h(beta)."""
    with iv_precision(PREC):
        return 4 * iv.mpf(D) * iv.log(3 * iv.mpf(D)) ** 3


def _first(pred: Callable[[int], bool], start: int, limit: int = 10 ** 3000) -> int:
    """Least n >= start with pred(n), for pred monotone (false then true)."""
    if pred(start):
        return start
    lo, step = start, 1
    while True:
        hi = start + step
        if hi > limit:
            raise InternalError("tail threshold search did not terminate")
        if pred(hi):
            break
        lo = hi
        step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _L(n: int):
    return iv.log(iv.mpf(n))


def _poly_form_first(delta, k0, k1, k2, start: int, extra=None) -> int:
    """First n >= max(start, 3) with delta*n - (k0 + k1 L + k2 L^2) > 0 and
    delta >= (k1 + 2 k2 L)/n, L = log n, k1, k2 >= 0.  Both conditions
    persist for larger n, so the result covers every later index."""

    def pred(n: int) -> bool:
        L = _L(n)
        g = delta * n - (k0 + k1 * L + k2 * L * L)
        slope = delta - (k1 + 2 * k2 * L) / n
        if not (g.a > 0 and slope.a >= 0):
            return False
        return extra(n) if extra is not None else True

    return _first(pred, max(start, 3))


class _Ctx:
    """Shared per-instance data."""

    def __init__(self, witness: Witness, rep: ExpPolyRep, rd: RootData, config: BoundConfig):
        self.w = witness
        self.rep = rep
        self.rd = rd
        self.K = rd.field
        self.D = self.K.D
        self.cfg = config
        self.polys = rep.polys
        self.degs = [len(P) - 1 for P in self.polys]
        self.dom = list(witness.dominant)
        self.rest = [i for i in range(rd.s) if i not in self.dom]
        self.hcoef = [[self.h_up(c) for c in P] for P in self.polys]
        self.audit: dict = {"D": self.D, "place": _place_label(witness)}
        Hs = []
        for i in self.dom:
            Hs.append(sum(self.hcoef[i], iv.mpf(0)) + iv.log(iv.mpf(len(self.polys[i]))))
        H = Hs[0]
        for x in Hs[1:]:
            H = iv.mpf([max(H.a, x.a), max(H.b, x.b)])
        if config.min_height and H.b < config.min_height:
            H = iv.mpf(config.min_height)
        self.H = iv.mpf(H.b)
        self.audit["H"] = _f(self.H)

    def h_up(self, x: FieldElement):
        if x.is_zero:
            return iv.mpf(0)
        h = height(x)
        return iv.mpf(h.b)

    def h_lo(self, x: FieldElement):
        h = height(x)
        return iv.mpf(h.a)

    # archimedean helpers ------------------------------------------------
    def absv(self, x: FieldElement):
        place = self.w.place
        bits = 128
        while True:
            box = self.K.embed(x, place.index, bits)
            lo2, hi2 = box.abs2()
            a = iv.sqrt(_to_iv(lo2)).a
            b = iv.sqrt(_to_iv(hi2)).b
            if a > 0 or x.is_zero or bits > 1 << 14:
                return iv.mpf([a, b])
            bits *= 2

    def abs_at(self, x: FieldElement, index: int):
        box = self.K.embed(x, index, 128)
        lo2, hi2 = box.abs2()
        return iv.mpf([iv.sqrt(_to_iv(lo2)).a, iv.sqrt(_to_iv(hi2)).b])

    def sum_abs(self, i: int):
        return sum((iv.mpf(self.absv(c).b) for c in self.polys[i]), iv.mpf(0))

    def bracket(self, i: int, n: int):
        """Lower bound of |P_i(n)| / n^deg."""
        P = self.polys[i]
        d = self.degs[i]
        val = iv.mpf(self.absv(P[d]).a)
        for k in range(d):
            val = val - iv.mpf(self.absv(P[k]).b) * iv.mpf(n) ** (k - d)
        return val

    def first_bracket(self, i: int, start: int) -> int:
        if self.degs[i] == 0:
            return start
        return _first(lambda n: self.bracket(i, n).a > 0, max(start, 1))

    def remainder(self, rho):
        """(S_R, d_R, q): |R(n)| <= S_R n^d_R (q rho)^n for n >= 1."""
        if not self.rest:
            return None
        S = iv.mpf(0)
        q = None
        for j in self.rest:
            S = S + self.sum_abs(j)
            qj = self.absv(self.rd.elements[j]) / rho
            q = qj.b if q is None else max(q, qj.b)
        if not q < 1:
            raise InternalError("non-dominant root not certified smaller")
        dR = max(self.degs[j] for j in self.rest)
        return iv.mpf(S.b), dR, iv.mpf(q)

    # p-adic helpers -----------------------------------------------------
    def val(self, x: FieldElement) -> Fraction:
        return valuation(self.w.place, x)

    def vp_upper(self, i: int):
        """(k0, k1): v(P_i(n)) <= k0 + k1 log n whenever P_i(n) != 0, n >= 1."""
        P = self.polys[i]
        if len(P) == 1:
            return _to_iv(self.val(P[0])), iv.mpf(0)
        place = self.w.place
        arch = iv.mpf(0)
        for ap in self.K.arch_places:
            tot = iv.mpf(0)
            for c in P:
                tot = tot + iv.mpf(self.abs_at(c, ap.index).b)
            arch = arch + ap.local_degree * iv.log(tot)
        D = iv.mpf(self.D)
        hs = sum(self.hcoef[i], iv.mpf(0))
        den = place.d_v * iv.log(iv.mpf(place.p))
        return iv.mpf(((arch + D * hs) / den).b), iv.mpf((D * self.degs[i] / den).b)

    def cauchy(self, i: int) -> int:
        """Integer beyond every root of P_i (0 when P_i is constant)."""
        P = self.polys[i]
        d = self.degs[i]
        if d == 0:
            return 0
        idx = self.K.arch_places[0].index
        top = self.abs_at(P[d], idx).a
        m = max(self.abs_at(P[k], idx).b for k in range(d))
        return int(mpmath.ceil(1 + m / top)) + 1


def _f(x) -> float:
    if hasattr(x, "_mpi_"):
        return float(hi(x))
    return float(x)


def _place_label(w: Witness) -> str:
    if w.kind == "arch":
        return f"arch:{w.place.index}"
    return f"p={w.place.p}:{w.place.index}"


def tail_threshold(witness: Witness, rep: ExpPolyRep, rd: RootData,
                   config: Optional[BoundConfig] = None) -> TailBound:
    config = config or BoundConfig()
    if witness.kind == "arch" and witness.r not in (1, 2, 3):
        raise DomainError("archimedean witness must have r <= 3")
    if witness.kind == "nonarch" and witness.r not in (1, 2):
        raise DomainError("non-archimedean witness must have r <= 2")
    if witness.kind not in ("arch", "nonarch"):
        raise DomainError(f"unknown witness kind {witness.kind!r}")
    if len(witness.dominant) != witness.r or any(i >= rd.s for i in witness.dominant):
        raise DomainError("witness does not match the root data")
    dom = witness.dominant
    for a in range(len(dom)):
        for b in range(a + 1, len(dom)):
            if is_root_of_unity(rd.elements[dom[a]] / rd.elements[dom[b]]) is not None:
                raise DomainError("dominant roots with a root-of-unity ratio")
    with iv_precision(PREC):
        ctx = _Ctx(witness, rep, rd, config)
        if witness.kind == "arch":
            N, reason = [_arch_r1, _arch_r2, _arch_r3][witness.r - 1](ctx)
        else:
            N, reason = [_nonarch_r1, _nonarch_r2][witness.r - 1](ctx)
    h_data = {"H": ctx.audit["H"], "degrees": list(ctx.degs)}
    return TailBound(witness, N, h_data, ctx.audit, reason)


# --- r = 1 ------------------------------------------------------------------


def _arch_r1(ctx: _Ctx):
    a = ctx.dom[0]
    rho = ctx.absv(ctx.rd.elements[a])
    ctx.audit["case"] = "arch r=1: direct dominance comparison"
    n0 = ctx.first_bracket(a, 1 if ctx.degs[a] else 0)
    rem = ctx.remainder(rho)
    if rem is None:
        ctx.audit["N"] = n0
        return n0, None
    S, dR, q = rem
    turn = int(mpmath.ceil(dR / (-iv.log(q)).a)) if dR else 0
    start = max(n0, turn, 1)
    da = ctx.degs[a]

    def pred(n):
        lhs = iv.log(ctx.bracket(a, n)) + da * _L(n)
        rhs = iv.log(S) + dR * _L(n) + n * iv.log(q)
        return (lhs - rhs).a > 0

    N = _first(pred, start)
    ctx.audit.update({"S_R": _f(S), "q": _f(q), "d_R": dR, "N": N})
    return N, None


def _nonarch_gap(ctx: _Ctx, dom_val: Fraction):
    vals = ctx.w.report.valuations
    delta = min(vals[j] for j in ctx.rest) - dom_val
    m = min(min(ctx.val(c) for c in ctx.polys[j] if not c.is_zero) for j in ctx.rest)
    return delta, m


def _nonarch_r1(ctx: _Ctx):
    a = ctx.dom[0]
    vals = ctx.w.report.valuations
    ctx.audit["case"] = "nonarch r=1: direct valuation comparison"
    n0 = ctx.cauchy(a)
    if not ctx.rest:
        ctx.audit["N"] = n0
        return n0, None
    delta, m = _nonarch_gap(ctx, vals[a])
    k0, k1 = ctx.vp_upper(a)
    d_ = _to_iv(delta)
    N = _poly_form_first(d_, k0 - _to_iv(m), k1, iv.mpf(0), n0)
    ctx.audit.update({"delta": float(delta), "min_rest_valuation": float(m),
                      "vP_const": _f(k0), "vP_log": _f(k1), "N": N})
    return N, None


# --- r = 2 ------------------------------------------------------------------


def _voutier_floor(ctx: _Ctx, a: int, b: int) -> int:
    V = voutier_factor(ctx.D)
    t = ctx.degs[a] + ctx.degs[b]
    hq0 = 2 * ctx.H
    N = _poly_form_first(iv.mpf(1), V * hq0, V * t, iv.mpf(0), 3)
    ctx.audit["voutier_factor"] = _f(V)
    ctx.audit["voutier_floor"] = _f(V * (hq0 + t * _L(N)))
    ctx.audit["N_floor"] = N
    return N


def _arch_r2(ctx: _Ctx):
    a, b = ctx.dom
    K = ctx.K
    la, lb = ctx.rd.elements[a], ctx.rd.elements[b]
    rho = ctx.absv(la)
    rem = ctx.remainder(rho)
    Pa, Pb = ctx.polys[a], ctx.polys[b]
    # constant coefficients of different size: no linear form needed
    if len(Pa) == 1 and len(Pb) == 1:
        ba, bb = ctx.absv(Pa[0]), ctx.absv(Pb[0])
        gap = ba - bb if ba.a > bb.b else (bb - ba if bb.a > ba.b else None)
        if gap is not None and gap.a > 0:
            ctx.audit["case"] = "arch r=2: |b1| != |b2|, direct comparison"
            if rem is None:
                ctx.audit["N"] = 0
                return 0, None
            S, dR, q = rem
            lg = iv.log(iv.mpf(gap.a)) - iv.log(S)
            N = _poly_form_first(-iv.log(q), -lg, iv.mpf(dR), iv.mpf(0), 1)
            ctx.audit.update({"gap": _f(gap), "N": N})
            return N, None
    ctx.audit["case"] = "arch r=2: Matveev with s=3 (ratio, coefficient quotient, -1)"
    D = iv.mpf(ctx.D)
    alpha = lb / la
    A1 = max(D * ctx.h_up(alpha), iv.pi, _to_iv(_MIN_A), key=lambda x: x.b)
    n0 = max(ctx.first_bracket(a, 3), ctx.first_bracket(b, 3), 3)
    bra, brb = ctx.bracket(a, n0), ctx.bracket(b, n0)
    Sa, Sb = ctx.sum_abs(a), ctx.sum_abs(b)
    kappa = max((iv.log(Sb) - iv.log(bra)).b, (iv.log(Sa) - iv.log(brb)).b,
                (iv.log(bra) - iv.log(Sb)).b, (iv.log(brb) - iv.log(Sa)).b)
    da, db = ctx.degs[a], ctx.degs[b]
    a2 = max((2 * D * ctx.H).b, (iv.mpf(kappa) + iv.pi).b, float(_MIN_A))
    t2 = max(ctx.D * (da + db), abs(db - da))
    c1 = 1 + iv.log(iv.mpf(2))
    cM = iv.mpf(2) ** 38 * D * D * (1 + iv.log(D)) * A1 * iv.pi
    k0 = cM * a2 * c1
    k1 = cM * (a2 + t2 * c1)
    k2 = cM * t2
    floor = _voutier_floor(ctx, a, b)
    start = max(n0, floor)
    ctx.audit.update({"matveev_factor": "2^38 (s=3)", "A1": _f(A1), "A2_const": float(a2),
                      "A2_log": t2, "A3": _f(iv.pi), "B": "n+2", "bracket_a": _f(bra)})
    if rem is None:
        ctx.audit["N"] = start
        return start, None
    S, dR, q = rem
    # log|pair| >= log bra - log 2 - M(n);  log|R| <= log S + dR L + n log q
    base = iv.log(bra) - iv.log(iv.mpf(2)) - iv.log(S)
    N = _poly_form_first(-iv.log(q), k0 - base, k1 + dR, k2, start)
    ctx.audit.update({"q": _f(q), "S_R": _f(S), "N": N,
                      "matveev_at_N": mpmath.nstr(matveev_lower(BoundParams(
                          3, ctx.D, (_frac_up(A1), _frac_up(a2 + t2 * _L(N)), _frac_up(iv.pi)),
                          N + 2)), 8)})
    return N, None


def _nonarch_r2(ctx: _Ctx):
    a, b = ctx.dom
    place = ctx.w.place
    p = place.p
    vals = ctx.w.report.valuations
    Pa, Pb = ctx.polys[a], ctx.polys[b]
    if len(Pa) == 1 and len(Pb) == 1:
        va, vb = ctx.val(Pa[0]), ctx.val(Pb[0])
        if va != vb:
            ctx.audit["case"] = "nonarch r=2: v(b1) != v(b2), direct comparison"
            if not ctx.rest:
                ctx.audit["N"] = 0
                return 0, None
            delta, m = _nonarch_gap(ctx, vals[a])
            N = _poly_form_first(_to_iv(delta), _to_iv(min(va, vb) - m), iv.mpf(0), iv.mpf(0), 1)
            ctx.audit.update({"delta": float(delta), "N": N})
            return N, None
    ctx.audit["case"] = "nonarch r=2: Yu with s=2 (ratio, coefficient quotient)"
    provider = ctx.cfg.yu or DEFAULT_YU
    C = _to_iv(provider(2, ctx.D, p, place.e, place.f))
    logp = iv.log(iv.mpf(p))
    alpha = ctx.rd.elements[b] / ctx.rd.elements[a]
    A1 = iv.mpf(max(ctx.h_up(alpha).b, logp.b))
    a2 = iv.mpf(max((2 * ctx.H).b, logp.b))
    t = ctx.degs[a] + ctx.degs[b]
    floor = _voutier_floor(ctx, a, b)
    start = max(floor, ctx.cauchy(a), ctx.cauchy(b), 3)
    ctx.audit.update({"yu_provider": provider.name, "C": _f(C), "A1": _f(A1), "A2_const": _f(a2),
                      "A2_log": t, "B": "max(n, 3)"})
    if not ctx.rest:
        ctx.audit["N"] = start
        return start, None
    delta, m = _nonarch_gap(ctx, vals[a])
    v0, v1 = ctx.vp_upper(a)
    k0 = v0 - _to_iv(m)
    k1 = v1 + C * A1 * a2
    k2 = C * A1 * t
    N = _poly_form_first(_to_iv(delta), k0, k1, k2, start)
    ctx.audit.update({"delta": float(delta), "N": N,
                      "yu_at_N": float(yu_upper(BoundParams(
                          2, ctx.D, (_frac_up(A1), _frac_up(a2 + t * _L(N))), max(N, 3),
                          p, place.e, place.f, _frac_up(C))))})
    return N, None


# --- r = 3 ------------------------------------------------------------------


def _arch_r3(ctx: _Ctx):
    if any(ctx.degs[i] for i in ctx.dom):
        ctx.audit["case"] = "arch r=3 with polynomial coefficients: no bound"
        return None, "three dominant roots with non-constant coefficients"
    els = ctx.rd.elements
    mods = {i: ctx.absv(ctx.polys[i][0]) for i in ctx.dom}
    order = sorted(ctx.dom, key=lambda i: -float(mods[i].mid))
    i1, i2, i3 = order
    lam1 = els[i1]
    rho = ctx.absv(lam1)
    for i in (i2, i3):
        r = ctx.absv(els[i]) / rho
        if not (r.a <= 1 <= r.b):
            raise InternalError("three-term case without equal moduli")
    b1, b2, b3 = (ctx.polys[i][0] for i in order)
    r2 = mods[i2] / mods[i1]
    r3 = mods[i3] / mods[i1]
    c2 = (r3 * r3 - 1 - r2 * r2) / (2 * r2)
    rem = ctx.remainder(rho)
    hb = {i: ctx.h_up(ctx.polys[i][0]) for i in ctx.dom}
    X2 = hb[i1] + hb[i2]
    X3 = hb[i1] + hb[i3]
    log2 = iv.log(iv.mpf(2))
    if c2.b < -1:
        ctx.audit["case"] = "arch r=3: triangle cannot close, constant lower bound"
        eps_log = lambda n: iv.log(iv.mpf(min(1, (2 * r2 * (-1 - c2) / (2 * r3 + 1)).a)))
        excl = 0
        k_eps = (iv.mpf(0), iv.mpf(0), iv.mpf(0), eps_log(1))
    else:
        ctx.audit["case"] = "arch r=3: triangle angle, Matveev with s=4"
        Dp = iv.mpf(4 * ctx.D * ctx.D)
        alpha = els[i2] / els[i1]
        h_alpha_lo = max(ctx.h_lo(alpha).a, (1 / voutier_factor(ctx.D)).a)
        h_beta = 2 * X2
        h_c2 = 2 * X3 + 3 * X2 + iv.log(iv.mpf(3)) + log2
        h_gamma = h_c2 + 2 * log2
        A = [max((Dp * ctx.h_up(alpha)).b, iv.pi.b, float(_MIN_A)),
             max((Dp * h_beta).b, iv.pi.b, float(_MIN_A)),
             max((Dp * h_gamma).b, iv.pi.b, float(_MIN_A)),
             iv.pi.b]
        prodA = iv.mpf(1)
        for x in A:
            prodA = prodA * iv.mpf(x)
        m0 = iv.mpf(2) ** 44 * Dp * Dp * prodA * (1 + iv.log(Dp))
        excl = int(mpmath.floor(((h_beta + h_gamma) / h_alpha_lo).b)) + 1
        # eps >= 4 r2 exp(-2M)/(pi^2 (2 r3 + 1)), M <= m0 (1 + log 2 + L)
        lc = iv.log(4 * r2 / (iv.pi ** 2 * (2 * r3 + 1)))
        k_eps = (2 * m0 * (1 + log2) - lc, 2 * m0, iv.mpf(0), None)
        ctx.audit.update({"D_prime": int(4 * ctx.D * ctx.D), "A": [_f(x) for x in A], "matveev_factor": "2^44 (s=4)",
                          "B": "n+3", "exclusion": excl})
    start = max(3, excl)
    if rem is None:
        ctx.audit["N"] = start
        return start, None
    S, dR, q = rem
    logb1 = iv.log(iv.mpf(mods[i1].a))
    if k_eps[3] is not None:
        # constant eps
        N = _poly_form_first(-iv.log(q), iv.log(S) - logb1 - k_eps[3], iv.mpf(dR), iv.mpf(0), start)
    else:
        N = _poly_form_first(-iv.log(q), k_eps[0] + iv.log(S) - logb1, k_eps[1] + dR, iv.mpf(0), start)
    ctx.audit.update({"r2": _f(r2), "r3": _f(r3), "c2": [_f(c2.a), _f(c2.b)], "q": _f(q), "N": N})
    return N, None
