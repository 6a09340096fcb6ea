"""Zero search: modular sieving, residue intersection and exact confirmation.

Reduction mod p works in R = F_p[g]/(m(g)) where m is the defining polynomial
of the coefficient field.  For a prime of good reduction R is a product of
finite fields and the companion map is invertible, so the reduced sequence is
purely periodic and every zero index lies in one of its zero residues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt
from typing import Optional, Sequence

import numpy as np
from sympy import nextprime

from .algebraic import NumberField
from .bounds import BoundConfig, tail_threshold
from .classifier import NOT_IN_MSTV, Witness, find_witness
from .errors import BudgetExceeded, DomainError, InternalError, PrecisionExhausted
from .lrs import LRS, char_roots, decompose, eval_exact, exp_poly, minimize_order
from .numerics import pderiv, resultant

MAX_SIEVE_PRIME = 1 << 24


@dataclass(frozen=True)
class SievePrime:
    p: int
    period: int
    zero_residues: tuple
    dimension: int

    @property
    def density(self) -> float:
        return len(self.zero_residues) / self.period


@dataclass(frozen=True)
class Skip:
    p: int
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Overflow:
    """Candidate set too large to list: ``count`` indices in residue classes
    ``residues`` modulo ``modulus`` (truncated to [0, N])."""

    modulus: int
    residues: tuple
    count: int

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# reduction mod p


@lru_cache(maxsize=256)
def _disc(mod: tuple) -> int:
    if len(mod) <= 2:
        return 1
    return resultant(mod, pderiv(mod))


def _reduce_elt(x, p: int, D: int) -> np.ndarray:
    inv = pow(x.den, -1, p)
    v = np.zeros(D, dtype=np.int64)
    for k, c in enumerate(x.num):
        v[k] = (c * inv) % p
    return v


def _mult_matrix(v: np.ndarray, mod: Sequence[int], p: int) -> np.ndarray:
    """Matrix of y -> v*y on F_p[g]/(m), columns = images of g^k."""
    D = len(mod) - 1
    M = np.zeros((D, D), dtype=np.int64)
    col = v.copy()
    red = np.array([c % p for c in mod[:-1]], dtype=np.int64)
    for k in range(D):
        M[:, k] = col
        # multiply col by g, reduce by the monic modulus
        top = col[-1]
        col = np.concatenate(([0], col[:-1]))
        col = (col - top * red) % p
    return M


def _companion(lrs: LRS, p: int) -> tuple[np.ndarray, np.ndarray]:
    """F_p-linear companion map on states (u_n, ..., u_{n+d-1}) and the
    reduced initial state."""
    F = lrs.field
    D, d = F.D, lrs.order
    mod = F.mod
    M = np.zeros((d * D, d * D), dtype=np.int64)
    for j in range(d - 1):
        M[j * D:(j + 1) * D, (j + 1) * D:(j + 2) * D] = np.eye(D, dtype=np.int64)
    for j, a in enumerate(lrs.coeffs):
        M[(d - 1) * D:, j * D:(j + 1) * D] = _mult_matrix(_reduce_elt(a, p, D), mod, p)
    s0 = np.concatenate([_reduce_elt(u, p, D) for u in lrs.initial])
    return M, s0


def _matpow(M: np.ndarray, e: int, p: int) -> np.ndarray:
    R = np.eye(M.shape[0], dtype=np.int64)
    B = M.copy()
    while e:
        if e & 1:
            R = (R @ B) % p
        e >>= 1
        if e:
            B = (B @ B) % p
    return R


def bad_reduction(lrs: LRS, p: int) -> Optional[str]:
    F = lrs.field
    for x in tuple(lrs.coeffs) + tuple(lrs.initial):
        if x.den % p == 0:
            return "p divides a denominator"
    if _disc(F.mod) % p == 0:
        return "p divides the discriminant of the field polynomial"
    if F.norm(lrs.coeffs[0]).numerator % p == 0:
        return "p divides the norm of a_0"
    return None


def _period(M: np.ndarray, s0: np.ndarray, p: int, cap: int) -> Optional[int]:
    """Least n >= 1 with M^n s0 = s0 (baby-step giant-step), None if > cap."""
    m = isqrt(cap) + 1
    baby = {}
    v = s0.copy()
    for j in range(m):
        key = v.tobytes()
        if j and key == s0.tobytes():
            return j
        baby.setdefault(key, j)
        v = (M @ v) % p
    G = _matpow(M, m, p)
    w = s0.copy()
    for i in range(1, m + 2):
        w = (G @ w) % p
        j = baby.get(w.tobytes())
        if j is not None:
            n = i * m - j
            return n if n <= cap else None
    return None


def _zero_residues(M: np.ndarray, s0: np.ndarray, p: int, period: int, D: int) -> tuple:
    """All r < period with u_r = 0 mod p, by blockwise traversal."""
    B = min(period, 4096)
    rows = np.zeros((B * D, M.shape[0]), dtype=np.int64)
    P = np.eye(M.shape[0], dtype=np.int64)
    for k in range(B):
        rows[k * D:(k + 1) * D] = P[:D]
        P = (P @ M) % p
    MB = P  # M^B
    out = []
    s = s0.copy()
    for start in range(0, period, B):
        vals = ((rows @ s) % p).reshape(B, D)
        hits = np.nonzero(~vals.any(axis=1))[0]
        out.extend(int(start + h) for h in hits if start + h < period)
        s = (MB @ s) % p
    return tuple(out)


def sieve_prime(lrs: LRS, p: int, period_cap: int = 10 ** 7):
    """Certified period and zero residues of ``lrs`` mod p, or a Skip."""
    lrs = lrs.core()
    if lrs.order == 0:
        raise DomainError("sieve_prime: zero recurrence")
    if p > MAX_SIEVE_PRIME:
        return Skip(p, "prime too large for word arithmetic")
    why = bad_reduction(lrs, p)
    if why:
        return Skip(p, why)
    M, s0 = _companion(lrs, p)
    period = _period(M, s0, p, period_cap)
    if period is None:
        return Skip(p, "period exceeds cap")
    return SievePrime(p, period, _zero_residues(M, s0, p, period, lrs.field.D), M.shape[0])


def sieve_primes(lrs: LRS, count: int = 25, period_cap: int = 10 ** 7, max_tries: int = 400):
    """The first ``count`` primes above 2 that yield a sieve."""
    out, skipped = [], []
    p = 2
    for _ in range(max_tries):
        if len(out) >= count:
            break
        p = nextprime(p)
        s = sieve_prime(lrs, p, period_cap)
        (out if s else skipped).append(s)
    return out, skipped


class _Checker:
    """u_n mod p for single indices, by powering the companion map."""

    def __init__(self, lrs: LRS, p: int):
        self.p = p
        self.D = lrs.field.D
        self.M, self.s0 = _companion(lrs, p)

    def nonzero_at(self, n: int) -> bool:
        v = (_matpow(self.M, n, self.p) @ self.s0) % self.p
        return bool(v[: self.D].any())


def _checkers(lrs: LRS, after: int, count: int) -> list:
    """Good-reduction primes beyond the sieving ones.  A nonzero residue
    refutes a candidate; agreement with zero proves nothing."""
    out, p = [], after
    while len(out) < count and p < MAX_SIEVE_PRIME:
        p = nextprime(p)
        if bad_reduction(lrs, p) is None:
            out.append(_Checker(lrs, p))
    return out


# ---------------------------------------------------------------------------
# residue intersection


def _crt_merge(m1: int, R1: Sequence[int], m2: int, R2: Sequence[int]):
    g = gcd(m1, m2)
    L = m1 // g * m2
    by_class: dict = {}
    for r in R2:
        by_class.setdefault(r % g, []).append(r)
    inv = pow(m1 // g, -1, m2 // g) if m2 // g > 1 else 0
    out = []
    for a in R1:
        for b in by_class.get(a % g, ()):
            # x = a + m1 * t, t = (b - a)/g * inv mod m2/g
            t = ((b - a) // g * inv) % (m2 // g) if m2 // g > 1 else 0
            out.append(a + m1 * t)
    out.sort()
    return L, out


def _count_upto(modulus: int, residues: Sequence[int], N: int) -> int:
    return sum((N - r) // modulus + 1 for r in residues if r <= N)


def prune(sieves: Sequence[SievePrime], N: int, cap: int = 10 ** 6):
    """Indices 0 <= n <= N passing every sieve, or an :class:`Overflow`.

    Residue classes are intersected greedily, always merging the sieve that
    keeps the class count smallest.  Once the combined modulus exceeds N the
    surviving classes are listed explicitly and filtered by the rest."""
    if N < 0:
        return []
    left = sorted(sieves, key=lambda s: s.p)
    modulus, residues = 1, [0]
    while left and modulus <= N:
        def est(s):
            return len(residues) * len(s.zero_residues) / gcd(modulus, s.period)

        s = min(left, key=lambda s: (est(s), s.p))
        if est(s) > 4 * cap:
            break
        left.remove(s)
        modulus, residues = _crt_merge(modulus, residues, s.period, s.zero_residues)
        if not residues:
            return []
    total = _count_upto(modulus, residues, N)
    if total > cap:
        # the remaining sieves may still thin the list, but only if it fits
        return Overflow(modulus, tuple(residues[:64]), total)
    out = sorted(r + k * modulus for r in residues if r <= N for k in range((N - r) // modulus + 1))
    for s in left:
        zs = set(s.zero_residues)
        out = [n for n in out if n % s.period in zs]
    return out


# ---------------------------------------------------------------------------
# solver


@dataclass
class SolveConfig:
    primes: int = 25
    period_cap: int = 10 ** 7
    eval_budget_bits: int = 1 << 26
    candidate_cap: int = 10 ** 6
    fallback_limit: int = 10 ** 5
    refute_primes: int = 40
    precision_ceiling: Optional[int] = None
    bound: BoundConfig = field(default_factory=BoundConfig)


@dataclass
class BranchInfo:
    residue: int
    zero: bool
    witness: Optional[Witness] = None
    N: Optional[int] = None
    searched_to: Optional[int] = None
    sieve_primes: tuple = ()
    candidates: Optional[int] = None
    note: Optional[str] = None


@dataclass
class ZeroReport:
    progressions: list
    finite_zeros: list
    unresolved: list
    status: str
    L: int = 1
    shift: int = 0
    branches: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def contains(self, n: int) -> Optional[bool]:
        """True/False for a decided index, None when it is unresolved."""
        if n in self.finite_zeros:
            return True
        if any(n >= o and (n - o) % m == 0 for o, m in self.progressions):
            return True
        for u in self.unresolved:
            if isinstance(u, int) and u == n:
                return None
            if isinstance(u, dict) and (n - u["offset"]) % u["modulus"] == 0 and \
                    u["from"] <= n and (u["to"] is None or n <= u["to"]):
                return None
        return False


def _solve_branch(br_lrs: LRS, info: BranchInfo, cfg: SolveConfig):
    """Zeros of one non-degenerate branch in branch-local indices.

    Returns (zeros, unresolved indices, unresolved range or None)."""
    rd = char_roots(br_lrs)
    rep = exp_poly(br_lrs, rd)
    zeros: list = []
    pending: list = []
    try:
        w = find_witness(br_lrs, rd, rep, cfg.bound, cfg.precision_ceiling)
    except PrecisionExhausted as e:
        w, info.note = None, f"precision exhausted during classification: {e}"
    if w is NOT_IN_MSTV:
        info.note = "undecided-outside-MSTV"
    elif w is not None:
        info.witness = w
        tb = tail_threshold(w, rep, rd, cfg.bound)
        info.N = tb.N
        if tb.N is None:
            info.note = tb.reason
    limit = info.N if info.N is not None else cfg.fallback_limit
    info.searched_to = limit
    sieves, _ = sieve_primes(br_lrs, cfg.primes, cfg.period_cap)
    info.sieve_primes = tuple(s.p for s in sieves)
    cands = prune(sieves, limit, cfg.candidate_cap)
    if isinstance(cands, Overflow):
        info.candidates = cands.count
        return zeros, pending, (0, limit, f"{cands.count} sieve survivors exceed the candidate cap")
    info.candidates = len(cands)
    checkers = _checkers(br_lrs, max(s.p for s in sieves) if sieves else 2, cfg.refute_primes)
    for m in cands:
        if any(c.nonzero_at(m) for c in checkers):
            continue
        try:
            v = eval_exact(br_lrs, m, cfg.eval_budget_bits)
        except BudgetExceeded:
            pending.append(m)
            continue
        if v.is_zero:
            zeros.append(m)
    if info.N is None:
        return zeros, pending, (limit + 1, None, info.note or "no tail bound")
    return zeros, pending, None


def solve(lrs: LRS, config: Optional[SolveConfig] = None) -> ZeroReport:
    """Zero set of ``lrs``: progressions from identically-zero branches,
    confirmed finite zeros, and anything left undecided."""
    cfg = config or SolveConfig()
    if not lrs.shift:
        lrs = minimize_order(lrs.field, lrs.coeffs, lrs.initial)
    finite = [n for n, u in enumerate(lrs.prefix) if u.is_zero]
    dec = decompose(lrs)
    L, shift = dec.L, dec.shift
    progressions, unresolved, infos, notes = [], [], [], []
    for br in dec.branches:
        info = BranchInfo(br.residue, br.zero)
        infos.append(info)
        if br.zero:
            progressions.append((shift + br.residue, L))
            continue
        z, pending, rng = _solve_branch(br.lrs, info, cfg)
        glob = lambda m, r=br.residue: shift + m * L + r
        finite += [glob(m) for m in z]
        unresolved += [glob(m) for m in pending]
        if rng is not None:
            lo_, hi_, why = rng
            unresolved.append({"offset": shift + br.residue, "modulus": L, "from": glob(lo_),
                               "to": None if hi_ is None else glob(hi_), "reason": why})
        if info.note:
            notes.append(f"branch {br.residue}: {info.note}")
    status = "complete" if not unresolved else "incomplete"
    return ZeroReport(sorted(progressions), sorted(set(finite)), unresolved, status, L, shift, infos, notes)


def iter_terms(lrs: LRS):
    """u_0, u_1, ... by exact iteration, keeping only a window of terms."""
    yield from lrs.prefix
    d = lrs.order
    if d == 0:
        while True:
            yield lrs.field.zero
    w = list(lrs.initial)
    yield from w
    while True:
        acc = lrs.field.zero
        for a, u in zip(lrs.coeffs, w):
            if not a.is_zero:
                acc = acc + a * u
        w = w[1:] + [acc]
        yield acc


def enumerate_zeros(lrs: LRS, limit: int) -> list[int]:
    """Brute-force oracle: indices n <= limit with u_n = 0."""
    out = []
    for n, u in enumerate(iter_terms(lrs)):
        if n > limit:
            break
        if u.is_zero:
            out.append(n)
    return out
