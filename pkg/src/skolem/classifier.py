"""Dominant roots at every place and MSTV witness selection.

A root is dominant at a place when it attains the largest absolute value
there.  Archimedean comparisons go through the exact comparator of
:mod:`skolem.algebraic`; p-adic ones compare exact valuations.  Places above
primes outside :func:`relevant_primes` see every root as a unit, so all roots
are dominant there and they never supply a witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .algebraic import ArchPlace, compare_abs_at
from .errors import DomainError
from .lrs import LRS, ExpPolyRep, RootData, char_roots, degeneracy, exp_poly, minimize_order
from .padic import PadicPlace, places_above, relevant_primes, valuations_at


@dataclass(frozen=True)
class DominanceReport:
    kind: str                      # "arch" or "nonarch"
    place: Union[ArchPlace, PadicPlace]
    dominant: tuple
    valuations: Optional[tuple] = None

    @property
    def count(self) -> int:
        return len(self.dominant)

    @property
    def p(self) -> Optional[int]:
        return self.place.p if self.kind == "nonarch" else None


@dataclass(frozen=True)
class NonArchSummary:
    primes: tuple
    reports: tuple

    # every place above a prime not in ``primes`` has all roots dominant
    all_dominant_elsewhere: bool = True


@dataclass(frozen=True)
class Witness:
    kind: str
    place: Union[ArchPlace, PadicPlace]
    r: int
    dominant: tuple
    report: DominanceReport

    @property
    def p(self) -> Optional[int]:
        return self.report.p

    @property
    def rank(self) -> int:
        return _RANK[(self.kind, self.r)]


class NotInMSTV:
    """Returned by :func:`find_witness` when no place has few enough
    dominant roots (possible only with five or more roots)."""

    def __repr__(self):
        return "NOT_IN_MSTV"

    def __bool__(self):
        return False


NOT_IN_MSTV = NotInMSTV()

_RANK = {
    ("nonarch", 1): 0,
    ("arch", 1): 1,
    ("nonarch", 2): 2,
    ("arch", 2): 3,
    ("arch", 3): 4,
}


def arch_dominance(rd: RootData) -> list[DominanceReport]:
    K = rd.field
    out = []
    for place in K.arch_places:
        best = [0]
        for i in range(1, rd.s):
            c = compare_abs_at(rd.elements[i], rd.elements[best[0]], place)
            if c > 0:
                best = [i]
            elif c == 0:
                best.append(i)
        out.append(DominanceReport("arch", place, tuple(sorted(best))))
    return out


def nonarch_dominance(rd: RootData, precision_ceiling: Optional[int] = None) -> NonArchSummary:
    K = rd.field
    primes = relevant_primes(K, rd.elements)
    reports = []
    for p in primes:
        kw = {} if precision_ceiling is None else {"ceiling": precision_ceiling}
        for place in places_above(K, p, **kw):
            vals = valuations_at(place, rd.elements).values
            m = min(vals)
            dom = tuple(i for i, v in enumerate(vals) if v == m)
            reports.append(DominanceReport("nonarch", place, dom, vals))
    return NonArchSummary(tuple(primes), tuple(reports))


def candidate_witnesses(rd: RootData, precision_ceiling: Optional[int] = None) -> list[Witness]:
    """Every place qualifying under the MSTV definition, best rank first,
    then archimedean places in embedding order and p-adic places by prime."""
    cands = []
    for rep in nonarch_dominance(rd, precision_ceiling).reports:
        if rep.count <= 2:
            cands.append(Witness("nonarch", rep.place, rep.count, rep.dominant, rep))
    for rep in arch_dominance(rd):
        if rep.count <= 3:
            cands.append(Witness("arch", rep.place, rep.count, rep.dominant, rep))
    cands.sort(key=lambda w: w.rank)
    return cands


def select_witness(rd: RootData, rep: Optional[ExpPolyRep] = None, bound_config=None,
                   precision_ceiling: Optional[int] = None):
    """Best witness by rank; ties broken by the smaller tail bound when an
    exponential-polynomial representation is supplied."""
    cands = candidate_witnesses(rd, precision_ceiling)
    if not cands:
        return NOT_IN_MSTV
    top = [w for w in cands if w.rank == cands[0].rank]
    if len(top) == 1 or rep is None:
        return top[0]
    from .bounds import tail_threshold

    def key(iw):
        i, w = iw
        try:
            N = tail_threshold(w, rep, rd, bound_config).N
        except DomainError:
            N = None
        return (N is None, N if N is not None else 0, i)

    return top[min(enumerate(top), key=key)[0]]


def find_witness(lrs: LRS, rd: Optional[RootData] = None, rep: Optional[ExpPolyRep] = None,
                 bound_config=None, precision_ceiling: Optional[int] = None):
    """Witness for a non-degenerate LRS, or :data:`NOT_IN_MSTV`."""
    core = lrs.core()
    if rd is None:
        core = minimize_order(core.field, core.coeffs, core.initial).core()
    if core.order == 0:
        raise DomainError("find_witness: zero sequence")
    if rd is None:
        rd = char_roots(core)
    if degeneracy(rd):
        raise DomainError("find_witness: degenerate sequence, decompose first")
    if rep is None:
        rep = exp_poly(core, rd)
    return select_witness(rd, rep, bound_config, precision_ceiling)
