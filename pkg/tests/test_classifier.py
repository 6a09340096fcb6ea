import pytest

from skolem.algebraic import NumberField
from skolem.classifier import (NOT_IN_MSTV, arch_dominance, candidate_witnesses, find_witness,
                               nonarch_dominance, select_witness)
from skolem.errors import DomainError
from skolem.lrs import LRS, char_roots, exp_poly

Q = NumberField.rationals()


def rat(coeffs, initial):
    return LRS(Q, tuple(Q.element([a]) for a in coeffs), tuple(Q.element([u]) for u in initial))


FIB = rat([1, 1], [0, 1])
QUARTIC = rat([-625, 350, -98, 14], [0, 1, 2, 3])


def root_values(rd, idx):
    return sorted(complex(rd.roots[i].approx()).real for i in idx)


def test_fibonacci_arch_r1():
    w = find_witness(FIB)
    assert (w.kind, w.r) == ("arch", 1)
    rd = char_roots(FIB)
    for rep in arch_dominance(rd):
        assert rep.count == 1


def test_fibonacci_has_no_relevant_primes():
    assert nonarch_dominance(char_roots(FIB)).primes == ()


def test_two_and_one():
    rd = char_roots(rat([-2, 3], [0, 1]))
    (rep,) = arch_dominance(rd)
    assert root_values(rd, rep.dominant) == [2.0]


def test_two_and_three_at_p2():
    rd = char_roots(rat([-6, 5], [0, 1]))
    reps = [r for r in nonarch_dominance(rd).reports if r.p == 2]
    assert len(reps) == 1
    assert reps[0].count == 1
    assert root_values(rd, reps[0].dominant) == [3.0]


def test_quartic_dominance_patterns():
    rd = char_roots(QUARTIC)
    for rep in arch_dominance(rd):
        assert rep.count == 4
    na = nonarch_dominance(rd)
    assert na.primes == (5,)
    assert [r.count for r in na.reports] == [2, 2]
    assert sorted(v for r in na.reports for v in r.valuations) == [0, 0, 0, 0, 2, 2, 2, 2]


def test_quartic_witness_is_five_adic_pair():
    rd = char_roots(QUARTIC)
    w = select_witness(rd)
    assert (w.kind, w.p, w.r) == ("nonarch", 5, 2)


def test_degenerate_input_is_rejected():
    with pytest.raises(DomainError):
        find_witness(rat([-1, 0], [0, 1]))
    with pytest.raises(DomainError):
        find_witness(QUARTIC)


def test_ranking_prefers_nonarch_single():
    # roots 2 and 3: the 2-adic place has one dominant root
    cands = candidate_witnesses(char_roots(rat([-6, 5], [0, 1])))
    assert (cands[0].kind, cands[0].r) == ("nonarch", 1)


def test_not_in_mstv_sentinel():
    assert not NOT_IN_MSTV
    assert repr(NOT_IN_MSTV) == "NOT_IN_MSTV"


def test_tie_break_uses_tail_bound():
    rd = char_roots(FIB)
    rep = exp_poly(FIB, rd)
    assert select_witness(rd, rep).kind == "arch"


def test_zero_sequence_rejected():
    with pytest.raises(DomainError):
        find_witness(rat([1, 1], [0, 0]))
