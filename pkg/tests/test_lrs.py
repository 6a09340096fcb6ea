from fractions import Fraction

import pytest

from skolem.algebraic import NumberField
from skolem.errors import BudgetExceeded, DomainError
from skolem.lrs import LRS, char_roots, decompose, degeneracy, eval_exact, exp_poly, minimize_order
from skolem.numerics import IntPolynomial

Q = NumberField.rationals()
GAUSS = NumberField(IntPolynomial((1, 0, 1)), 0)


def rat(coeffs, initial, K=Q):
    c = lambda x: K.element(x if isinstance(x, list) else [x])
    return LRS(K, tuple(c(a) for a in coeffs), tuple(c(u) for u in initial))


def ints(terms):
    return [t.rational_value for t in terms]


FIB = rat([1, 1], [0, 1])


class TestTerms:
    def test_fibonacci(self):
        assert ints(FIB.terms(11)) == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]

    def test_eval_exact(self):
        assert eval_exact(FIB, 10).rational_value == 55
        assert eval_exact(FIB, 0).rational_value == 0
        assert eval_exact(rat([1, 1], [5, -3]), 5).is_zero

    def test_eval_exact_matches_iteration(self):
        L = rat([3, -1, 2], [1, -2, 4])
        terms = L.terms(60)
        for n in range(60):
            assert eval_exact(L, n) == terms[n]

    def test_eval_exact_large_index(self):
        # F_200 by the doubling identity
        a, b = 0, 1
        for _ in range(200):
            a, b = b, a + b
        assert eval_exact(FIB, 200).rational_value == a

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            eval_exact(FIB, 10 ** 9, budget=1 << 12)

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            LRS(Q, (Q.one,), (Q.one, Q.one))


class TestMinimize:
    def test_powers_of_two(self):
        m = minimize_order(Q, (Q.element([-2]), Q.element([3])), (Q.one, Q.element([2])))
        assert m.order == 1
        assert ints(m.terms(6)) == [1, 2, 4, 8, 16, 32]

    def test_fibonacci_unchanged(self):
        assert minimize_order(Q, FIB.coeffs, FIB.initial).order == 2

    def test_zero_sequence(self):
        assert minimize_order(Q, FIB.coeffs, (Q.zero, Q.zero)).order == 0

    def test_eventually_zero_gets_a_shift(self):
        m = minimize_order(Q, (Q.zero, Q.zero), (Q.element([7]), Q.zero))
        assert m.order == 0 and m.shift == 1
        assert ints(m.terms(4)) == [7, 0, 0, 0]


class TestRoots:
    def test_fibonacci(self):
        rd = char_roots(FIB)
        assert rd.s == 2 and rd.multiplicities == (1, 1)
        vals = sorted(complex(r.approx()).real for r in rd.roots)
        assert vals == pytest.approx([(1 - 5 ** 0.5) / 2, (1 + 5 ** 0.5) / 2])

    def test_double_root(self):
        rd = char_roots(rat([-1, 2], [0, 1]))
        assert rd.s == 1 and rd.multiplicities == (2,)
        assert rd.roots[0].rational_value == 1

    def test_quartic(self):
        rd = char_roots(rat([-625, 350, -98, 14], [0, 1, 2, 3]))
        got = sorted((round(complex(r.approx()).real), round(complex(r.approx()).imag)) for r in rd.roots)
        assert got == sorted([(3, 4), (3, -4), (4, 3), (4, -3)])
        assert rd.field.D == 2


class TestExpPoly:
    def test_binet(self):
        rd = char_roots(FIB)
        rep = exp_poly(FIB, rd)
        for lam, P in zip(rd.elements, rep.polys):
            assert len(P) == 1
            # P * sqrt5 = +-1, so P^2 = 1/5
            assert P[0] * P[0] == rd.field.element([Fraction(1, 5)])
        for n in range(20):
            assert rep.evaluate(n) == rd.embed(FIB.terms(20)[n])

    def test_linear_sequence(self):
        rep = exp_poly(rat([-1, 2], [0, 1]))
        (P,) = rep.polys
        assert P[0].is_zero and P[1].rational_value == 1

    def test_constant(self):
        rep = exp_poly(rat([1], [9]))
        assert rep.polys[0][0].rational_value == 9

    def test_non_minimal_is_rejected(self):
        with pytest.raises(DomainError):
            exp_poly(rat([-2, 3], [1, 2]))


class TestDegeneracy:
    def test_plus_minus_i(self):
        L = rat([-1, 0], [0, 1])
        rd = char_roots(L)
        assert [k for _, _, k in degeneracy(rd)] == [2]

    def test_fibonacci_is_not(self):
        assert degeneracy(char_roots(FIB)) == []

    def test_quartic_ratio_i(self):
        # (3+4i)/(4-3i) = i, so this quartic is degenerate
        rd = char_roots(rat([-625, 350, -98, 14], [0, 1, 2, 3]))
        assert {k for _, _, k in degeneracy(rd)} == {4}


class TestDecompose:
    def test_alternating(self):
        dec = decompose(rat([-1, 0], [0, 1]))
        assert dec.L == 2
        assert [b.zero for b in dec.branches] == [True, False]
        odd = dec.branches[1].lrs
        assert ints(odd.terms(5)) == [1, -1, 1, -1, 1]

    def test_fibonacci_single_branch(self):
        dec = decompose(FIB)
        assert dec.L == 1 and len(dec.branches) == 1

    def test_two_constant_branches(self):
        dec = decompose(rat([1, 0], [2, 0]))
        assert dec.L == 2
        assert [b.zero for b in dec.branches] == [False, True]
        assert ints(dec.branches[0].lrs.terms(3)) == [2, 2, 2]

    def test_branches_reproduce_sequence(self):
        L = rat([-4, 0, 0, 0], [1, 2, 3, 4])
        dec = decompose(L)
        terms = L.terms(40)
        for b in dec.branches:
            sub = b.lrs.terms(10)
            for m in range(10):
                n = dec.shift + m * dec.L + b.residue
                if n < 40:
                    assert sub[m] == terms[n]
