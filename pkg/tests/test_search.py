import os
from fractions import Fraction

import pytest

from skolem.algebraic import NumberField
from skolem.lrs import LRS, eval_exact
from skolem.numerics import IntPolynomial
from skolem.problem import parse
from skolem.search import (Overflow, SievePrime, Skip, SolveConfig, ZeroReport, bad_reduction,
                           _checkers, enumerate_zeros, prune, sieve_prime, sieve_primes, solve)

Q = NumberField.rationals()
GAUSS = NumberField(IntPolynomial((1, 0, 1)), 0)


def rat(coeffs, initial):
    return LRS(Q, tuple(Q.element([Fraction(a)]) for a in coeffs), tuple(Q.element([Fraction(u)]) for u in initial))


FIB = rat([1, 1], [0, 1])
SHIFTED = rat([1, 1], [5, -3])


def brute_mod(coeffs, initial, p, count):
    u = [x % p for x in initial]
    while len(u) < count:
        u.append(sum(a * x for a, x in zip(coeffs, u[-len(coeffs):])) % p)
    return u


class TestSievePrime:
    def test_fibonacci_mod_2(self):
        s = sieve_prime(FIB, 2)
        assert (s.period, tuple(s.zero_residues)) == (3, (0,))

    def test_shifted_fibonacci_mod_3(self):
        s = sieve_prime(SHIFTED, 3)
        assert s.period == 8
        assert 5 in s.zero_residues
        assert tuple(s.zero_residues) == (1, 5)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 31])
    def test_against_direct_iteration(self, p):
        co, ini = [2, -1, 3], [1, 0, 4]
        s = sieve_prime(rat(co, ini), p)
        seq = brute_mod(co, ini, p, 3 * s.period + 3)
        assert seq[:s.period] == seq[s.period:2 * s.period]
        assert tuple(n for n in range(s.period) if seq[n] == 0) == tuple(s.zero_residues)

    def test_skip_on_denominator(self):
        lrs = rat([1, 1], [Fraction(1, 3), 1])
        assert isinstance(sieve_prime(lrs, 3), Skip)
        assert bad_reduction(lrs, 3)

    def test_skip_on_constant_coefficient(self):
        s = sieve_prime(rat([6, 1], [1, 1]), 3)
        assert isinstance(s, Skip) and not s

    def test_skip_on_period_cap(self):
        assert isinstance(sieve_prime(FIB, 1009, period_cap=10), Skip)

    def test_gaussian(self):
        i = GAUSS.element([0, 1])
        lrs = LRS(GAUSS, (GAUSS.one, i), (GAUSS.zero, GAUSS.one))
        s = sieve_prime(lrs, 5)
        terms = lrs.terms(s.period + 1)
        assert 0 in s.zero_residues
        for n in range(1, s.period):
            if terms[n].is_zero:
                assert n in s.zero_residues

    def test_count(self):
        sieves, skipped = sieve_primes(SHIFTED, count=10)
        assert len(sieves) == 10
        assert all(s.p > 2 for s in sieves)
        assert all(isinstance(s, SievePrime) for s in sieves)


class TestPrune:
    def test_single_sieve(self):
        assert prune([SievePrime(3, 3, (0,), 2)], 10) == [0, 3, 6, 9]

    def test_disjoint(self):
        assert prune([SievePrime(3, 4, (1,), 2), SievePrime(5, 4, (2,), 2)], 100) == []

    def test_crt(self):
        got = prune([SievePrime(3, 4, (1,), 2), SievePrime(5, 6, (5,), 2)], 100)
        assert got == [n for n in range(101) if n % 4 == 1 and n % 6 == 5]

    def test_overflow(self):
        res = prune([SievePrime(3, 2, (0,), 2)], 10 ** 6, cap=1000)
        assert isinstance(res, Overflow) and not res
        assert res.count == 500001

    def test_shifted_fibonacci_ten_primes(self):
        sieves, _ = sieve_primes(SHIFTED, count=10)
        cands = prune(sieves, 10 ** 6)
        assert 5 in cands
        # every sound sieve keeps 5 + 2520k since the zero at 5 pins a residue per period
        assert cands == list(range(5, 10 ** 6 + 1, 2520))
        assert eval_exact(SHIFTED, 5).is_zero
        # the other survivors are refuted modulo primes beyond the sieving ones
        checkers = _checkers(SHIFTED, sieves[-1].p, 40)
        assert all(any(c.nonzero_at(n) for c in checkers) for n in cands[1:])

    @pytest.mark.slow
    def test_shifted_fibonacci_brute_force_to_a_million(self):
        a, b = 5, -3
        zeros = []
        for n in range(10 ** 6 + 1):
            if a == 0:
                zeros.append(n)
            a, b = b, a + b
        assert zeros == [5]


class TestSolve:
    def test_shifted_fibonacci(self):
        rep = solve(SHIFTED)
        assert (rep.finite_zeros, rep.progressions, rep.status) == ([5], [], "complete")

    def test_alternating(self):
        rep = solve(rat([-1, 0], [0, 1]))
        assert rep.progressions == [(0, 2)]
        assert rep.finite_zeros == []
        assert rep.status == "complete"

    def test_powers_of_two(self):
        rep = solve(rat([2], [1]))
        assert (rep.finite_zeros, rep.progressions, rep.status) == ([], [], "complete")

    def test_berstel(self):
        rep = solve(rat([4, -4, 2], [0, 0, 1]))
        assert rep.finite_zeros == [0, 1, 4, 6, 13, 52]
        assert rep.status == "complete"

    def test_eventually_zero(self):
        rep = solve(rat([0, 0], [3, 0]))
        assert rep.progressions == [(1, 1)]
        assert rep.finite_zeros == []

    def test_agrees_with_enumeration(self):
        for co, ini in [([1, 1], [0, 1]), ([-2, 3], [1, 1]), ([2, -1, 1], [1, -1, 0]), ([-1, 2], [-3, 1])]:
            lrs = rat(co, ini)
            rep = solve(lrs)
            assert rep.status == "complete"
            brute = enumerate_zeros(lrs, 500)
            assert [n for n in range(501) if rep.contains(n)] == brute

    def test_candidate_cap_leaves_range_unresolved(self):
        cfg = SolveConfig(primes=1, candidate_cap=1)
        rep = solve(parse(os.path.join(os.path.dirname(__file__), "corpus", "cubic_padic_pair.json")), cfg)
        assert rep.status == "incomplete"
        assert any(isinstance(u, dict) for u in rep.unresolved)


class TestZeroReport:
    def test_contains(self):
        rep = ZeroReport([(1, 4)], [0], [{"offset": 2, "modulus": 4, "from": 10, "to": 30, "reason": "x"}],
                         "incomplete")
        assert rep.contains(0) is True
        assert rep.contains(9) is True
        assert rep.contains(2) is False
        assert rep.contains(14) is None
        assert rep.contains(34) is False


def test_enumerate_zeros():
    assert enumerate_zeros(SHIFTED, 100) == [5]
    assert enumerate_zeros(rat([-1, 0], [0, 1]), 7) == [0, 2, 4, 6]
