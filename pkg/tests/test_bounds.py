import os
from fractions import Fraction

import mpmath
import pytest

from skolem.algebraic import NumberField
from skolem.bounds import (DEFAULT_YU, BoundConfig, BoundParams, fixed_yu, hi, lo, matveev_exponent,
                           matveev_lower, tail_threshold, voutier_factor, yu_upper)
from skolem.classifier import candidate_witnesses, find_witness, select_witness
from skolem.errors import ConfigurationError, DomainError
from skolem.lrs import LRS, char_roots, exp_poly, minimize_order
from skolem.problem import parse

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")
Q = NumberField.rationals()


def rat(coeffs, initial):
    return LRS(Q, tuple(Q.element([a]) for a in coeffs), tuple(Q.element([u]) for u in initial))


def tail(lrs, config=None):
    lrs = minimize_order(lrs.field, lrs.coeffs, lrs.initial)
    rd = char_roots(lrs)
    rep = exp_poly(lrs, rd)
    return tail_threshold(find_witness(lrs, rd, rep), rep, rd, config)


def close(a, b, digits=12):
    return abs(a - b) <= abs(b) * mpmath.mpf(10) ** (-digits)


class TestMatveev:
    def test_two_logs(self):
        with mpmath.workdps(40):
            ref = 2 ** 32 * 4 * (1 + mpmath.log(2)) * (1 + mpmath.log(3))
            E = matveev_exponent(BoundParams(s=2, D=2, A=(1, 1), B=3))
            assert close((lo(E) + hi(E)) / 2, ref)
            assert close(mpmath.log(matveev_lower(BoundParams(s=2, D=2, A=(1, 1), B=3))), -ref)

    def test_one_log(self):
        with mpmath.workdps(40):
            ref = 2 ** 26 * mpmath.mpf("0.16") * (1 + mpmath.log(3))
            got = matveev_lower(BoundParams(s=1, D=1, A=(Fraction(4, 25),), B=3))
            assert close(mpmath.log(got), -ref)

    def test_lower_bound_is_below_exact_value(self):
        with mpmath.workdps(80):
            ref = mpmath.exp(-(2 ** 26) * (1 + mpmath.log(3)))
            got = matveev_lower(BoundParams(s=1, D=1, A=(1,), B=3))
            assert ref * (1 - mpmath.mpf(10) ** -30) <= got <= ref

    def test_monotone_in_B(self):
        e1 = matveev_exponent(BoundParams(s=2, D=2, A=(1, 1), B=3))
        e2 = matveev_exponent(BoundParams(s=2, D=2, A=(1, 1), B=6))
        assert lo(e2) > hi(e1)

    @pytest.mark.parametrize("params", [
        BoundParams(s=2, D=2, A=(1,), B=3),
        BoundParams(s=1, D=1, A=(Fraction(1, 10),), B=3),
        BoundParams(s=1, D=0, A=(1,), B=3),
        BoundParams(s=1, D=1, A=(1,), B=Fraction(1, 2)),
    ])
    def test_domain(self, params):
        with pytest.raises(DomainError):
            matveev_lower(params)


class TestYu:
    def test_formula(self):
        with mpmath.workdps(40):
            l5 = mpmath.log(5)
            got = yu_upper(BoundParams(s=2, D=1, A=(mpmath.nstr(l5, 45),) * 2, B=10, p=5, C=3))
            assert close(got, 3 * l5 ** 2 * mpmath.log(10))

    def test_minimal_B(self):
        with mpmath.workdps(40):
            got = yu_upper(BoundParams(s=1, D=1, A=(2,), B=3, p=5, C=11))
            assert close(got, 22 * mpmath.log(3))

    def test_halving_C(self):
        a = yu_upper(BoundParams(s=2, D=1, A=(2, 2), B=10, p=5, C=8))
        b = yu_upper(BoundParams(s=2, D=1, A=(2, 2), B=10, p=5, C=4))
        assert close(2 * b, a)

    def test_domain(self):
        with pytest.raises(DomainError):
            yu_upper(BoundParams(s=1, D=1, A=(2,), B=2, p=5, C=1))
        with pytest.raises(DomainError):
            yu_upper(BoundParams(s=1, D=1, A=(1,), B=3, p=5, C=1))
        with pytest.raises(ConfigurationError):
            yu_upper(BoundParams(s=1, D=1, A=(2,), B=3, p=5))

    def test_default_constant_is_positive_and_grows_with_degree(self):
        assert DEFAULT_YU(2, 2, 3, 1, 1) > 0
        assert DEFAULT_YU(2, 4, 3, 1, 1) > DEFAULT_YU(2, 2, 3, 1, 1)
        assert DEFAULT_YU(3, 2, 3, 1, 1) > DEFAULT_YU(2, 2, 3, 1, 1)


class TestTail:
    def test_fibonacci(self):
        tb = tail(rat([1, 1], [0, 1]))
        assert tb.N is not None and tb.N <= 50
        # beyond N the dominant term wins: phi^n > |psi|^n for n >= 1
        assert tb.N >= 1

    def test_powers_of_two(self):
        assert tail(rat([2], [1])).N == 0

    def test_linear_sequence(self):
        tb = tail(rat([-1, 2], [0, 1]))
        assert tb.N is not None and tb.N >= 1

    def test_audit_is_plain_data(self):
        tb = tail(parse(os.path.join(CORPUS, "cubic_padic_pair.json")))
        assert tb.witness.kind == "nonarch" and tb.witness.r == 2
        for v in tb.audit.values():
            assert isinstance(v, (int, float, str)) or v is None
        assert tb.N >= tb.audit["N_floor"]
        assert tb.audit["voutier_factor"] == pytest.approx(float(lo(voutier_factor(2))), rel=1e-12)

    def test_monotone_in_height_and_constant(self):
        lrs = parse(os.path.join(CORPUS, "cubic_padic_pair.json"))
        Ns = [tail(lrs, BoundConfig(min_height=h)).N for h in (0, 2, 10, 40)]
        assert Ns == sorted(Ns)
        Ns = [tail(lrs, BoundConfig(yu=fixed_yu(c))).N for c in (10 ** 8, 10 ** 16, 10 ** 24)]
        assert Ns == sorted(Ns) and Ns[0] < Ns[-1]

    def test_root_of_unity_ratio_is_rejected(self):
        # the quartic {3+-4i, 4+-3i} has a dominant 5-adic pair with ratio i
        lrs = rat([-625, 350, -98, 14], [0, 1, 2, 3])
        rd = char_roots(lrs)
        rep = exp_poly(lrs, rd)
        w = select_witness(rd)
        with pytest.raises(DomainError):
            tail_threshold(w, rep, rd)

    def test_arch_three_roots(self):
        # roots 5 and 3 +- 4i share the modulus 5
        lrs = rat([125, -55, 11], [1, 0, 3])
        rd = char_roots(lrs)
        rep = exp_poly(lrs, rd)
        (w,) = [c for c in candidate_witnesses(rd) if c.kind == "arch"]
        assert w.r == 3
        tb = tail_threshold(w, rep, rd)
        assert tb.N is not None
        terms = lrs.terms(tb.N + 200)
        assert all(not t.is_zero for t in terms[tb.N:])
