import math
from fractions import Fraction

import pytest

from skolem.algebraic import (AlgebraicNumber, NumberField, compare_abs_at, construct_field, height,
                              is_algebraic_integer, is_root_of_unity, mpf_to_fraction, sqrt)
from skolem.bounds import hi, lo
from skolem.errors import DomainError
from skolem.numerics import IntPolynomial

GAUSS = NumberField(IntPolynomial((1, 0, 1)), 0)


def gi(a, b=0):
    return GAUSS.element([a, b])


def mid(x):
    return float((lo(x) + hi(x)) / 2)


class TestConstructField:
    def test_sqrt2_sqrt3(self):
        K = construct_field([sqrt(2), sqrt(3)])
        assert K.D == 4
        assert K.modulus.coeffs == (1, 0, -10, 0, 1)

    def test_i(self):
        i = AlgebraicNumber.root_near(IntPolynomial((1, 0, 1)), 1j)
        assert construct_field([i]).D == 2

    def test_gaussian_pair(self):
        f = IntPolynomial((625, -350, 98, -14, 1))
        a = AlgebraicNumber.root_near(f, 3 + 4j)
        b = AlgebraicNumber.root_near(f, 4 + 3j)
        K = construct_field([a, b])
        assert K.D == 2
        gens = K.generators
        assert gens[0] * gens[0].field.one != gens[1]

    def test_rationals_only(self):
        assert construct_field([AlgebraicNumber.rational(3)]).D == 1


class TestArithmetic:
    def test_sqrt2_squared(self):
        assert sqrt(2) * sqrt(2) == AlgebraicNumber.rational(2)

    def test_gaussian_quotient(self):
        assert gi(3, 4) / gi(4, 3) == GAUSS.element([Fraction(24, 25), Fraction(7, 25)])

    def test_additive_identity(self):
        a = gi(3, -7)
        assert a + GAUSS.zero == a

    def test_inverse(self):
        a = gi(2, 5)
        assert a * a.inverse() == GAUSS.one

    def test_division_by_zero(self):
        with pytest.raises((DomainError, ZeroDivisionError)):
            gi(1, 1) / GAUSS.zero

    def test_norm_and_trace(self):
        assert GAUSS.norm(gi(3, 4)) == 25
        assert GAUSS.trace(gi(3, 4)) == 6


class TestCompareAbs:
    def test_equal_moduli(self):
        place = GAUSS.arch_places[0]
        assert compare_abs_at(gi(3, 4), gi(5), place) == 0
        assert compare_abs_at(gi(24, 7) / 25, GAUSS.one, place) == 0

    def test_sqrt2_vs_one(self):
        K = construct_field([sqrt(2)])
        r = K.to_algebraic(K.theta)
        s2 = K.theta if abs(r.approx()) ** 2 - 2 < 1e-9 else None
        assert s2 is not None
        for place in K.arch_places:
            assert compare_abs_at(K.theta, K.one, place) == 1


class TestRootOfUnity:
    def test_examples(self):
        assert is_root_of_unity(gi(0, 1)) == 4
        assert is_root_of_unity(GAUSS.one) == 1
        assert is_root_of_unity(gi(3, 4) / 5) is None
        assert is_root_of_unity(gi(24, 7) / 25) is None
        assert is_root_of_unity(GAUSS.element([-1])) == 2

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            is_root_of_unity(GAUSS.zero)


class TestHeight:
    def test_rationals(self):
        assert mid(height(AlgebraicNumber.rational(2))) == pytest.approx(math.log(2), abs=1e-12)
        assert mid(height(AlgebraicNumber.rational(Fraction(1, 3)))) == pytest.approx(math.log(3), abs=1e-12)

    def test_golden_ratio(self):
        phi = AlgebraicNumber.root_near(IntPolynomial((-1, -1, 1)), 1.6)
        assert mid(height(phi)) == pytest.approx(0.5 * math.log((1 + 5 ** 0.5) / 2), abs=1e-12)
        assert mid(height(phi)) == pytest.approx(0.2406, abs=1e-4)

    def test_enclosure_width(self):
        h = height(gi(3, 4) / 5, Fraction(1, 10 ** 20))
        assert mpf_to_fraction(hi(h)) - mpf_to_fraction(lo(h)) <= Fraction(1, 10 ** 20)
        # minpoly 5x^2 - 6x + 5: Mahler measure 5, degree 2
        assert mid(h) == pytest.approx(math.log(5) / 2, abs=1e-15)

    def test_roots_of_unity_have_height_zero(self):
        assert mid(height(gi(0, 1))) == 0

    def test_algebraic_integer(self):
        phi = AlgebraicNumber.root_near(IntPolynomial((-1, -1, 1)), 1.6)
        assert is_algebraic_integer(AlgebraicNumber.rational(2))
        assert not is_algebraic_integer(AlgebraicNumber.rational(Fraction(1, 2)))
        assert is_algebraic_integer(phi)
