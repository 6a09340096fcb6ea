from fractions import Fraction

import pytest

from skolem.algebraic import NumberField
from skolem.errors import DomainError
from skolem.numerics import IntPolynomial
from skolem.padic import places_above, relevant_primes, valuation, vp

GAUSS = NumberField(IntPolynomial((1, 0, 1)), 0)
Q = NumberField.rationals()


def gi(a, b=0):
    return GAUSS.element([a, b])


def test_vp_rationals():
    assert vp(Fraction(50), 5) == 2
    assert vp(Fraction(3, 25), 5) == -2
    assert vp(Fraction(7), 5) == 0


@pytest.mark.parametrize("p,shape", [(5, [(1, 1), (1, 1)]), (2, [(2, 1)]), (3, [(1, 2)])])
def test_splitting_in_gaussian_integers(p, shape):
    pl = places_above(GAUSS, p)
    assert sorted((v.e, v.f) for v in pl) == shape
    assert sum(v.d_v for v in pl) == 2


def test_valuations_of_3_plus_4i_at_5():
    pl = places_above(GAUSS, 5)
    assert sorted(valuation(v, gi(3, 4)) for v in pl) == [0, 2]
    # 4 + 3i = i (3 - 4i): the pattern is swapped
    vals_a = [valuation(v, gi(3, 4)) for v in pl]
    vals_b = [valuation(v, gi(4, 3)) for v in pl]
    assert vals_b == vals_a[::-1]


def test_ramified_prime():
    (v,) = places_above(GAUSS, 2)
    assert valuation(v, gi(1, 1)) == Fraction(1, 2)
    assert valuation(v, gi(2)) == 1


def test_units_have_valuation_zero():
    for p in (2, 3, 5, 7):
        for v in places_above(GAUSS, p):
            assert valuation(v, gi(-1)) == 0
            assert valuation(v, gi(0, 1)) == 0


def test_sum_formula_against_norm():
    x = gi(7, -4) / 3
    for p in (2, 3, 5, 13):
        total = sum(v.d_v * valuation(v, x) for v in places_above(GAUSS, p))
        assert total == vp(GAUSS.norm(x), p)


def test_relevant_primes():
    assert relevant_primes(Q, [Q.element([2])]) == [2]
    assert relevant_primes(GAUSS, [gi(3, 4)]) == [5]
    sqrt5 = NumberField(IntPolynomial((-1, -1, 1)), 1)
    assert relevant_primes(sqrt5, [sqrt5.theta]) == []


def test_zero_rejected():
    (v,) = places_above(GAUSS, 2)
    with pytest.raises(DomainError):
        valuation(v, GAUSS.zero)


def test_cubic_field_places():
    K = NumberField(IntPolynomial((-2, 0, 0, 1)), 0)
    for p in (2, 3, 5, 7, 11, 31):
        pl = places_above(K, p)
        assert sum(v.e * v.f for v in pl) == 3
    (v,) = places_above(K, 2)
    assert (v.e, v.f) == (3, 1)
    assert valuation(v, K.theta) == Fraction(1, 3)
