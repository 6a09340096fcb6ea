from fractions import Fraction

import mpmath
import pytest

from skolem.errors import DomainError
from skolem.numerics import (ComplexBox, IntPolynomial, cyclotomic, euler_phi, factor_over_q,
                             isolate_roots, pdivmod, pgcd, pmul, resultant, root_isolator)


def factors(c):
    return sorted((f.coeffs, m) for f, m in factor_over_q(c))


class TestFactor:
    def test_difference_of_squares(self):
        assert factors([-1, 0, 1]) == sorted([((-1, 1), 1), ((1, 1), 1)])

    def test_quartic_splits_into_two_quadratics(self):
        got = factors([625, -350, 98, -14, 1])
        assert got == sorted([((25, -6, 1), 1), ((25, -8, 1), 1)])

    def test_irreducible(self):
        assert factors([1, 0, 1]) == [((1, 0, 1), 1)]

    def test_multiplicity(self):
        assert factors([1, -2, 1]) == [((-1, 1), 2)]


class TestResultant:
    def test_known_values(self):
        assert resultant([-2, 0, 1], [-3, 0, 1]) == 1
        assert resultant([1, 0, 1], [0, 1]) == 1

    def test_linear_is_evaluation(self):
        q = [7, -3, 0, 2]
        a = 5
        assert resultant([-a, 1], q) == sum(c * a ** k for k, c in enumerate(q))


class TestCyclotomic:
    @pytest.mark.parametrize("k,coeffs", [
        (1, (-1, 1)), (4, (1, 0, 1)), (12, (1, 0, -1, 0, 1)), (6, (1, -1, 1)),
    ])
    def test_small(self, k, coeffs):
        assert cyclotomic(k).coeffs == coeffs

    def test_degree_is_phi(self):
        for k in range(1, 40):
            assert cyclotomic(k).degree == euler_phi(k)

    def test_product_is_x_n_minus_1(self):
        for n in (6, 10, 12, 15):
            acc = (1,)
            for d in range(1, n + 1):
                if n % d == 0:
                    acc = pmul(acc, cyclotomic(d).coeffs)
            assert tuple(acc) == (-1,) + (0,) * (n - 1) + (1,)


class TestPolyArith:
    def test_divmod_roundtrip(self):
        a = (Fraction(3), Fraction(-1), Fraction(4), Fraction(1))
        b = (Fraction(1), Fraction(2))
        q, r = pdivmod(a, b)
        rebuilt = [x + (r[i] if i < len(r) else 0) for i, x in enumerate(pmul(q, b))]
        assert tuple(rebuilt) == a

    def test_gcd(self):
        g = pgcd(pmul((1, 1), (2, 1)), pmul((1, 1), (3, 1)))
        assert tuple(g) == (1, 1)


class TestIsolation:
    def test_sqrt2(self):
        boxes = isolate_roots([-2, 0, 1], Fraction(1, 100))
        assert len(boxes) == 2
        for b in boxes:
            assert b.width <= Fraction(1, 100)
        centers = sorted(float(b.center()[0]) for b in boxes)
        assert centers == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-2)
        assert all(b.is_real for b in boxes)

    def test_plus_minus_i(self):
        boxes = isolate_roots([1, 0, 1], Fraction(1, 100))
        assert {b.contains_point(0, 1) for b in boxes} == {True, False}
        assert any(b.contains_point(0, -1) for b in boxes)

    def test_linear_point_box(self):
        (b,) = isolate_roots([-3, 1], Fraction(1, 100))
        assert b.contains_point(3) and b.width == 0

    def test_boxes_contain_mpmath_roots(self):
        c = [5, -3, 0, 1, 2, 1]
        roots = mpmath.polyroots(list(reversed(c)), maxsteps=200, extraprec=200)
        boxes = isolate_roots(c, Fraction(1, 10 ** 8))
        assert len(boxes) == 5
        for r in roots:
            hits = [b for b in boxes if b.contains_point(Fraction(str(r.real)), Fraction(str(r.imag)))
                    or b.width > 0 and _near(b, r)]
            assert len(hits) == 1

    def test_refinement_is_nested(self):
        iso = root_isolator((-2, 0, 1))
        a = iso.box(0, Fraction(1, 10))
        b = iso.box(0, Fraction(1, 10 ** 6))
        assert a.contains_box(b)

    def test_rejects_zero_polynomial(self):
        with pytest.raises(DomainError):
            isolate_roots([0], Fraction(1, 10))


def _near(box, r):
    (a, b), (c, d) = box.re, box.im
    slack = Fraction(1, 10 ** 12)
    return a - slack <= Fraction(str(r.real)) <= b + slack and c - slack <= Fraction(str(r.imag)) <= d + slack


class TestComplexBox:
    def test_arithmetic_encloses(self):
        x = ComplexBox(Fraction(1), Fraction(2), Fraction(0), Fraction(1))
        y = ComplexBox.point(3, -1)
        p = x * y
        # (1.5 + 0.5i) * (3 - i) = 5 + 0i
        assert p.contains_point(5, 0)

    def test_polynomial_squarefree_helpers(self):
        assert IntPolynomial((1, -2, 1)).derivative().coeffs == (-2, 2)
