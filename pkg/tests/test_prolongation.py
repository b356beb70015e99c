import math
from fractions import Fraction

import pytest
from hypothesis import given

from synthdg import duality
from synthdg import prolongation as pr
from synthdg import scalar_algebra as sa
from synthdg.errors import (
    AlgebraMismatch,
    DimensionMismatch,
    FreeGeneratorRequired,
    InexactPrimitive,
    NestingMismatch,
)
from tests.strategies import elements, rationals, vectors, wpoints

SECOND_ORDER = sa.FpAlgebra.create(["X"], [{"X": 3}])
SQUARE = pr.SmoothMap.from_expressions(["x^2"], ["x"])
TWIST = pr.SmoothMap.from_expressions(["x*y + 1/2", "x^2 - y", "3*y^3"], ["x", "y"])
LIFT = pr.SmoothMap.from_expressions(["x*z", "y + z^2"], ["x", "y", "z"])


class TestProlong:
    def test_square_on_dual_numbers(self):
        p = pr.WPoint.from_components(sa.W_D, [sa.normal_form(sa.W_D, "3 + 5*X")])
        assert pr.prolong(SQUARE, sa.W_D, p).components == (sa.normal_form(sa.W_D, "9 + 30*X"),)

    def test_cube_to_second_order(self):
        cube = pr.SmoothMap.from_expressions(["x^3"], ["x"])
        p = pr.WPoint.from_components(SECOND_ORDER, [sa.normal_form(SECOND_ORDER, "2 + X")])
        expected = sa.normal_form(SECOND_ORDER, "8 + 12*X + 6*X^2")
        assert pr.prolong(cube, SECOND_ORDER, p).components == (expected,)

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            pr.prolong(TWIST, sa.W_D, pr.iota(sa.W_D, [1]))

    def test_wrong_algebra(self):
        with pytest.raises(AlgebraMismatch):
            pr.prolong(SQUARE, sa.W_D2, pr.iota(sa.W_D, [1]))

    @given(wpoints(sa.W_D2, 2))
    def test_functorial(self, p):
        composite = LIFT.compose(TWIST)
        assert pr.prolong(composite, sa.W_D2, p) == pr.prolong(
            LIFT, sa.W_D2, pr.prolong(TWIST, sa.W_D2, p)
        )

    @given(wpoints(sa.W_D2, 2))
    def test_identity(self, p):
        assert pr.prolong(pr.SmoothMap.identity(2), sa.W_D2, p) == p

    @given(vectors(2))
    def test_base_point(self, q):
        p = pr.iota(sa.W_D, q)
        assert pr.tau(pr.prolong(TWIST, sa.W_D, p)) == tuple(TWIST(list(q)))

    @given(elements(sa.W_D2), elements(sa.W_D2))
    def test_ring_structure(self, a, b):
        assert pr.linear_map_check(sa.W_D2, a, b)


class TestAlpha:
    @given(wpoints(sa.W_D2, 3))
    def test_augmentation_is_the_base_point(self, p):
        assert pr.tau(pr.alpha(sa.augmentation(sa.W_D2), p)) == pr.tau(p)

    @given(wpoints(sa.W_D2, 2))
    def test_natural(self, p):
        phi = duality.dual_hom(duality.diagonal())
        assert pr.bimap(TWIST, phi, p) == pr.prolong(TWIST, sa.W_D, pr.alpha(phi, p))

    @given(wpoints(sa.W_D2, 2))
    def test_compose(self, p):
        phi = duality.dual_hom(duality.diagonal())
        psi = sa.augmentation(sa.W_D)
        assert pr.alpha(sa.hom_compose(psi, phi), p) == pr.alpha(psi, pr.alpha(phi, p))

    def test_first_axis_drops_the_second_direction(self):
        phi = duality.dual_hom(duality.first_axis())
        p = pr.WPoint.from_components(sa.W_D2, [sa.normal_form(sa.W_D2, "1 + 2*X + 3*Y")])
        assert pr.alpha(phi, p).components == (sa.normal_form(sa.W_D, "1 + 2*X"),)

    def test_family_over_scalar_action(self):
        phi = duality.dual_hom(duality.scalar_action())
        p = pr.WPoint.from_components(sa.W_D, [sa.normal_form(sa.W_D, "1 + 2*X")])
        family = pr.alpha(phi, p)
        assert pr.instantiate_free(family, {"Z": Fraction(3)}).components == (
            sa.normal_form(sa.W_D, "1 + 6*X"),
        )

    def test_nested_alpha(self):
        phi = duality.dual_hom(duality.diagonal())
        x = sa.W_D.generator("X")
        p = pr.WPoint(
            sa.W_D2,
            (sa.AlgElement.from_terms(sa.W_D2, [(sa.Monomial((0, 0)), x + 1), (sa.Monomial((1, 0)), x * 2)]),),
        )
        assert pr.alpha_nested_check(phi, sa.W_D, p)


class TestReassociate:
    def test_nested_dual_numbers(self):
        x = sa.W_D.generator("X")
        a, b, c, d = Fraction(1), Fraction(2), Fraction(3), Fraction(5)
        nested = pr.WPoint(
            sa.W_D,
            (sa.AlgElement.from_terms(sa.W_D, [(sa.Monomial((0,)), x * b + a), (sa.Monomial((1,)), x * d + c)]),),
        )
        flat = pr.reassociate(nested, sa.W_D)
        product = sa.tensor(sa.W_D, sa.W_D)
        expected = product.element(
            {
                sa.Monomial((0, 0)): a,
                sa.Monomial((1, 0)): c,
                sa.Monomial((0, 1)): b,
                sa.Monomial((1, 1)): d,
            }
        )
        assert flat.components == (expected,)
        assert pr.unreassociate(flat, sa.W_D, sa.W_D) == nested

    def test_wrong_inner_algebra(self):
        x = sa.W_D.generator("X")
        nested = pr.WPoint(sa.W_D, (sa.AlgElement.from_terms(sa.W_D, [(sa.Monomial((0,)), x)]),))
        with pytest.raises(NestingMismatch):
            pr.reassociate(nested, sa.W_D2)

    def test_outer_level_is_not_a_coordinate(self):
        x = sa.W_D.generator("X")
        outer = sa.AlgElement.from_terms(sa.W_D2, [(sa.Monomial((0, 0)), x)])
        with pytest.raises(NestingMismatch):
            pr.WPoint.from_components(sa.W_D, [outer])


class TestInstantiate:
    def test_generator_in_a_relation(self):
        algebra = sa.FpAlgebra.create(["Z", "X"], [{"X": 2}])
        p = pr.iota(algebra, [1])
        with pytest.raises(FreeGeneratorRequired):
            pr.instantiate_free(p, {"X": 1})

    @given(rationals(), rationals())
    def test_evaluates_the_family(self, r, s):
        algebra = sa.FpAlgebra.create(["Z", "X"], [{"X": 2}])
        p = pr.WPoint.from_components(algebra, [sa.normal_form(algebra, "Z^2 + Z*X + 1")])
        result = pr.instantiate_free(p, {"Z": r})
        assert result.algebra == sa.W_D
        assert result.components == (sa.W_D.element({sa.Monomial((0,)): r * r + 1, sa.Monomial((1,)): r}),)


class TestDerivative:
    def test_polynomial(self):
        assert pr.derivative(TWIST, [Fraction(2), Fraction(3)]) == [3, 4, 0]
        assert pr.derivative(TWIST, [Fraction(2), Fraction(3)], [0, 1]) == [2, -1, 81]

    def test_transcendental_needs_floats(self):
        exp = pr.SmoothMap.from_expressions(["exp(x)"], ["x"])
        with pytest.raises(InexactPrimitive):
            pr.derivative(exp, [Fraction(1)])
        assert pr.derivative(exp, [1.0])[0] == pytest.approx(math.e)

    def test_float_point_at_zero(self):
        exp = pr.SmoothMap.from_expressions(["exp(x)"], ["x"])
        assert pr.derivative(exp, [0.0]) == [pytest.approx(1.0)]
        sine = pr.SmoothMap.from_expressions(["sin(x)"], ["x"])
        p = pr.WPoint.from_components(sa.W_D, [sa.W_D.generator("X") * 1.0 + 0.0])
        value = pr.prolong(sine, sa.W_D, p).components[0]
        assert value.unit_part() == pytest.approx(0.0)
        assert value.coefficient(sa.Monomial((1,))) == pytest.approx(1.0)

    def test_sine_on_second_order(self):
        sine = pr.SmoothMap.from_expressions(["sin(x)"], ["x"])
        p = pr.WPoint.from_components(SECOND_ORDER, [SECOND_ORDER.generator("X") + 0.5])
        value = pr.prolong(sine, SECOND_ORDER, p).components[0]
        assert value.coefficient(sa.Monomial((0,))) == pytest.approx(math.sin(0.5))
        assert value.coefficient(sa.Monomial((1,))) == pytest.approx(math.cos(0.5))
        assert value.coefficient(sa.Monomial((2,))) == pytest.approx(-math.sin(0.5) / 2)
