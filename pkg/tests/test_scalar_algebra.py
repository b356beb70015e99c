from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given

from synthdg import duality
from synthdg import scalar_algebra as sa
from synthdg.errors import (
    AlgebraMismatch,
    ComposabilityMismatch,
    NonMonomialIdeal,
    NotPointed,
    NotWeil,
    RelationViolated,
    SynthDGError,
    UnknownGenerator,
)
from tests.strategies import elements, rationals, weil_algebras

RxD = sa.FpAlgebra.create(["Z", "X"], [{"X": 2}])
SECOND_ORDER = sa.FpAlgebra.create(["X"], [{"X": 3}])


def render_basis(algebra: sa.FpAlgebra):
    return [m.render(algebra.generators) for m in sa.weil_basis(algebra)]


class TestPresentation:
    def test_rendering(self):
        assert str(sa.K) == "k"
        assert str(sa.W_D) == "k[X]/(X^2)"
        assert str(sa.W_D2) == "k[X,Y]/(X^2,X*Y,Y^2)"
        assert str(sa.polynomial_ring(2)) == "k[Z1,Z2]"

    def test_relations_are_minimal(self):
        algebra = sa.FpAlgebra.create(["X"], [{"X": 3}, {"X": 2}, {"X": 5}])
        assert algebra == sa.W_D

    def test_unit_relation_is_rejected(self):
        with pytest.raises(NotPointed):
            sa.FpAlgebra.create(["X"], [{}])

    def test_negative_exponent_is_rejected(self):
        with pytest.raises(NonMonomialIdeal):
            sa.FpAlgebra.create(["X"], [{"X": -1}])

    def test_relation_in_unknown_generator(self):
        with pytest.raises(UnknownGenerator):
            sa.FpAlgebra.create(["X"], [{"Y": 2}])

    def test_weil_flags(self):
        assert sa.W_D2.is_weil
        assert not RxD.is_weil
        assert RxD.free_generators == ("Z",)
        assert RxD.non_nilpotent_generators == ("Z",)


class TestNormalForm:
    def test_square_of_infinitesimal_vanishes(self):
        assert sa.normal_form(sa.W_D, "X^2") == 0

    def test_product_in_first_order_neighbourhood(self):
        product = sa.normal_form(sa.W_D2, "(1 + X)*(1 + Y)")
        assert product == sa.normal_form(sa.W_D2, "1 + X + Y")
        assert str(product) == "1 + X + Y"

    def test_sum_squares_to_zero(self):
        s = sa.normal_form(sa.W_D2, "X + Y")
        assert s * s == 0

    def test_unknown_generator(self):
        with pytest.raises(UnknownGenerator):
            sa.normal_form(sa.W_D, "Y")

    def test_rendering_of_zero_and_constants(self):
        assert str(sa.W_D.zero()) == "0"
        assert sa.W_D.constant(Fraction(3)) == 3

    def test_other_algebra_is_rejected(self):
        with pytest.raises(AlgebraMismatch):
            sa.normal_form(sa.W_D2, sa.W_D.generator("X"))

    @given(elements(sa.W_D2), elements(sa.W_D2))
    def test_normal_form_is_multiplicative(self, a, b):
        direct = a * b
        assert sa.normal_form(sa.W_D2, dict(direct.terms)) == direct
        assert a * b == b * a

    @given(elements(SECOND_ORDER), elements(SECOND_ORDER), elements(SECOND_ORDER))
    def test_ring_laws(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0

    @given(elements(SECOND_ORDER))
    def test_inverse(self, a):
        assume(a.unit_part() != 0)
        assert a * a.inverse() == 1

    def test_inverse_of_dual_number(self):
        a = sa.normal_form(sa.W_D, "2 + X")
        assert a.inverse() == sa.normal_form(sa.W_D, "1/2 - 1/4*X")

    def test_infinitesimal_is_not_invertible(self):
        with pytest.raises(ZeroDivisionError):
            sa.W_D.generator("X").inverse()


class TestWeilBasis:
    def test_bases(self):
        assert render_basis(sa.K) == ["1"]
        assert render_basis(sa.W_D) == ["1", "X"]
        assert render_basis(sa.W_D2) == ["1", "X", "Y"]
        assert render_basis(sa.weil_power(2)) == ["1", "X1", "X2", "X1*X2"]
        assert render_basis(SECOND_ORDER) == ["1", "X", "X^2"]

    def test_mixed_powers(self):
        algebra = sa.FpAlgebra.create(["X", "Y"], [{"X": 2}, {"Y": 3}])
        assert sa.dimension(algebra) == 6

    def test_dimension_of_cube(self):
        assert [sa.dimension(sa.weil_power(n)) for n in range(1, 5)] == [2, 4, 8, 16]

    def test_not_weil(self):
        with pytest.raises(NotWeil) as e:
            sa.weil_basis(sa.polynomial_ring(1))
        assert e.value.free == ("Z",)

    def test_nilpotency_index(self):
        assert sa.W_D.nilpotency_index() == 2
        assert SECOND_ORDER.nilpotency_index() == 3


class TestTensor:
    def test_generators_are_renamed(self):
        product = sa.tensor(sa.W_D, sa.W_D)
        assert product.generators == ("X@1", "X@2")
        assert sa.dimension(product) == 4

    def test_tensor_with_free_algebra(self):
        assert str(sa.tensor(sa.W_D, sa.polynomial_ring(1))) == "k[X@1,Z@2]/(X@1^2)"

    @given(weil_algebras(), weil_algebras())
    def test_dimension_is_multiplicative(self, a, b):
        assert sa.dimension(sa.tensor(a, b)) == sa.dimension(a) * sa.dimension(b)

    def test_associator(self):
        associator = sa.tensor_associator(sa.W_D, sa.W_D2, SECOND_ORDER)
        assert sa.hom_matrix(associator) == sympy.eye(18)


class TestHomomorphisms:
    def test_relation_violated(self):
        with pytest.raises(RelationViolated) as e:
            sa.hom_make(sa.W_D, sa.W_D, {"X": "1"})
        assert e.value.relation == "X^2"

    def test_diagonal(self):
        hom = sa.hom_make(sa.W_D2, sa.W_D, {"X": "X", "Y": "X"})
        assert hom(sa.normal_form(sa.W_D2, "1 + 2*X + 3*Y")) == sa.normal_form(sa.W_D, "1 + 5*X")

    def test_family_over_free_generator(self):
        hom = sa.hom_make(sa.W_D, RxD, {"X": "Z*X"})
        assert hom(sa.normal_form(sa.W_D, "3 + 2*X")) == sa.normal_form(RxD, "3 + 2*Z*X")

    def test_missing_image(self):
        with pytest.raises(SynthDGError):
            sa.hom_make(sa.W_D2, sa.W_D, {"X": "X"})

    def test_augmentation_and_unit(self):
        a = sa.normal_form(sa.W_D2, "5 + X + Y")
        assert sa.augmentation(sa.W_D2)(a) == 5
        assert sa.hom_compose(sa.augmentation(sa.W_D2), sa.unit(sa.W_D2)) == sa.identity(sa.K)

    def test_composition_needs_matching_algebras(self):
        with pytest.raises(ComposabilityMismatch):
            sa.hom_compose(sa.identity(sa.W_D), sa.identity(sa.W_D2))

    @given(elements(sa.W_D2), elements(sa.W_D2), rationals())
    def test_homomorphism_respects_operations(self, a, b, r):
        hom = sa.hom_make(sa.W_D2, sa.W_D, ["X", "X"])
        assert hom(a * b) == hom(a) * hom(b)
        assert hom(a + b) == hom(a) + hom(b)
        assert hom(a.scale(r)) == hom(a).scale(r)
        assert hom(sa.W_D2.one()) == 1

    @given(elements(sa.weil_power(2)))
    def test_composition_applies_in_order(self, a):
        swap = sa.hom_make(sa.weil_power(2), sa.weil_power(2), ["X2", "X1"])
        first = sa.hom_make(sa.weil_power(2), sa.W_D, ["X", "0"])
        composite = sa.hom_compose(first, swap)
        assert composite(a) == first(swap(a))
        assert sa.hom_compose(swap, swap) == sa.identity(sa.weil_power(2))

    @given(elements(sa.W_D), elements(sa.W_D))
    def test_tensor_of_homomorphisms(self, a, b):
        hom = sa.hom_tensor(sa.identity(sa.W_D), sa.augmentation(sa.W_D))
        target = hom.target
        left = sa.embed_left(a, hom.source) * sa.embed_right(b, hom.source)
        assert hom(left) == sa.embed_left(a, target).scale(b.unit_part())

    def test_matrix_of_identity(self):
        assert sa.hom_matrix(sa.identity(sa.W_D2)) == sympy.eye(3)


class TestEqualizer:
    def test_first_order_neighbourhood_is_an_equalizer(self):
        e = duality.dual_hom(duality.fold_product())
        f = duality.dual_hom(duality.zero_point())
        g = duality.dual_hom(duality.square_second_axis())
        assert sa.equalizer_check(f, g, e)
        assert len(sa.equalizer_subspace(f, g)) == 3

    def test_identity_is_not_an_equalizer(self):
        f = duality.dual_hom(duality.zero_point())
        g = duality.dual_hom(duality.square_second_axis())
        assert not sa.equalizer_check(f, g, sa.identity(sa.weil_power(2)))

    def test_equalizer_of_a_map_with_itself(self):
        f = duality.dual_hom(duality.zero_point())
        assert len(sa.equalizer_subspace(f, f)) == 4
        assert sa.equalizer_check(f, f, sa.identity(sa.weil_power(2)))
