import pytest
from hypothesis import given
from hypothesis import strategies as st

from synthdg import duality
from synthdg import scalar_algebra as sa
from synthdg.errors import ComposabilityMismatch, DimensionMismatch, IndexOutOfRange, RelationViolated
from synthdg.permutations import Permutation
from tests.strategies import elements


class TestSpaces:
    def test_model_spaces(self):
        assert duality.space_D().algebra == sa.W_D
        assert duality.space_D2().algebra == sa.W_D2
        assert duality.space_D(2).algebra == sa.weil_power(2)
        assert duality.space_R(0).algebra == sa.K
        assert str(duality.space_D(3)) == "D^3"

    def test_product_keeps_disjoint_names(self):
        space = duality.space_product(duality.space_R(2), duality.space_D2())
        assert space.coordinates == ("Z1", "Z2", "X", "Y")
        assert str(space.algebra) == "k[Z1,Z2,X,Y]/(X^2,X*Y,Y^2)"
        assert space.is_infinitesimal("X")
        assert not space.is_infinitesimal("Z1")

    def test_product_renames_clashing_names(self):
        space = duality.space_product(duality.space_D(), duality.space_D())
        assert space.algebra == sa.tensor(sa.W_D, sa.W_D)

    def test_negative_dimension(self):
        with pytest.raises(IndexOutOfRange):
            duality.space_D(-1)


class TestCarveMaps:
    def test_dual_sends_generators_to_components(self):
        hom = duality.dual_hom(duality.scalar_action())
        assert hom.image_of("X") == sa.normal_form(hom.target, "Z*X")

    def test_map_that_leaves_the_target(self):
        with pytest.raises(RelationViolated):
            duality.CarveMap.create(duality.space_R(), duality.space_D(), ["Z"])

    def test_wrong_number_of_components(self):
        with pytest.raises(DimensionMismatch):
            duality.CarveMap.create(duality.space_D(), duality.space_D2(), ["X"])

    def test_identity_dualizes_to_identity(self):
        for space in (duality.space_D(), duality.space_D2(), duality.space_D(3)):
            assert duality.dual_hom(duality.identity(space)) == sa.identity(space.algebra)

    def test_composition(self):
        composite = duality.carve_compose(duality.projection(), duality.first_axis())
        assert composite.components == duality.identity(duality.space_D()).components
        assert duality.dual_contravariance_check(duality.first_axis(), duality.projection())

    def test_composition_needs_matching_spaces(self):
        with pytest.raises(ComposabilityMismatch):
            duality.carve_compose(duality.first_axis(), duality.first_axis())

    def test_named_maps_are_valid(self):
        maps = duality.named_maps()
        assert "d->(d,d)" in maps
        assert "scale_2 on D^3" in maps
        assert "boundary_1 on D^2" in maps
        for carve_map in maps.values():
            hom = duality.dual_hom(carve_map)
            assert hom.source == carve_map.target.algebra
            assert hom.target == carve_map.source.algebra

    def test_maps_between_named_spaces(self):
        maps = list(duality.named_maps().values())
        for f in maps:
            for g in maps:
                if f.target == g.source:
                    assert duality.dual_contravariance_check(f, g)


class TestCubeMaps:
    @given(st.sampled_from(list(Permutation.all(3))), elements(sa.weil_power(3)))
    def test_permutation_moves_subsets(self, sigma, a):
        hom = duality.dual_hom(duality.permutation_map(sigma))
        moved = hom(a)
        for monomial, coefficient in a.terms:
            support = [i + 1 for i, e in enumerate(monomial.exponents) if e]
            image = [0, 0, 0]
            for i in support:
                image[sigma(i) - 1] = 1
            assert moved.coefficient(sa.Monomial(tuple(image))) == coefficient

    @given(st.sampled_from(list(Permutation.all(3))), st.sampled_from(list(Permutation.all(3))))
    def test_permutations_compose_contravariantly(self, sigma, rho):
        f, g = duality.permutation_map(sigma), duality.permutation_map(rho)
        assert duality.dual_contravariance_check(f, g)

    def test_direction_scaling(self):
        hom = duality.dual_hom(duality.direction_scaling(2, 2))
        assert hom.image_of("X1") == sa.normal_form(hom.target, "X1")
        assert hom.image_of("X2") == sa.normal_form(hom.target, "Z*X2")

    def test_boundary_cycle_moves_direction_last(self):
        carve_map = duality.boundary_cycle(3, 1)
        assert [str(c) for c in carve_map.components] == ["X3", "X1", "X2"]
        hom = duality.dual_hom(carve_map)
        assert [str(hom.image_of(x)) for x in ("X1", "X2", "X3")] == ["X3", "X1", "X2"]

    def test_boundary_cycle_keeps_earlier_directions(self):
        hom = duality.dual_hom(duality.boundary_cycle(4, 3))
        assert [str(hom.image_of(x)) for x in ("X1", "X2", "X3", "X4")] == ["X1", "X2", "X4", "X3"]

    def test_direction_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            duality.direction_scaling(2, 3)
        with pytest.raises(IndexOutOfRange):
            duality.boundary_cycle(2, 0)
