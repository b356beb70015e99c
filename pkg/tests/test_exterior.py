import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from synthdg import exterior, forms
from synthdg import scalar_algebra as sa
from synthdg.errors import DimensionMismatch, IndexOutOfRange, NonGenericBody
from synthdg.oracle import classical_exterior_derivative
from synthdg.permutations import Permutation
from tests.strategies import microcubes


def field(n, coordinates, coefficients, name=""):
    return forms.ClassicalTensorField.create(n, coordinates, coefficients, name=name)


X_DY = field(1, ["x", "y"], {"2": "x"}, "x_dy")
Y_DX = field(1, ["x", "y"], {"1": "y"}, "y_dx")
CONSTANT_DX = field(1, ["x", "y"], {"1": "3"}, "constant_dx")
SPATIAL = field(1, ["x", "y", "z"], {"1": "x*y", "2": "z^2 - x", "3": "x*y*z"}, "spatial")
SPATIAL_AREA = field(2, ["x", "y", "z"], {"1,2": "z", "1,3": "x*y^2", "2,3": "1/2*x"}, "spatial_area")


def area(gamma):
    return forms.from_classical(field(2, ["x", "y"], {"1,2": "1"}), check=False)(gamma)


class TestDeltaPerm:
    def test_deleting_the_moved_entry(self):
        assert exterior.delta_perm(Permutation.create([2, 1]), 2) == Permutation.identity(1)
        assert exterior.delta_perm(Permutation.create([3, 1, 2]), 1) == Permutation.create([2, 1])

    @given(st.integers(min_value=1, max_value=4).flatmap(
        lambda n: st.tuples(st.permutations(range(1, n + 1)), st.integers(min_value=1, max_value=n))
    ))
    def test_sign_law(self, case):
        images, i = case
        sigma = Permutation.create(images)
        delta = exterior.delta_perm(sigma, i)
        assert delta.size == sigma.size - 1
        assert delta.sign == (-1) ** (sigma.inverse()(i) - i) * sigma.sign

    def test_sign_law_check(self):
        results = exterior.sign_law_check(4)
        assert [r.passed for r in results] == [True] * 4

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            exterior.delta_perm(Permutation.identity(2), 3)


class TestShuffleBoundary:
    def test_reads_last_direction_as_dual_number(self):
        gamma = forms.Microcube.create(2, 1, {"": [1], "1": [2], "2": [3], "12": [4]})
        shuffled = exterior.shuffle_boundary(1, gamma)
        extension = exterior.dual_extension(1)
        assert extension.generators == ("E1",)
        assert shuffled.n == 1
        assert shuffled.depth == 1
        unit, epsilon = sa.Monomial((0,)), sa.Monomial((1,))
        assert shuffled.base == (extension.element({unit: Fraction(1), epsilon: Fraction(2)}),)
        assert shuffled.edge(1) == (extension.element({unit: Fraction(3), epsilon: Fraction(4)}),)

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_moves_chosen_direction_last(self, i):
        gamma = forms.Microcube.create(3, 1, {"": [0], "1": [1], "2": [2], "3": [3], "123": [7]})
        shuffled = exterior.shuffle_boundary(i, gamma)
        epsilon = sa.Monomial((1,))
        assert shuffled.base[0].coefficient(epsilon) == i
        others = [k for k in (1, 2, 3) if k != i]
        assert [shuffled.edge(k)[0].unit_part() for k in (1, 2)] == others

    def test_nesting_uses_fresh_generators(self):
        gamma = forms.Microcube.random(random.Random(0), 3, 1)
        twice = exterior.shuffle_boundary(1, exterior.shuffle_boundary(2, gamma))
        assert twice.depth == 2
        assert twice.base[0].algebra == exterior.dual_extension(2)

    def test_direction_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            exterior.shuffle_boundary(3, forms.Microcube.create(2, 1, {}))


class TestExteriorDerivative:
    def test_x_dy(self):
        d_omega = exterior.exterior_derivative(forms.from_classical(X_DY, check=False), trials=10)
        assert d_omega.status is forms.FormStatus.VALIDATED
        gamma = forms.Microcube.create(2, 2, {"": [5, 7], "1": [1, 2], "2": [3, 4]})
        assert d_omega(gamma) == area(gamma) == [-2]

    def test_y_dx(self):
        d_omega = exterior.exterior_derivative(forms.from_classical(Y_DX, check=False), check=False)
        gamma = forms.Microcube.create(2, 2, {"": [5, 7], "1": [1, 2], "2": [3, 4]})
        assert d_omega(gamma) == [2]

    @given(microcubes(2, 2))
    def test_constant_coefficients_are_closed(self, gamma):
        d_omega = exterior.exterior_derivative(forms.from_classical(CONSTANT_DX, check=False), check=False)
        assert d_omega(gamma) == [0]

    @given(microcubes(2, 3))
    def test_matches_classical_derivative(self, gamma):
        omega = forms.from_classical(SPATIAL, check=False)
        expected = forms.from_classical(classical_exterior_derivative(SPATIAL), check=False)
        assert exterior.exterior_derivative(omega, check=False)(gamma) == expected(gamma)

    @given(microcubes(3, 3))
    def test_two_form_matches_classical_derivative(self, gamma):
        omega = forms.from_classical(SPATIAL_AREA, check=False)
        expected = forms.from_classical(classical_exterior_derivative(SPATIAL_AREA), check=False)
        assert exterior.exterior_derivative(omega, check=False)(gamma) == expected(gamma)

    @given(microcubes(3, 3))
    def test_twice_is_zero(self, gamma):
        omega = forms.from_classical(SPATIAL, check=False)
        dd = exterior.exterior_derivative(exterior.exterior_derivative(omega, check=False), check=False)
        assert dd(gamma) == [0]

    def test_degree_of_partial_integrals(self):
        omega = forms.from_classical(X_DY, check=False)
        with pytest.raises(DimensionMismatch):
            exterior.integral_i(omega, forms.Microcube.create(1, 2, {}), 1)

    def test_body_that_is_not_generic(self):
        def floats_only(gamma):
            return [float(gamma.edge(1)[0])]

        omega = forms.make_form(1, 1, 1, floats_only, check=False)
        with pytest.raises(NonGenericBody):
            exterior.integral_i(omega, forms.Microcube.create(2, 1, {"1": [1]}), 1)


class TestBoundaryLaws:
    @pytest.mark.parametrize("n1", [1, 2, 3, 4])
    def test_scaling_commutes_with_boundary(self, n1):
        for i in range(1, n1 + 1):
            for j in range(1, n1 + 1):
                assert exterior.boundary_scaling_commutes(n1, i, j)

    def test_partial_integrals_are_homogeneous(self):
        omega = forms.from_classical(X_DY, check=False)
        results = exterior.partial_integral_homogeneity_check(omega, samples=5, seed=1)
        assert len(results) == 2
        assert all(r.passed for r in results)

    def test_alternating_sum_alternates(self):
        omega = forms.from_classical(SPATIAL, check=False)
        assert exterior.alternating_sum_check(omega, samples=3, seed=2)[0].passed

    def test_alternating_sum_on_four_cubes(self):
        omega = forms.from_classical(field(3, ["w", "x", "y", "z"], {"1,2,3": "w*z", "2,3,4": "x^2 - y"}), check=False)
        [result] = exterior.alternating_sum_check(omega, samples=2, seed=3)
        assert result.passed
