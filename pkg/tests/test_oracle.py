import sympy

from synthdg import forms
from synthdg.oracle import classical_exterior_derivative
from synthdg.suite import oracle_check

x, y, z = sympy.symbols("x y z")


def field(n, coordinates, coefficients, name=""):
    return forms.ClassicalTensorField.create(n, coordinates, coefficients, name=name)


class TestClassicalDerivative:
    def test_x_dy(self):
        d = classical_exterior_derivative(field(1, ["x", "y"], {"2": "x"}))
        assert str(d) == "1 dx^dy"

    def test_y_dx(self):
        d = classical_exterior_derivative(field(1, ["x", "y"], {"1": "y"}))
        assert str(d) == "-1 dx^dy"

    def test_closed_field(self):
        d = classical_exterior_derivative(field(1, ["x", "y"], {"1": "3"}))
        assert d.coefficients == ()
        assert str(d) == "0"

    def test_gradient_is_closed(self):
        gradient = field(1, ["x", "y", "z"], {"1": "y*z", "2": "x*z", "3": "x*y"})
        assert classical_exterior_derivative(gradient).coefficients == ()

    def test_function_to_gradient(self):
        d = classical_exterior_derivative(field(0, ["x", "y"], {"": "x^2*y"}))
        assert d.coefficient((1,)) == (2 * x * y,)
        assert d.coefficient((2,)) == (x**2,)

    def test_two_form_in_space(self):
        omega = field(2, ["x", "y", "z"], {"1,2": "z", "1,3": "x*y^2", "2,3": "1/2*x"})
        d = classical_exterior_derivative(omega)
        # d/dx(x/2) - d/dy(x y^2) + d/dz(z)
        assert d.coefficient((1, 2, 3)) == (sympy.Rational(1, 2) - 2 * x * y + 1,)

    def test_name_is_carried(self):
        assert str(classical_exterior_derivative(field(1, ["x", "y"], {"2": "x"}, "x_dy"))) == "d(x_dy)"


class TestOracleCheck:
    def test_one_form_in_the_plane(self):
        x_dy = field(1, ["x", "y"], {"2": "x"}, "x_dy")
        results = oracle_check(x_dy, forms.from_classical(x_dy, check=False), samples=4, seed=1)
        assert [r.id for r in results] == ["oracle.matches.x_dy", "oracle.is-form.x_dy"]
        assert all(r.passed for r in results)

    def test_one_form_in_space(self):
        spatial = field(1, ["x", "y", "z"], {"1": "x*y", "2": "z^2 - x", "3": "x*y*z"}, "spatial")
        results = oracle_check(spatial, forms.from_classical(spatial, check=False), samples=2, seed=2)
        assert [r.id for r in results] == [
            "oracle.matches.spatial",
            "oracle.is-form.spatial",
            "oracle.dd-zero.spatial",
        ]
        assert all(r.passed for r in results)

    def test_wrong_derivative_is_reported(self):
        x_dy = field(1, ["x", "y"], {"2": "x"}, "x_dy")
        y_dx = forms.from_classical(field(1, ["x", "y"], {"1": "y"}), check=False)
        results = oracle_check(x_dy, y_dx, samples=4, seed=3)
        assert not results[0].passed
        assert "classical" in results[0].witness
