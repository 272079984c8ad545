import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from src.analysis.stability import (
    AStability,
    RasterGrid,
    StabilityFunction,
    a_stable_symmetric_component,
    char_stability_check,
    composed_stability,
    polynomial_roots,
    raster_domain,
    raster_order_star,
    real_stability_interval,
    stability_function,
    taylor_coefficients,
)
from src.schemes import library
from src.schemes.tableau import ButcherTableau, elementary_weights

F = Fraction


@pytest.mark.parametrize(
    "name,numerator,denominator",
    [
        ("euler", (1, 1), (1,)),
        ("rk4", (1, 1, F(1, 2), F(1, 6), F(1, 24)), (1,)),
        ("midpoint", (1, F(1, 2)), (1, F(-1, 2))),
        ("gauss2", (1, F(1, 2), F(1, 12)), (1, F(-1, 2), F(1, 12))),
    ],
)
def test_stability_functions(name, numerator, denominator):
    R = stability_function(library.get_scheme(name))
    assert R.numerator == numerator
    assert R.denominator == denominator
    assert R.explicit is (denominator == (1,))


def test_to_string():
    assert stability_function(library.explicit_euler()).to_string() == "R(z) = 1 + z"
    assert stability_function(library.implicit_midpoint()).to_string() == "R(z) = (1 + 1/2*z) / (1 - 1/2*z)"


def test_composed_euler_is_cayley():
    R = composed_stability(stability_function(library.explicit_euler()))
    assert (R.numerator, R.denominator) == ((1, 1), (1, -1))
    for t in (0.1, 1.0, 10.0):
        assert abs(complex(R(1j * t))) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", ["midpoint", "gauss2", "trapezoidal"])
def test_symmetric_schemes_are_unimodular_on_the_axis(name):
    R = stability_function(library.get_scheme(name))
    moduli = np.abs(R(1j * np.linspace(-5, 5, 11)))
    np.testing.assert_allclose(moduli, 1.0, atol=1e-12)


def test_a_stability_verdicts():
    counterexample = ButcherTableau.from_rows([[0], [1]], [2, -1], "counterexample")
    assert stability_function(counterexample).numerator == (1, 1, -1)
    assert a_stable_symmetric_component(library.explicit_euler()) is AStability.STABLE
    assert a_stable_symmetric_component(library.classic_rk4()) is AStability.STABLE
    verdict = a_stable_symmetric_component(counterexample)
    assert verdict is AStability.UNSTABLE
    assert not verdict


def test_a_stability_needs_explicit_tableau(midpoint):
    with pytest.raises(ValueError):
        a_stable_symmetric_component(midpoint)


@pytest.mark.parametrize("name", library.scheme_names())
def test_chain_coefficients(name):
    T = library.get_scheme(name)
    psi = elementary_weights(T, 6)
    R = stability_function(T)
    assert all(char_stability_check(psi, R, n) for n in range(1, 7))


def test_taylor_coefficients_of_midpoint():
    R = stability_function(library.implicit_midpoint())
    assert taylor_coefficients(R, 4) == [1, 1, F(1, 2), F(1, 4), F(1, 8)]


@pytest.mark.parametrize(
    "name,expected",
    [("euler", 2.0), ("heun2", 2.0), ("rk4", 2.785293563), ("midpoint", math.inf)],
)
def test_real_stability_interval(name, expected):
    value = real_stability_interval(stability_function(library.get_scheme(name)))
    assert value == pytest.approx(expected, rel=1e-6)


def test_ees27_real_interval_is_longer():
    intervals = {
        name: real_stability_interval(stability_function(library.get_scheme(name)))
        for name in ("ees27-opt", "rk4", "nystrom5")
    }
    assert intervals["nystrom5"] == pytest.approx(3.217, abs=5e-3)
    assert intervals["ees27-opt"] > max(intervals["rk4"], intervals["nystrom5"])


def test_polynomial_roots():
    roots = np.sort(polynomial_roots((2, -3, 1)).real)
    np.testing.assert_allclose(roots, [1.0, 2.0])
    assert len(polynomial_roots((1,))) == 0
    assert len(polynomial_roots((1, 0, 0))) == 0


def test_raster_orientation_and_membership():
    R = stability_function(library.explicit_euler())
    grid = raster_domain(R, RasterGrid((-3.0, 1.0), (-2.0, 2.0), 5), threads=2)
    re, im = grid.axes()
    assert im[0] == 2.0 and im[-1] == -2.0
    inside = grid.membership()
    assert inside.shape == (5, 5)
    assert inside[2, 2]
    assert not inside[0, 2]
    assert not inside[2, 4]


def test_order_star():
    R = stability_function(library.explicit_euler())
    star = raster_order_star(R, RasterGrid((-3.0, 1.0), (-2.0, 2.0), 5), threads=1)
    inside = star.membership()
    assert inside[2, 0]
    assert not inside[2, 3]
    assert not inside[2, 4]


def test_raster_poles_are_not_members():
    R = stability_function(library.implicit_midpoint())
    grid = raster_domain(R, RasterGrid((-2.0, 2.0), (-2.0, 2.0), 5))
    assert np.isinf(grid.values[2, 4])
    assert not grid.membership()[2, 4]


def test_raster_grid_validation():
    with pytest.raises(ValueError):
        RasterGrid((-1.0, 1.0), (-1.0, 1.0), 1)
    with pytest.raises(ValueError):
        RasterGrid((-1.0, 1.0), (-1.0, 1.0), 3).membership()


def test_from_sympy_normalizes_constant_terms():
    z = sympy.Symbol("z")
    R = StabilityFunction.from_sympy((2 + z) / (2 - z))
    assert (R.numerator, R.denominator) == ((1, F(1, 2)), (1, F(-1, 2)))
