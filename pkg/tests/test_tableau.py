from fractions import Fraction

import pytest
from hypothesis import given

from src.algebra import character as ch
from src.algebra.character import Character
from src.algebra.tree import enumerate_trees, trees_up_to
from src.errors import InvalidTheta, ParseError
from src.schemes import library
from src.schemes.tableau import (
    ButcherTableau,
    adjoint_tableau,
    compose_tableaux,
    elementary_weight_closed_form,
    elementary_weights,
    is_symmetric_tableau,
    squared_symmetric_component,
    tableau_from_mapping,
)
from strategies import explicit_tableaux


def _scaled(psi: Character, theta) -> Character:
    return Character.build({t: theta**t.size * v for t, v in psi.values.items()}, psi.truncation)


def test_stage_nodes_and_consistency(midpoint, rk4):
    assert midpoint.c == (Fraction(1, 2),)
    assert rk4.c == (0, Fraction(1, 2), Fraction(1, 2), 1)
    assert rk4.consistent and rk4.explicit
    assert not midpoint.explicit


def test_shape_is_validated():
    with pytest.raises(ValueError):
        ButcherTableau(((Fraction(0),),), (Fraction(1), Fraction(0)))


def test_from_mapping_parses_strings():
    tableau = tableau_from_mapping({"A": [[], ["1/2"]], "b": ["0", "1"], "name": "midpoint-explicit"})
    assert tableau.A == ((0, 0), (Fraction(1, 2), 0))
    assert tableau.name == "midpoint-explicit"
    assert "midpoint-explicit" in tableau.to_string()


@pytest.mark.parametrize("name", ["rk4", "heun3", "gauss2", "nystrom5"])
def test_recursion_matches_closed_form(name):
    tableau = library.get_scheme(name)
    psi = elementary_weights(tableau, 5)
    for tree in trees_up_to(5):
        assert psi(tree) == elementary_weight_closed_form(tableau, tree)


@given(explicit_tableaux(3))
def test_adjoint_tableau_has_adjoint_character(tableau):
    psi = elementary_weights(tableau, 4)
    assert elementary_weights(adjoint_tableau(tableau), 4).equals(ch.adjoint(psi))


@given(explicit_tableaux(3), explicit_tableaux(2))
def test_composition_is_convolution(first, second):
    half = Fraction(1, 2)
    composed = elementary_weights(compose_tableaux(first, second, half), 4)
    expected = _scaled(elementary_weights(first, 4), half) * _scaled(elementary_weights(second, 4), half)
    assert composed.equals(expected)


def test_full_step_composition(rk4):
    composed = elementary_weights(compose_tableaux(rk4, rk4, 1), 4)
    psi = elementary_weights(rk4, 4)
    assert composed.equals(psi * psi)


def test_euler_then_backward_euler_is_trapezoidal():
    composed = compose_tableaux(library.explicit_euler(), library.backward_euler(), Fraction(1, 2))
    trapezoidal = library.trapezoidal()
    assert (composed.A, composed.b) == (trapezoidal.A, trapezoidal.b)


@pytest.mark.parametrize("theta", [0, Fraction(3, 2), -1])
def test_theta_out_of_range(theta, midpoint):
    with pytest.raises(InvalidTheta):
        compose_tableaux(midpoint, midpoint, theta)


@pytest.mark.parametrize("name", ["euler", "heun3", "rk4"])
def test_squared_symmetric_component_is_symmetric(name):
    tableau = squared_symmetric_component(library.get_scheme(name))
    assert is_symmetric_tableau(tableau)
    assert ch.is_odd(elementary_weights(tableau, 5))


def test_printed_dirk_matches_neither_convention(midpoint):
    printed = library.reference_dirk()
    assert sum(b * c for b, c in zip(printed.b, printed.c)) == 1
    psi = elementary_weights(printed, 4)
    assert not psi.equals(elementary_weights(compose_tableaux(midpoint, midpoint, 1), 4))
    assert not psi.equals(elementary_weights(compose_tableaux(midpoint, midpoint, Fraction(1, 2)), 4))


@pytest.mark.parametrize("name", [n for n in library.scheme_names() if library.lookup(n).order > 0])
def test_library_entries(name):
    entry = library.lookup(name)
    tableau = library.get_scheme(name)
    psi = elementary_weights(tableau, entry.order + 1)
    assert ch.ord(psi).value == entry.order
    assert ch.is_odd(psi) is entry.symmetric
    assert is_symmetric_tableau(tableau) is entry.symmetric
    assert tableau.explicit is entry.explicit
    assert tableau.consistent


def test_omega_family_is_even():
    psi = elementary_weights(library.get_scheme("omega:1/3"), 5)
    assert ch.is_even(psi)
    assert all(psi(t) == 0 for t in enumerate_trees(3))
    with pytest.raises(ValueError):
        library.omega_lambda(Fraction(0))


def test_aliases_name_the_tableau():
    assert library.get_scheme("ees25-opt").name == "ees25-opt"
    assert library.get_scheme("ees25:1/10").A == library.get_scheme("ees25-opt").A
    assert "ees27-simple" in library.scheme_names(include_families=True)
    assert "ees27" not in library.scheme_names()


@pytest.mark.parametrize("spec", ["rk5", "ees25", "rk4:1/2"])
def test_get_scheme_errors(spec):
    with pytest.raises(ParseError):
        library.get_scheme(spec)


def test_float_tableau_weights(rk4):
    psi = elementary_weights(rk4.to_float(), 4)
    assert not psi.exact
    assert ch.ord(psi).value == 4
