from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.algebra import character as ch
from src.algebra.tree import parse_tree, tall_tree
from src.errors import TruncationExceeded
from src.schemes import library
from src.schemes.tableau import compose_tableaux, elementary_weights
from src.verify import GAUSS2_VALUES, MIDPOINT_TABLE
from strategies import characters, characters_of_order


@given(characters(5), characters(5), characters(5))
def test_convolution_is_associative(a, b, c):
    assert ((a * b) * c).equals(a * (b * c))


@given(characters(5))
def test_group_identity_and_inverse(psi):
    unit = ch.counit(5)
    assert (psi * unit).equals(psi)
    assert (unit * psi).equals(psi)
    assert (psi * ch.inverse(psi)).equals(unit)
    assert (ch.inverse(psi) * psi).equals(unit)


@given(characters(5))
def test_odd_even_decomposition(psi):
    zeta_plus, zeta_minus = ch.odd_even_decompose(psi)
    assert ch.is_even(zeta_plus)
    assert ch.is_odd(zeta_minus)
    assert (zeta_plus * zeta_minus).equals(psi)
    # (ζ⁻)² = ψ*ψ
    assert (zeta_minus * zeta_minus).equals(ch.adjoint(psi) * psi)


@given(characters(5))
def test_decomposition_via_tree_maps(psi):
    zeta_plus, zeta_minus = ch.odd_even_decompose(psi)
    plus, minus = ch.decompose_via_tree_maps(psi)
    assert zeta_plus.equals(plus)
    assert zeta_minus.equals(minus)


@given(characters(5))
def test_right_decomposition(psi):
    odd, even = ch.odd_even_decompose_right(psi)
    assert ch.is_odd(odd)
    assert ch.is_even(even)
    assert (odd * even).equals(psi)


@given(characters(5))
def test_square_root_character(psi):
    root = ch.char_power(psi, Fraction(1, 2))
    assert (root * root).equals(psi)


@given(characters(5))
def test_adjoint_is_involution(psi):
    assert ch.adjoint(ch.adjoint(psi)).equals(psi)


@given(characters(5))
def test_s_equivalence_of_minus_part(psi):
    _, zeta_minus = ch.odd_even_decompose(psi)
    assert ch.s_equivalent(psi, zeta_minus)


def test_exact_flow_order():
    flow = ch.exact_flow(6)
    assert flow(tall_tree(4)) == Fraction(1, 24)
    result = ch.ord(flow)
    assert result.value == 6 and result.lower_bound
    assert str(result) == ">= 6"


@pytest.mark.parametrize("row", MIDPOINT_TABLE, ids=[r[0] for r in MIDPOINT_TABLE])
def test_midpoint_table(row, midpoint):
    text, factorial, value = row
    psi = elementary_weights(midpoint, 4)
    tree = parse_tree(text)
    assert Fraction(1, tree.factorial) == factorial
    assert psi(tree) == value
    assert ch.adjoint(psi)(tree) == value


def test_gauss2_values():
    psi = elementary_weights(library.gauss2(), 6)
    for text, value in GAUSS2_VALUES:
        assert psi(parse_tree(text)) == value
    assert ch.adjoint(psi)(parse_tree("(()(()()()))")) == Fraction(7, 144)


@pytest.mark.parametrize("name", ["midpoint", "gauss2", "trapezoidal"])
def test_symmetric_schemes_are_odd(name):
    psi = elementary_weights(library.get_scheme(name), 6)
    assert ch.is_odd(psi)
    assert ch.ord(psi).value == ch.ord(ch.adjoint(psi)).value


def test_midpoint_orders(midpoint):
    psi = elementary_weights(midpoint, 6)
    assert ch.ord(psi).value == 2
    plus = ch.ord_plus(psi)
    assert plus.value == 6 and plus.lower_bound


@given(characters_of_order(5))
def test_order_of_adjoint(case):
    k, psi = case
    assert ch.ord(psi).value == k
    assert ch.ord(ch.adjoint(psi)).value == k


@given(st.lists(characters_of_order(4), min_size=2, max_size=3))
def test_root_of_product_keeps_order(cases):
    product = cases[0][1]
    for _, psi in cases[1:]:
        product = product * psi
    root = ch.char_power(product, Fraction(1, len(cases)))
    assert ch.ord(root).value >= min(k for k, _ in cases)


@given(characters_of_order(5))
def test_odd_factor_keeps_order(case):
    k, psi = case
    _, zeta_minus = ch.odd_even_decompose(psi)
    assert ch.ord(zeta_minus).value >= k


def test_scaled_exact_flow_is_invariant():
    flow = ch.exact_flow(6)
    assert ch.scaled(flow, Fraction(1, 2)).equals(flow)
    assert ch.scaled(flow, 3).equals(flow)


def test_scaled_is_two_half_steps(midpoint):
    psi = elementary_weights(midpoint, 5)
    half_steps = elementary_weights(compose_tableaux(midpoint, midpoint, Fraction(1, 2)), 5)
    assert ch.scaled(psi, 2).equals(half_steps)


def test_scaled_rejects_zero(rk4):
    with pytest.raises(ValueError):
        ch.scaled(elementary_weights(rk4, 3), 0)


def test_square_root_of_odd_character_is_odd(midpoint):
    root = ch.char_power(elementary_weights(midpoint, 6), Fraction(1, 2))
    assert ch.is_odd(root)


def test_log_of_exact_flow_is_the_vector_field():
    log_flow = ch.log_character(ch.exact_flow(6))
    assert log_flow(parse_tree("()")) == 1
    assert all(v == 0 for t, v in log_flow.values.items() if t.size > 1)


def test_log_of_odd_character_vanishes_on_even_degrees(midpoint):
    log_psi = ch.log_character(elementary_weights(midpoint, 6))
    assert all(v == 0 for t, v in log_psi.values.items() if t.size % 2 == 0)
    assert log_psi(parse_tree("(()())")) != 0


def test_euler_is_not_s_equivalent_to_midpoint(midpoint):
    euler = elementary_weights(library.explicit_euler(), 5)
    result = ch.s_equivalent(euler, elementary_weights(midpoint, 5))
    assert not result
    assert result.degree == 3
    assert str(result) == "differ at degree 3"


def test_even_factor_keeps_s_class():
    psi = elementary_weights(library.gauss2(), 5)
    omega = elementary_weights(library.omega_lambda(Fraction(1, 5)), 5)
    assert ch.is_even(omega)
    result = ch.s_equivalent(psi, omega * psi)
    assert result
    assert str(result) == "equivalent to degree 5"


def test_truncation_exceeded():
    psi = ch.exact_flow(3)
    with pytest.raises(TruncationExceeded):
        psi(tall_tree(4))


def test_json_round_trip(rk4):
    psi = elementary_weights(rk4, 4)
    assert ch.Character.from_json_dict(psi.to_json_dict()).equals(psi)


def test_order_condition_residuals_of_rk4(rk4):
    psi = elementary_weights(rk4, 5)
    assert all(v == 0 for v in ch.order_condition_residuals(psi, 4).values())
    assert any(v != 0 for v in ch.order_condition_residuals(psi, 5).values())
