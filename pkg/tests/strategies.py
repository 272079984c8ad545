"""Hypothesis strategies for scalars, trees, characters and tableaux."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from src.algebra.character import Character, random_character
from src.algebra.scalar import QuadExt
from src.algebra.tree import trees_up_to
from src.schemes.tableau import ButcherTableau

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def quad2(draw, nonzero: bool = False) -> QuadExt:
    value = QuadExt(draw(rationals), draw(rationals), 2)
    if nonzero and value == 0:
        value = QuadExt(1, 0, 2)
    return value


@st.composite
def small_trees(draw, max_size: int = 5):
    return draw(st.sampled_from(trees_up_to(max_size)))


@st.composite
def characters(draw, truncation: int = 5):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_character(truncation, random.Random(seed))


@st.composite
def explicit_tableaux(draw, max_stages: int = 3):
    s = draw(st.integers(min_value=1, max_value=max_stages))
    entries = st.fractions(min_value=-2, max_value=2, max_denominator=6)
    A = [[draw(entries) for _ in range(i)] + [Fraction(0)] * (s - i) for i in range(s)]
    b = [draw(entries) for _ in range(s)]
    return ButcherTableau.from_rows(A, b, "random")


@st.composite
def characters_of_order(draw, truncation: int = 5, max_order: int = 3):
    """(k, ψ) with ψ = 1/τ! up to degree k and ψ ≠ 1/τ! on every tree of degree k + 1."""
    k = draw(st.integers(min_value=1, max_value=max_order))
    rng = random.Random(draw(st.integers(min_value=0, max_value=2**32 - 1)))

    def value(tree) -> Fraction:
        exact = Fraction(1, tree.factorial)
        if tree.size <= k:
            return exact
        return exact + rng.choice([-1, 1]) * Fraction(rng.randint(1, 9), rng.randint(1, 9))

    return k, Character.from_function(value, truncation, f"order-{k}")
