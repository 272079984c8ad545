import math
from fractions import Fraction
from itertools import product

import pytest

from src.algebra.tree import (
    DOT,
    EMPTY,
    Forest,
    alpha,
    b_plus,
    bushy_tree,
    enumerate_trees,
    format_forest,
    format_tree,
    forest_of,
    parse_forest,
    parse_tree,
    tall_tree,
    trees_up_to,
)
from src.errors import ParseError

COUNTS = [1, 1, 2, 4, 9, 20, 48, 115, 286]


def _labelled_shapes(n: int):
    """Canonical shapes of all parent arrays on n labelled nodes rooted at 0."""
    shapes = set()
    for parents in product(range(n), repeat=n - 1):
        # node k+1 has parent parents[k]; only arrays whose parent precedes the child give trees
        if any(p > k for k, p in enumerate(parents)):
            continue
        children = {i: [] for i in range(n)}
        for k, p in enumerate(parents):
            children[p].append(k + 1)

        def build(node):
            return b_plus([build(c) for c in children[node]])

        shapes.add(build(0))
    return shapes


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_matches_labelled_oracle(n):
    trees = enumerate_trees(n)
    assert len(trees) == COUNTS[n - 1]
    assert set(trees) == _labelled_shapes(n)


def test_counts_to_nine():
    assert [len(enumerate_trees(n)) for n in range(1, 10)] == COUNTS


def test_enumeration_is_sorted_and_deterministic():
    trees = enumerate_trees(6)
    assert list(trees) == sorted(trees)
    assert enumerate_trees(6) == trees


def test_non_planarity():
    assert parse_tree("((())())") is parse_tree("(()(()))")
    assert format_tree(parse_tree("((())())")) == "(()(()))"


@pytest.mark.parametrize("text,offset", [("(()", 3), ("())", 2), ("x", 0), ("", 0)])
def test_parse_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse_tree(text)
    assert info.value.offset == offset


def test_round_trip_and_b_plus():
    for tree in trees_up_to(8):
        assert parse_tree(format_tree(tree)) is tree
        assert b_plus(tree.forest()) is tree


def test_b_plus_examples(dot, chain2, cherry, chain3):
    assert b_plus(EMPTY) is DOT
    assert b_plus(forest_of(dot, dot)) is cherry
    assert b_plus([chain2]) is chain3


def test_statistics(dot, cherry):
    assert (dot.sigma, dot.factorial) == (1, 1)
    assert cherry.factorial == 3
    assert cherry.sigma == 2
    assert bushy_tree(4).sigma == 6
    assert tall_tree(5).factorial == 120
    assert bushy_tree(5).factorial == 5


@pytest.mark.parametrize("n", range(1, 10))
def test_exact_flow_sums(n):
    trees = enumerate_trees(n)
    assert sum(Fraction(1, t.sigma * t.factorial) for t in trees) == Fraction(1, n)
    assert sum(alpha(t) for t in trees) == math.factorial(n - 1)


def test_forest_grammar(dot, chain2):
    forest = parse_forest("() (())")
    assert forest == forest_of(chain2, dot)
    assert format_forest(forest) == "(()) ()"
    assert format_forest(EMPTY) == "1"
    assert parse_forest("1") == EMPTY
    assert forest.size == 3
    assert forest * Forest([dot]) == forest_of(dot, dot, chain2)
