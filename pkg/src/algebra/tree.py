"""Unlabelled non-planar rooted trees and forests.

Trees are hash-consed: :func:`b_plus` returns the unique instance for a
given multiset of children, so equality is identity and hashing is O(1).
Children are stored sorted by :attr:`Tree.key`, the recursive
``(size, sorted child keys)`` order, which is also the enumeration order.
"""

import logging
import math
import threading
from functools import cache
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

from ..errors import ParseError

logger = logging.getLogger(__name__)


class Tree:
    __slots__ = ("children", "size", "sigma", "factorial", "key", "_hash")

    def __init__(self, children: Tuple["Tree", ...]):
        self.children = children
        self.size = 1 + sum(c.size for c in children)
        self.key = (self.size, tuple(c.key for c in children))
        self.factorial = self.size * math.prod(c.factorial for c in children)
        sigma = 1
        for child, count in _multiplicities(children):
            sigma *= math.factorial(count) * child.sigma**count
        self.sigma = sigma
        self._hash = hash(self.key)

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Tree") -> bool:
        return self.key < other.key

    def __le__(self, other: "Tree") -> bool:
        return self.key <= other.key

    def __repr__(self) -> str:
        return f"Tree({format_tree(self)})"

    def __str__(self) -> str:
        return format_tree(self)

    def __reduce__(self):
        return (parse_tree, (format_tree(self),))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def forest(self) -> "Forest":
        """The forest of children, i.e. the inverse of :func:`b_plus`."""
        return Forest(self.children)


def _multiplicities(children: Sequence[Tree]) -> Iterator[Tuple[Tree, int]]:
    i = 0
    while i < len(children):
        j = i
        while j < len(children) and children[j] is children[i]:
            j += 1
        yield children[i], j - i
        i = j


_INTERN: Dict[Tuple[int, ...], Tree] = {}
_INTERN_LOCK = threading.Lock()


def _intern(children: Tuple[Tree, ...]) -> Tree:
    ident = tuple(id(c) for c in children)
    tree = _INTERN.get(ident)
    if tree is None:
        with _INTERN_LOCK:
            tree = _INTERN.get(ident)
            if tree is None:
                tree = Tree(children)
                _INTERN[ident] = tree
    return tree


class Forest:
    """Commutative product of trees; the empty forest is the unit."""

    __slots__ = ("trees", "size", "_hash")

    def __init__(self, trees: Iterable[Tree] = ()):
        self.trees = tuple(sorted(trees, key=_tree_key))
        self.size = sum(t.size for t in self.trees)
        self._hash = hash(self.trees)

    @classmethod
    def _sorted(cls, trees: Tuple[Tree, ...]) -> "Forest":
        forest = cls.__new__(cls)
        forest.trees = trees
        forest.size = sum(t.size for t in trees)
        forest._hash = hash(trees)
        return forest

    def __mul__(self, other: "Forest") -> "Forest":
        if not other.trees:
            return self
        if not self.trees:
            return other
        return Forest._sorted(tuple(sorted(self.trees + other.trees, key=_tree_key)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Forest):
            return NotImplemented
        return self._hash == other._hash and self.trees == other.trees

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Forest") -> bool:
        return forest_key(self) < forest_key(other)

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[Tree]:
        return iter(self.trees)

    def __bool__(self) -> bool:
        return bool(self.trees)

    @property
    def sigma(self) -> int:
        result = 1
        for tree, count in _multiplicities(self.trees):
            result *= math.factorial(count) * tree.sigma**count
        return result

    @property
    def factorial(self) -> int:
        return math.prod(t.factorial for t in self.trees)

    def __repr__(self) -> str:
        return f"Forest({format_forest(self)})"

    def __str__(self) -> str:
        return format_forest(self)


def _tree_key(tree: Tree):
    return tree.key


def forest_key(forest: Forest):
    """Display order of forests: by size, then by the trees' keys."""
    return (forest.size, len(forest.trees), tuple(t.key for t in reversed(forest.trees)))


EMPTY = Forest()


def b_plus(forest: Union[Forest, Iterable[Tree]] = ()) -> Tree:
    """Graft the trees of ``forest`` onto a new root."""
    trees = forest.trees if isinstance(forest, Forest) else tuple(sorted(forest, key=_tree_key))
    return _intern(trees)


DOT = b_plus(EMPTY)


def forest_of(*trees: Tree) -> Forest:
    return Forest(trees)


def order(t: Union[Tree, Forest]) -> int:
    return t.size


def sigma(t: Union[Tree, Forest]) -> int:
    return t.sigma


def factorial(t: Union[Tree, Forest]) -> int:
    return t.factorial


def alpha(t: Tree) -> int:
    """Number of monotone (heap-ordered) labellings of ``t``."""
    return math.factorial(t.size) // (t.sigma * t.factorial)


def tall_tree(n: int) -> Tree:
    tree = DOT
    for _ in range(n - 1):
        tree = b_plus([tree])
    return tree


def bushy_tree(n: int) -> Tree:
    return b_plus([DOT] * (n - 1))


# enumeration


def _multisets(total: int, pool: Sequence[Tree], start: int) -> Iterator[Tuple[Tree, ...]]:
    if total == 0:
        yield ()
        return
    for i in range(start, len(pool)):
        tree = pool[i]
        if tree.size <= total:
            for rest in _multisets(total - tree.size, pool, i):
                yield (tree,) + rest


@cache
def enumerate_forests(n: int) -> Tuple[Forest, ...]:
    """All forests with exactly ``n`` vertices (the empty forest for n = 0)."""
    if n == 0:
        return (EMPTY,)
    pool = [t for k in range(1, n + 1) for t in enumerate_trees(k)]
    forests = [Forest(m) for m in _multisets(n, pool, 0)]
    return tuple(sorted(forests, key=forest_key))


@cache
def enumerate_trees(n: int) -> Tuple[Tree, ...]:
    if n < 1:
        raise ValueError(f"tree size must be positive, got {n}")
    if n == 1:
        return (DOT,)
    trees = {b_plus(f) for f in enumerate_forests(n - 1)}
    result = tuple(sorted(trees, key=_tree_key))
    logger.debug(f"enumerated {len(result)} trees of size {n}")
    return result


def trees_up_to(n: int) -> List[Tree]:
    return [t for k in range(1, n + 1) for t in enumerate_trees(k)]


# text grammar


def _parse_at(text: str, pos: int) -> Tuple[Tree, int]:
    if pos >= len(text) or text[pos] != "(":
        raise ParseError("expected '('", text, pos)
    pos += 1
    children = []
    while pos < len(text) and text[pos] == "(":
        child, pos = _parse_at(text, pos)
        children.append(child)
    if pos >= len(text) or text[pos] != ")":
        raise ParseError("expected ')'", text, pos)
    return b_plus(children), pos + 1


def parse_tree(text: str) -> Tree:
    """Parse ``tree := '(' tree* ')'``; surrounding whitespace is ignored."""
    stripped = text.strip()
    offset = len(text) - len(text.lstrip())
    try:
        tree, pos = _parse_at(stripped, 0)
    except ParseError as err:
        raise ParseError("malformed tree", text, err.offset + offset) from None
    if pos != len(stripped):
        raise ParseError("trailing input", text, pos + offset)
    return tree


@cache
def format_tree(tree: Tree) -> str:
    return "(" + "".join(format_tree(c) for c in tree.children) + ")"


def format_forest(forest: Forest) -> str:
    """Space-separated trees, largest first; ``1`` for the empty forest."""
    if not forest.trees:
        return "1"
    return " ".join(format_tree(t) for t in reversed(forest.trees))


def parse_forest(text: str) -> Forest:
    stripped = text.strip()
    if stripped in ("", "1"):
        return EMPTY
    trees = []
    pos = 0
    while pos < len(stripped):
        if stripped[pos].isspace():
            pos += 1
            continue
        try:
            tree, pos = _parse_at(stripped, pos)
        except ParseError as err:
            raise ParseError("malformed forest", text, err.offset) from None
        trees.append(tree)
    return Forest(trees)
