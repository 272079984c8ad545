"""The Butcher–Connes–Kreimer Hopf algebra of rooted trees.

Elements are finite linear combinations of forests with exact coefficients.
The coproduct uses the left factor for the pruned forest and the right
factor for the root part. All per-tree maps are memoized; their results are
immutable, so concurrent callers at worst compute a value twice.
"""

import logging
from fractions import Fraction
from functools import cache
from itertools import combinations
from math import comb
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Tuple, Union

from .scalar import Scalar, format_scalar, is_zero
from .tree import (
    DOT,
    EMPTY,
    Forest,
    Tree,
    b_plus,
    forest_key,
    format_forest,
    parse_forest,
)

logger = logging.getLogger(__name__)


class AlgebraElement:
    """Linear combination of forests; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Union[Mapping[Forest, Scalar], Iterable[Tuple[Forest, Scalar]]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: Dict[Forest, Scalar] = {}
        for forest, coeff in items:
            collected[forest] = collected.get(forest, 0) + coeff
        self.terms = {f: c for f, c in collected.items() if not is_zero(c)}

    @classmethod
    def _raw(cls, terms: Dict[Forest, Scalar]) -> "AlgebraElement":
        element = cls.__new__(cls)
        element.terms = terms
        return element

    @classmethod
    def of(cls, x: Union[Tree, Forest], coeff: Scalar = 1) -> "AlgebraElement":
        forest = Forest((x,)) if isinstance(x, Tree) else x
        return cls._raw({forest: coeff} if not is_zero(coeff) else {})

    @classmethod
    def unit(cls) -> "AlgebraElement":
        return cls._raw({EMPTY: 1})

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls._raw({})

    @classmethod
    def parse(cls, lines: Iterable[str]) -> "AlgebraElement":
        """Inverse of :meth:`to_lines`: ``coeff * forest`` per line."""
        from .scalar import parse_scalar

        terms = []
        for line in lines:
            if not line.strip():
                continue
            coeff, sep, forest = line.partition(" * ")
            if not sep:
                coeff, forest = "1", line
            terms.append((parse_forest(forest), parse_scalar(coeff)))
        return cls(terms)

    def __iter__(self) -> Iterator[Tuple[Forest, Scalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, forest: Forest) -> Scalar:
        return self.terms.get(forest, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Tree, Forest)):
            other = AlgebraElement.of(other)
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        terms = dict(self.terms)
        for forest, coeff in other.terms.items():
            value = terms.get(forest, 0) + coeff
            if is_zero(value):
                terms.pop(forest, None)
            else:
                terms[forest] = value
        return AlgebraElement._raw(terms)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement._raw({f: -c for f, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, factor: Scalar) -> "AlgebraElement":
        if is_zero(factor):
            return AlgebraElement.zero()
        return AlgebraElement._raw({f: c * factor for f, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (Tree, Forest)):
            return multiply(self, AlgebraElement.of(other))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def degrees(self) -> List[int]:
        return sorted({f.size for f in self.terms})

    def is_homogeneous(self, degree: int) -> bool:
        return all(f.size == degree for f in self.terms)

    def homogeneous_part(self, degree: int) -> "AlgebraElement":
        return AlgebraElement._raw({f: c for f, c in self.terms.items() if f.size == degree})

    def max_tree_degree(self) -> int:
        return max((t.size for f in self.terms for t in f.trees), default=0)

    def sorted_terms(self) -> List[Tuple[Forest, Scalar]]:
        return sorted(self.terms.items(), key=lambda item: forest_key(item[0]), reverse=True)

    def to_lines(self) -> List[str]:
        return [f"{format_scalar(c)} * {format_forest(f)}" for f, c in self.sorted_terms()]

    def __repr__(self) -> str:
        if not self.terms:
            return "AlgebraElement(0)"
        return "AlgebraElement(" + " + ".join(self.to_lines()) + ")"


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    terms: Dict[Forest, Scalar] = {}
    for fx, cx in x.terms.items():
        for fy, cy in y.terms.items():
            forest = fx * fy
            terms[forest] = terms.get(forest, 0) + cx * cy
    return AlgebraElement._raw({f: c for f, c in terms.items() if not is_zero(c)})


def _as_element(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    return AlgebraElement.of(x)


class TensorElement:
    """Linear combination of pairs ``(left, right)`` of forests."""

    __slots__ = ("terms",)

    def __init__(self, terms: Union[Mapping[Tuple[Forest, Forest], Scalar], Iterable] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: Dict[Tuple[Forest, Forest], Scalar] = {}
        for pair, coeff in items:
            collected[pair] = collected.get(pair, 0) + coeff
        self.terms = {p: c for p, c in collected.items() if not is_zero(c)}

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        terms: Dict[Tuple[Forest, Forest], Scalar] = {}
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                pair = (l1 * l2, r1 * r2)
                terms[pair] = terms.get(pair, 0) + c1 * c2
        return TensorElement(terms)

    def contract(
        self,
        left: Callable[[Forest], AlgebraElement],
        right: Callable[[Forest], AlgebraElement],
    ) -> AlgebraElement:
        """μ∘(left ⊗ right) applied to this tensor."""
        total: Dict[Forest, Scalar] = {}
        for (lf, rf), coeff in self.terms.items():
            product = multiply(left(lf), right(rf))
            for forest, c in product.terms.items():
                total[forest] = total.get(forest, 0) + coeff * c
        return AlgebraElement(total)

    def to_lines(self) -> List[str]:
        ordered = sorted(
            self.terms.items(),
            key=lambda item: (forest_key(item[0][0]), forest_key(item[0][1])),
            reverse=True,
        )
        return [
            f"{format_scalar(c)} * {format_forest(l)} (x) {format_forest(r)}"
            for (l, r), c in ordered
        ]

    def __repr__(self) -> str:
        return "TensorElement(" + " + ".join(self.to_lines()) + ")"


# coproduct

Pairs = Dict[Tuple[Forest, Forest], int]


@cache
def _coproduct_tree(tree: Tree) -> Pairs:
    # Δ(B₊(x)) = B₊(x)⊗∅ + (Id⊗B₊)Δ(x)
    terms: Pairs = {(Forest((tree,)), EMPTY): 1}
    for (pruned, trunk), coeff in _coproduct_forest(tree.forest()).items():
        pair = (pruned, Forest((b_plus(trunk),)))
        terms[pair] = terms.get(pair, 0) + coeff
    return terms


@cache
def _coproduct_forest(forest: Forest) -> Pairs:
    result: Pairs = {(EMPTY, EMPTY): 1}
    for tree in forest.trees:
        step: Pairs = {}
        for (l1, r1), c1 in result.items():
            for (l2, r2), c2 in _coproduct_tree(tree).items():
                pair = (l1 * l2, r1 * r2)
                step[pair] = step.get(pair, 0) + c1 * c2
        result = step
    return result


def coproduct(x: Union[Tree, Forest, AlgebraElement]) -> TensorElement:
    """Δ, extended multiplicatively to forests and linearly to elements."""
    if isinstance(x, Tree):
        return TensorElement(_coproduct_tree(x))
    if isinstance(x, Forest):
        return TensorElement(_coproduct_forest(x))
    total: Dict[Tuple[Forest, Forest], Scalar] = {}
    for forest, coeff in x.terms.items():
        for pair, c in _coproduct_forest(forest).items():
            total[pair] = total.get(pair, 0) + coeff * c
    return TensorElement(total)


@cache
def _reduced_coproduct_forest(forest: Forest) -> Pairs:
    return {
        (l, r): c
        for (l, r), c in _coproduct_forest(forest).items()
        if l.trees and r.trees
    }


def reduced_coproduct(x: Union[Tree, Forest]) -> TensorElement:
    """δ(x) = Δ(x) − x⊗∅ − ∅⊗x."""
    forest = Forest((x,)) if isinstance(x, Tree) else x
    return TensorElement(_reduced_coproduct_forest(forest))


def iterated_coproduct(tree: Tree) -> Dict[Tuple[Forest, Forest, Forest], int]:
    """(Δ⊗Id)∘Δ(tree) as a map from forest triples to multiplicities."""
    terms: Dict[Tuple[Forest, Forest, Forest], int] = {}
    for (pruned, trunk), c in _coproduct_tree(tree).items():
        for (l, m), c2 in _coproduct_forest(pruned).items():
            key = (l, m, trunk)
            terms[key] = terms.get(key, 0) + c * c2
    return terms


# multiplicative extension


def extend(tree_map: Callable[[Tree], AlgebraElement]) -> Callable[[Forest], AlgebraElement]:
    """Multiplicative extension of a tree map to forests (memoized)."""

    @cache
    def on_forest(forest: Forest) -> AlgebraElement:
        result = AlgebraElement.unit()
        for tree in forest.trees:
            result = multiply(result, tree_map(tree))
        return result

    return on_forest


def apply_linear(
    forest_map: Callable[[Forest], AlgebraElement], x: Union[Tree, Forest, AlgebraElement]
) -> AlgebraElement:
    """Linear extension of a forest map to algebra elements."""
    x = _as_element(x)
    total: Dict[Forest, Scalar] = {}
    for forest, coeff in x.terms.items():
        for f, c in forest_map(forest).terms.items():
            total[f] = total.get(f, 0) + coeff * c
    return AlgebraElement(total)


def _identity(forest: Forest) -> AlgebraElement:
    return AlgebraElement._raw({forest: 1})


def _sign(forest: Forest) -> int:
    return -1 if forest.size % 2 else 1


# antipode


@cache
def _antipode_tree(tree: Tree) -> AlgebraElement:
    # S(τ) = −τ − Σ_δ S(P)·R
    total: Dict[Forest, Scalar] = {Forest((tree,)): -1}
    for (pruned, trunk), coeff in _reduced_coproduct_forest(Forest((tree,))).items():
        for forest, c in _antipode_forest(pruned).terms.items():
            product = forest * trunk
            total[product] = total.get(product, 0) - coeff * c
    return AlgebraElement(total)


_antipode_forest = extend(_antipode_tree)


def antipode(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    return apply_linear(_antipode_forest, x)


def bar_antipode(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    """S̄(x) = (−1)^{|x|} S(x) on homogeneous components."""
    return apply_linear(lambda f: _antipode_forest(f).scale(_sign(f)), x)


def _edges(tree: Tree) -> Tuple[List[int], List[Tuple[int, int]]]:
    """Label ``tree`` depth-first; return parents and (parent, child) edges."""
    parents: List[int] = []
    edges: List[Tuple[int, int]] = []

    def visit(node: Tree, parent: int) -> None:
        index = len(parents)
        parents.append(parent)
        if parent >= 0:
            edges.append((parent, index))
        for child in node.children:
            visit(child, index)

    visit(tree, -1)
    return parents, edges


def _components(size: int, kept: Iterable[Tuple[int, int]]) -> Forest:
    kids: Dict[int, List[int]] = {i: [] for i in range(size)}
    has_parent = set()
    for parent, child in kept:
        kids[parent].append(child)
        has_parent.add(child)

    def build(node: int) -> Tree:
        return b_plus([build(k) for k in kids[node]])

    return Forest(build(root) for root in range(size) if root not in has_parent)


def antipode_forest_formula(tree: Tree) -> AlgebraElement:
    """S(τ) as the signed sum over all edge subsets of τ (exponential)."""
    parents, edges = _edges(tree)
    terms: Dict[Forest, Scalar] = {}
    for k in range(len(edges) + 1):
        for cut in combinations(range(len(edges)), k):
            removed = set(cut)
            kept = [e for i, e in enumerate(edges) if i not in removed]
            forest = _components(len(parents), kept)
            terms[forest] = terms.get(forest, 0) + (-1) ** (k + 1)
    return AlgebraElement(terms)


def counit(x: Union[Tree, Forest, AlgebraElement]) -> Scalar:
    return _as_element(x)[EMPTY]


# convolution powers of the identity


@cache
def _id_integer_power_tree(m: int, tree: Tree) -> AlgebraElement:
    if m == 0:
        return AlgebraElement.zero()
    if m < 0:
        return apply_linear(lambda f: _id_integer_power_forest(-m, f), _antipode_tree(tree))
    if m == 1:
        return AlgebraElement.of(tree)
    # Id^m = μ∘(Id^{m-1} ⊗ Id)∘Δ
    total: Dict[Forest, Scalar] = {}
    for (pruned, trunk), coeff in _coproduct_tree(tree).items():
        for forest, c in _id_integer_power_forest(m - 1, pruned).terms.items():
            product = forest * trunk
            total[product] = total.get(product, 0) + coeff * c
    return AlgebraElement(total)


@cache
def _id_integer_power_forest(m: int, forest: Forest) -> AlgebraElement:
    result = AlgebraElement.unit()
    for tree in forest.trees:
        result = multiply(result, _id_integer_power_tree(m, tree))
    return result


@cache
def _id_power_tree(q: Fraction, tree: Tree) -> AlgebraElement:
    m, n = q.numerator, q.denominator
    if n == 1:
        return _id_integer_power_tree(m, tree)
    # φ(τ) = (1/n)[Id^m(τ) − Σ_{k=2}^{n} C(n,k) μ^{(k−1)}∘φ^{⊗k}∘δ^{(k−1)}(τ)]
    total = _id_integer_power_tree(m, tree)
    forest = Forest((tree,))
    for k in range(2, min(n, tree.size) + 1):
        total = total - _iterated_product(q, k, forest).scale(comb(n, k))
    return total.scale(Fraction(1, n))


@cache
def _id_power_forest(q: Fraction, forest: Forest) -> AlgebraElement:
    result = AlgebraElement.unit()
    for tree in forest.trees:
        result = multiply(result, _id_power_tree(q, tree))
    return result


@cache
def _iterated_product(q: Fraction, k: int, forest: Forest) -> AlgebraElement:
    """μ^{(k−1)}∘φ^{⊗k}∘δ^{(k−1)}(forest) with φ = Id^q."""
    if k == 1:
        return _id_power_forest(q, forest)
    total: Dict[Forest, Scalar] = {}
    for (pruned, trunk), coeff in _reduced_coproduct_forest(forest).items():
        left = _iterated_product(q, k - 1, pruned)
        if not left:
            continue
        product = multiply(left, _id_power_forest(q, trunk))
        for f, c in product.terms.items():
            total[f] = total.get(f, 0) + coeff * c
    return AlgebraElement(total)


def id_power(q: Union[int, Fraction, str], x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    """Id^q, the multiplicative map with (Id^q)^n = Id^m for q = m/n."""
    q = Fraction(q)
    return apply_linear(lambda f: _id_power_forest(q, f), x)


def id_sqrt(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    return id_power(Fraction(1, 2), x)


def dilation(q: Union[int, Fraction, str]) -> Callable[[Union[Tree, Forest, AlgebraElement]], AlgebraElement]:
    """The map x ↦ Id^q(x); Id^k∘Id^l = Id^{kl}."""
    q = Fraction(q)
    return lambda x: id_power(q, x)


def convolve_maps(
    left: Callable[[Forest], AlgebraElement],
    right: Callable[[Forest], AlgebraElement],
    x: Union[Tree, Forest, AlgebraElement],
) -> AlgebraElement:
    """(left ⋆ right)(x) = μ∘(left ⊗ right)∘Δ(x)."""
    return coproduct(_as_element(x)).contract(left, right)


@cache
def _eulerian_product(k: int, forest: Forest) -> AlgebraElement:
    if k == 1:
        return AlgebraElement._raw({forest: 1})
    total: Dict[Forest, Scalar] = {}
    for (pruned, trunk), coeff in _reduced_coproduct_forest(forest).items():
        for f, c in _eulerian_product(k - 1, pruned).terms.items():
            product = f * trunk
            total[product] = total.get(product, 0) + coeff * c
    return AlgebraElement(total)


@cache
def eulerian_idempotent(tree: Tree) -> AlgebraElement:
    """𝔢(τ) = log(Id)(τ) = Σ_k (−1)^{k+1}/k · μ^{(k−1)}δ^{(k−1)}(τ)."""
    total = AlgebraElement.zero()
    forest = Forest((tree,))
    for k in range(1, tree.size + 1):
        total = total + _eulerian_product(k, forest).scale(Fraction((-1) ** (k + 1), k))
    return total


# symmetric / antisymmetric components


@cache
def _symmetric_square(tree: Tree) -> AlgebraElement:
    """M(τ) = μ∘(S̄⊗Id)∘Δ(τ); M is multiplicative."""
    total: Dict[Forest, Scalar] = {}
    for (pruned, trunk), coeff in _coproduct_tree(tree).items():
        sign = _sign(pruned)
        for forest, c in _antipode_forest(pruned).terms.items():
            product = forest * trunk
            total[product] = total.get(product, 0) + sign * coeff * c
    return AlgebraElement(total)


_symmetric_square_forest = extend(_symmetric_square)


def symmetric_square(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    return apply_linear(_symmetric_square_forest, x)


@cache
def _tau_minus_tree(tree: Tree) -> AlgebraElement:
    # φ(τ) = ½[M(τ) − φ(μ∘δ(τ))], φ multiplicative
    total: Dict[Forest, Scalar] = dict(_symmetric_square(tree).terms)
    for (pruned, trunk), coeff in _reduced_coproduct_forest(Forest((tree,))).items():
        product = multiply(_tau_minus_forest(pruned), _tau_minus_forest(trunk))
        for f, c in product.terms.items():
            total[f] = total.get(f, 0) - coeff * c
    return AlgebraElement(total).scale(Fraction(1, 2))


_tau_minus_forest = extend(_tau_minus_tree)


def tau_minus(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    """τ⁻ = μ∘(S̄⊗Id)∘Δ∘Id^{1/2}(τ), extended multiplicatively."""
    return apply_linear(_tau_minus_forest, x)


def tau_minus_direct(tree: Tree) -> AlgebraElement:
    """τ⁻ from its defining composition, without the recurrence."""
    return symmetric_square(id_sqrt(tree))


@cache
def _tau_plus_tree(tree: Tree) -> AlgebraElement:
    # (·)⁻∘S = (−1)^{|·|}(·)⁻ since every ψ⁻ is an odd character
    total: Dict[Forest, Scalar] = {}
    for (pruned, trunk), coeff in _coproduct_tree(tree).items():
        sign = _sign(trunk)
        for f, c in _tau_minus_forest(trunk).terms.items():
            product = pruned * f
            total[product] = total.get(product, 0) + sign * coeff * c
    return AlgebraElement(total)


_tau_plus_forest = extend(_tau_plus_tree)


def tau_plus(x: Union[Tree, Forest, AlgebraElement]) -> AlgebraElement:
    """τ⁺ = μ∘(Id ⊗ (·)⁻∘S)∘Δ(τ), extended multiplicatively."""
    return apply_linear(_tau_plus_forest, x)


def tau_plus_direct(tree: Tree) -> AlgebraElement:
    """τ⁺ from the literal composition, including odd degrees."""
    minus_of_antipode = lambda f: tau_minus(_antipode_forest(f))
    return convolve_maps(_identity, minus_of_antipode, tree)


@cache
def _tau_tilde_tree(tree: Tree) -> AlgebraElement:
    total: Dict[Forest, Scalar] = {}
    for (pruned, trunk), coeff in _coproduct_tree(tree).items():
        product = pruned * trunk
        total[product] = total.get(product, 0) + _sign(trunk) * coeff
    return AlgebraElement(total)


def tau_tilde(tree: Tree) -> AlgebraElement:
    """τ̃ = μ∘(Id ⊗ Inv)∘Δ(τ) with Inv(x) = (−1)^{|x|}x."""
    return _tau_tilde_tree(tree)


# weights


def weight(x: AlgebraElement) -> int:
    """Total node count over the distinct forests of ``x``."""
    return sum(f.size for f in x.terms)


def reduce_small_trees(x: AlgebraElement, n: int) -> AlgebraElement:
    """Replace every tree factor with |τ| ≤ n by the scalar 1/τ!."""
    total: Dict[Forest, Scalar] = {}
    for forest, coeff in x.terms.items():
        kept = []
        value = coeff
        for tree in forest.trees:
            if tree.size <= n:
                value = value * Fraction(1, tree.factorial)
            else:
                kept.append(tree)
        reduced = Forest._sorted(tuple(kept))
        total[reduced] = total.get(reduced, 0) + value
    return AlgebraElement(total)


def reduced_weight(x: AlgebraElement, n: int) -> int:
    return weight(reduce_small_trees(x, n))


def dot_reduce(x: AlgebraElement) -> AlgebraElement:
    """Display form with every • factor suppressed."""
    total: Dict[Forest, Scalar] = {}
    for forest, coeff in x.terms.items():
        kept = tuple(t for t in forest.trees if t is not DOT)
        reduced = Forest._sorted(kept) if kept else Forest((DOT,))
        total[reduced] = total.get(reduced, 0) + coeff
    return AlgebraElement(total)


OPERATIONS: Dict[str, Callable[[Tree], Union[AlgebraElement, TensorElement]]] = {
    "coproduct": coproduct,
    "reduced": reduced_coproduct,
    "antipode": antipode,
    "idsqrt": id_sqrt,
    "minus": tau_minus,
    "plus": tau_plus,
    "tilde": tau_tilde,
    "eulerian": eulerian_idempotent,
}


def example_operations() -> None:
    """Prints every Hopf map of one tree"""
    import argparse

    from .tree import parse_tree

    parser = argparse.ArgumentParser(description="Example Hopf algebra operations")
    parser.add_argument("-t", "--tree", type=str, default="(()())", help="tree encoding")
    parser.add_argument("-r", "--reduced", action="store_true", help="suppress bullet factors")
    parser.add_argument("-d", "--debug", action="store_true")
    args = parser.parse_args()

    if args.debug:
        logger.setLevel(logging.DEBUG)

    tree = parse_tree(args.tree)
    for name, operation in OPERATIONS.items():
        result = operation(tree)
        if args.reduced and isinstance(result, AlgebraElement):
            result = dot_reduce(result)
        print(f"=== {name} ===")
        print("\n".join(result.to_lines()) or "0")


if __name__ == "__main__":
    example_operations()
