"""Characters of the tree Hopf algebra truncated at a degree N.

A :class:`Character` stores ψ(τ) for every tree with |τ| ≤ N; values on
forests follow by multiplicativity and ψ(∅) = 1. Values are exact
(Fraction / QuadExt) by default; float characters exist for numerical scans
and compare with a tolerance.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from ..config.settings import settings
from ..errors import TruncationExceeded
from .hopf import (
    AlgebraElement,
    _antipode_tree,
    _coproduct_tree,
    _id_power_tree,
    eulerian_idempotent,
    iterated_coproduct,
    tau_minus,
    tau_plus,
)
from .scalar import Scalar, format_scalar, is_exact, parse_scalar
from .tree import Forest, Tree, enumerate_trees, format_tree, parse_tree, trees_up_to

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderResult:
    value: int
    lower_bound: bool = False

    def __str__(self) -> str:
        return f">= {self.value}" if self.lower_bound else str(self.value)


@dataclass(frozen=True)
class SEquivalence:
    equivalent: bool
    degree: int

    def __bool__(self) -> bool:
        return self.equivalent

    def __str__(self) -> str:
        if self.equivalent:
            return f"equivalent to degree {self.degree}"
        return f"differ at degree {self.degree}"


@dataclass(frozen=True)
class Character:
    values: Mapping[Tree, Scalar]
    truncation: int
    name: str = ""
    exact: bool = field(default=True, compare=False)

    @classmethod
    def from_function(
        cls, fn: Callable[[Tree], Scalar], truncation: int, name: str = ""
    ) -> "Character":
        values = {t: fn(t) for t in trees_up_to(truncation)}
        return cls.build(values, truncation, name)

    @classmethod
    def build(cls, values: Mapping[Tree, Scalar], truncation: int, name: str = "") -> "Character":
        exact = all(is_exact(v) for v in values.values())
        return cls(dict(values), truncation, name, exact)

    # evaluation

    def _tree(self, tree: Tree) -> Scalar:
        try:
            return self.values[tree]
        except KeyError:
            raise TruncationExceeded(tree.size, self.truncation) from None

    def forest_value(self, forest: Forest) -> Scalar:
        result: Scalar = 1
        for tree in forest.trees:
            result = result * self._tree(tree)
        return result

    def __call__(self, x: Union[Tree, Forest, AlgebraElement]) -> Scalar:
        if isinstance(x, Tree):
            return self._tree(x)
        if isinstance(x, Forest):
            return self.forest_value(x)
        total: Scalar = 0
        for forest, coeff in x.terms.items():
            c = coeff if self.exact else float(coeff)
            total = total + c * self.forest_value(forest)
        return total

    def trees(self, degree: Optional[int] = None) -> Iterable[Tree]:
        return trees_up_to(self.truncation if degree is None else degree)

    def restrict(self, degree: int) -> "Character":
        return Character.build(
            {t: v for t, v in self.values.items() if t.size <= degree}, degree, self.name
        )

    def _close(self, x: Scalar, y: Scalar, tol: Optional[float]) -> bool:
        if self.exact and is_exact(y) and tol is None:
            return x == y
        tol = settings.float_tol if tol is None else tol
        return abs(float(x) - float(y)) <= tol

    def equals(self, other: "Character", degree: Optional[int] = None, tol: Optional[float] = None) -> bool:
        degree = min(self.truncation, other.truncation) if degree is None else degree
        return all(self._close(self(t), other(t), tol) for t in trees_up_to(degree))

    def first_difference(self, other: "Character", tol: Optional[float] = None) -> Optional[int]:
        degree = min(self.truncation, other.truncation)
        for tree in trees_up_to(degree):
            if not self._close(self(tree), other(tree), tol):
                return tree.size
        return None

    def with_name(self, name: str) -> "Character":
        return Character(self.values, self.truncation, name, self.exact)

    def __mul__(self, other: "Character") -> "Character":
        return convolve(self, other)

    def to_json_dict(self) -> Dict:
        return {
            "truncation": self.truncation,
            "values": {format_tree(t): format_scalar(v) for t, v in self.sorted_items()},
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Character":
        truncation = int(data["truncation"])
        values = {parse_tree(k): parse_scalar(v) for k, v in data["values"].items()}
        missing = [t for t in trees_up_to(truncation) if t not in values]
        if missing:
            raise TruncationExceeded(missing[0].size, truncation)
        return cls.build(values, truncation)

    def sorted_items(self):
        return sorted(self.values.items(), key=lambda item: item[0].key)


def exact_flow(truncation: Optional[int] = None) -> Character:
    """The exact-solution character a(τ) = 1/τ!."""
    n = truncation or settings.degree
    return Character.from_function(lambda t: Fraction(1, t.factorial), n, "exact")


def counit(truncation: Optional[int] = None) -> Character:
    n = truncation or settings.degree
    return Character.from_function(lambda t: Fraction(0), n, "counit")


def random_character(
    truncation: int, rng: random.Random, max_numerator: int = 9, max_denominator: int = 9
) -> Character:
    def draw(_: Tree) -> Fraction:
        return Fraction(
            rng.randint(-max_numerator, max_numerator), rng.randint(1, max_denominator)
        )

    return Character.from_function(draw, truncation, "random")


def _common_truncation(*characters: Character) -> int:
    return min(c.truncation for c in characters)


# group structure


def convolve(psi1: Character, psi2: Character) -> Character:
    """(ψ₁ψ₂)(τ) = Σ ψ₁(P)ψ₂(R) over Δ(τ); ψ₁ is applied first."""
    n = _common_truncation(psi1, psi2)
    values = {}
    for tree in trees_up_to(n):
        total: Scalar = 0
        for (pruned, trunk), coeff in _coproduct_tree(tree).items():
            total = total + coeff * psi1.forest_value(pruned) * psi2.forest_value(trunk)
        values[tree] = total
    return Character.build(values, n)


def compose_with(psi: Character, tree_map: Callable[[Tree], AlgebraElement], name: str = "") -> Character:
    """The character τ ↦ ψ(tree_map(τ))."""
    return Character.build({t: psi(tree_map(t)) for t in trees_up_to(psi.truncation)}, psi.truncation, name)


def inverse(psi: Character) -> Character:
    """ψ^{-1} = ψ∘S."""
    return compose_with(psi, _antipode_tree, f"{psi.name}^-1")


def bar(psi: Character) -> Character:
    """ψ̄(τ) = (−1)^{|τ|}ψ(τ)."""
    values = {t: (-v if t.size % 2 else v) for t, v in psi.values.items()}
    return Character(values, psi.truncation, f"bar({psi.name})", psi.exact)


def adjoint(psi: Character) -> Character:
    """ψ*(τ) = (−1)^{|τ|}ψ(Sτ), the character of the adjoint method."""
    return bar(inverse(psi)).with_name(f"{psi.name}*")


def log_character(psi: Character) -> Character:
    """ψ∘𝔢 with 𝔢 = log(Id) the Eulerian idempotent."""
    return compose_with(psi, eulerian_idempotent, f"log({psi.name})")


# order statistics


def ord(psi: Character, tol: Optional[float] = None) -> OrderResult:
    """Largest n ≤ N with ψ(τ) = 1/τ! for every |τ| ≤ n."""
    for n in range(1, psi.truncation + 1):
        for tree in enumerate_trees(n):
            if not psi._close(psi(tree), Fraction(1, tree.factorial), tol):
                return OrderResult(n - 1)
    return OrderResult(psi.truncation, lower_bound=True)


def ord_plus(psi: Character, tol: Optional[float] = None) -> OrderResult:
    """Largest n ≤ N with ψ(τ⁺) = 0 for every |τ| ≤ n."""
    for n in range(1, psi.truncation + 1):
        for tree in enumerate_trees(n):
            if not psi._close(psi(tau_plus(tree)), 0, tol):
                return OrderResult(n - 1)
    return OrderResult(psi.truncation, lower_bound=True)


def is_odd(psi: Character, degree: Optional[int] = None, tol: Optional[float] = None) -> bool:
    """ψ̄ = ψ^{-1} up to ``degree``; odd characters are the symmetric methods."""
    degree = psi.truncation if degree is None else degree
    return bar(psi).equals(inverse(psi), degree, tol)


def is_even(psi: Character, degree: Optional[int] = None, tol: Optional[float] = None) -> bool:
    degree = psi.truncation if degree is None else degree
    return bar(psi).equals(psi, degree, tol)


# decompositions


def odd_even_decompose(psi: Character) -> Tuple[Character, Character]:
    """Return (ζ⁺, ζ⁻) with ψ = ζ⁺ζ⁻, ζ⁺ even and ζ⁻ odd.

    ζ⁺ is built degree by degree from ζ̄ = ζ⁺ζ^{-1}ζ⁺; then ζ⁻ = (ζ⁺)^{-1}ψ.
    """
    n = psi.truncation
    psi_inv = inverse(psi)
    plus: Dict[Tree, Scalar] = {}

    def plus_forest(forest: Forest) -> Scalar:
        result: Scalar = 1
        for tree in forest.trees:
            result = result * plus[tree]
        return result

    for tree in trees_up_to(n):
        size = tree.size
        rest: Scalar = 0
        for (left, middle, right), coeff in iterated_coproduct(tree).items():
            if size in (left.size, middle.size, right.size):
                continue
            rest = rest + coeff * plus_forest(left) * psi_inv.forest_value(middle) * plus_forest(right)
        value = (-psi(tree) if size % 2 else psi(tree)) - psi_inv(tree) - rest
        plus[tree] = value * Fraction(1, 2) if psi.exact else value / 2
        logger.debug(f"zeta+ {format_tree(tree)} = {plus[tree]}")

    zeta_plus = Character.build(plus, n, f"{psi.name}+")
    zeta_minus = convolve(inverse(zeta_plus), psi).with_name(f"{psi.name}-")
    return zeta_plus, zeta_minus


def decompose_via_tree_maps(psi: Character) -> Tuple[Character, Character]:
    """(ζ⁺, ζ⁻) as τ ↦ ψ(τ⁺) and τ ↦ ψ(τ⁻)."""
    return (
        compose_with(psi, tau_plus, f"{psi.name}+"),
        compose_with(psi, tau_minus, f"{psi.name}-"),
    )


def odd_even_decompose_right(psi: Character) -> Tuple[Character, Character]:
    """Return (odd, ζ⁺) with ψ = odd·ζ⁺ where odd = ζ⁺ζ⁻(ζ⁺)^{-1}."""
    zeta_plus, zeta_minus = odd_even_decompose(psi)
    odd = convolve(convolve(zeta_plus, zeta_minus), inverse(zeta_plus))
    return odd.with_name(f"{psi.name}-right"), zeta_plus


# powers


def char_power(psi: Character, q: Union[int, Fraction, str]) -> Character:
    """ψ^q = ψ∘Id^q."""
    q = Fraction(q)
    return compose_with(psi, lambda t: _id_power_tree(q, t), f"{psi.name}^{q}")


def scaled(psi: Character, q: Union[int, Fraction, str]) -> Character:
    """ψ_q(τ) = q^{−|τ|}ψ^q(τ)."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("scaled() requires q != 0")
    power = char_power(psi, q)
    values = {t: v * q ** (-t.size) for t, v in power.values.items()}
    return Character.build(values, psi.truncation, f"{psi.name}_{q}")


# S-equivalence


def s_equivalent(psi: Character, phi: Character, tol: Optional[float] = None) -> SEquivalence:
    """ψ ~ φ iff ψ(τ⁻) = φ(τ⁻) for every |τ| ≤ N."""
    n = _common_truncation(psi, phi)
    for tree in trees_up_to(n):
        minus = tau_minus(tree)
        if not psi._close(psi(minus), phi(minus), tol):
            return SEquivalence(False, tree.size)
    return SEquivalence(True, n)


def order_condition_residuals(psi: Character, degree: int) -> Dict[Tree, Scalar]:
    """OC(i): ψ(τ⁻) − a(τ⁻) for the trees of one degree."""
    flow = exact_flow(degree)
    residuals = {}
    for tree in enumerate_trees(degree):
        minus = tau_minus(tree)
        residuals[tree] = psi(minus) - flow(minus)
    return residuals
