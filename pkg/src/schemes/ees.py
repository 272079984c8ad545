"""Explicit and effectively symmetric (EES) schemes.

Order conditions come in three flavours per degree i:

* ``C(i)`` : ψ(τ) = 1/τ!            (classical order)
* ``EC(i)``: ψ(τ⁺) = 0, τ⁺ ≠ 0      (antisymmetric order)
* ``SC(i)``: ψψ̄(τ) = ψ(τ̃) = 0, τ̃ ≠ 0

EES(2,5;x) and EES(2,7;x) are closed-form one-parameter families. Their
tableaux are built in exact arithmetic and checked against the condition
sets before they are returned.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..algebra.character import Character
from ..algebra.hopf import AlgebraElement, reduced_weight, tau_plus, tau_tilde
from ..algebra.scalar import QuadExt, Scalar, format_scalar, is_zero
from ..algebra.tree import Tree, enumerate_trees, trees_up_to
from ..config.settings import settings
from ..errors import (
    FormulaInconsistency,
    MixedVariantError,
    PoleInBracket,
    PoleParameter,
    TruncationExceeded,
)
from .tableau import ButcherTableau, elementary_weights, stage_weights

logger = logging.getLogger(__name__)


class ConditionKind(str, Enum):
    C = "C"
    EC = "EC"
    SC = "SC"


@dataclass(frozen=True)
class ConditionItem:
    tree: Tree
    target: AlgebraElement
    rhs: Scalar


@dataclass(frozen=True)
class ConditionSet:
    kind: ConditionKind
    degree: int
    items: Tuple[ConditionItem, ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@cache
def condition_set(kind: ConditionKind, i: int) -> ConditionSet:
    kind = ConditionKind(kind)
    if not 1 <= i <= 10:
        raise ValueError(f"condition degree must lie in 1..10, got {i}")
    items = []
    for tree in enumerate_trees(i):
        if kind is ConditionKind.C:
            items.append(ConditionItem(tree, AlgebraElement.of(tree), Fraction(1, tree.factorial)))
            continue
        target = tau_plus(tree) if kind is ConditionKind.EC else tau_tilde(tree)
        if target:
            items.append(ConditionItem(tree, target, Fraction(0)))
    logger.debug(f"{kind.value}({i}): {len(items)} conditions")
    return ConditionSet(kind, i, tuple(items))


def condition_sets(kind: ConditionKind, degrees: Sequence[int]) -> List[ConditionSet]:
    return [condition_set(kind, i) for i in degrees]


def residuals(psi: Character, conditions: ConditionSet) -> List[Scalar]:
    """ψ(target) − rhs for every item, in canonical tree order."""
    if psi.truncation < conditions.degree:
        raise TruncationExceeded(conditions.degree, psi.truncation)
    return [psi(item.target) - item.rhs for item in conditions.items]


def satisfies(psi: Character, conditions: ConditionSet, tol: Optional[float] = None) -> bool:
    values = residuals(psi, conditions)
    if psi.exact and tol is None:
        return all(is_zero(v) for v in values)
    tol = settings.float_tol if tol is None else tol
    return all(abs(float(v)) <= tol for v in values)


def nonzero_counts(kind: ConditionKind, max_degree: int) -> List[int]:
    """Cumulative numbers of non-trivial conditions for p = 1..max_degree."""
    counts, total = [], 0
    for i in range(1, max_degree + 1):
        total += len(condition_set(kind, i))
        counts.append(total)
    return counts


def condition_weight(conditions: ConditionSet, n: int) -> int:
    return sum(reduced_weight(item.target, n) for item in conditions.items)


def weight_table(
    degrees: Sequence[int] = (2, 4, 6, 8), ns: Sequence[int] = (1, 2, 3)
) -> Dict[Tuple[str, int, int], Optional[int]]:
    """w(SC(i), n) and w(EC(i), n); cells with n ≥ i are left empty."""
    table: Dict[Tuple[str, int, int], Optional[int]] = {}
    for i in degrees:
        for n in ns:
            for kind in (ConditionKind.SC, ConditionKind.EC):
                table[(kind.value, i, n)] = (
                    condition_weight(condition_set(kind, i), n) if n < i else None
                )
    return table


# families


class EesFamily(str, Enum):
    EES25 = "2,5"
    EES27 = "2,7"

    @property
    def antisymmetric_order(self) -> int:
        return 5 if self is EesFamily.EES25 else 7

    @property
    def stages(self) -> int:
        return 3 if self is EesFamily.EES25 else 4


@dataclass(frozen=True)
class EesFamilySpec:
    family: EesFamily
    x: Scalar
    sign: str = "plus"

    def tableau(self) -> ButcherTableau:
        if self.family is EesFamily.EES25:
            return ees25_tableau(self.x)
        return ees27_tableau(self.x, self.sign)


def _one_like(x):
    return x * 0 + 1


def ees25_pole_factors(x) -> List:
    one = _one_like(x)
    return [x - one, one - 4 * x * x]


def ees25_coefficients(x) -> Tuple[List[List], List]:
    one = _one_like(x)
    half = one / 2
    a21 = (one + 2 * x) / (4 * (one - x))
    a31 = (4 * x - one) ** 2 / (4 * (x - one) * (one - 4 * x * x))
    a32 = (one - x) / (one - 4 * x * x)
    zero = x * 0
    A = [[zero, zero, zero], [a21, zero, zero], [a31, a32, zero]]
    b = [x, half, half - x]
    return A, b


def _root(x, sign: str):
    u = 1 if sign == "plus" else -1
    if isinstance(x, (int, Fraction, QuadExt)):
        return u * QuadExt.root(2)
    return u * math.sqrt(2)


def ees27_pole_factors(x, sign: str = "plus") -> List:
    r = _root(x, sign)
    one = _one_like(x)
    return [
        2 * x - one,
        2 * x * x - one,
        2 * x * x - 4 * x + one,
        one - r - 2 * x,
        2 - r - 2 * x,
        x - one,
    ]


def ees27_coefficients(x, sign: str = "plus") -> Tuple[List[List], List]:
    """Closed-form EES(2,7;x); ``sign`` selects the ±√2 branch."""
    r = _root(x, sign)
    one = _one_like(x)
    zero = x * 0
    alpha = (2 * x + r) / ((2 * x - one) * (-2 * x - r + one))
    beta = one / ((2 * x - one) * (one - r - 2 * x) * (2 - r - 2 * x))
    a21 = (-2 + r * (one - 2 * x)) / (4 * (x - one))
    a31 = (2 * x + r - 2) * (4 * x + r - 2) / (4 * r * (x - one)) * alpha
    a32 = (r - one) / 2 * alpha
    quartic = (
        -40 * x**4
        + (80 - 40 * r) * x**3
        - (88 - 60 * r) * x**2
        + (48 - 34 * r) * x
        + 7 * r
        - 10
    )
    a41 = (2 * x - r) * quartic / (4 * (x - one) * (2 * x * x - one)) * beta
    a42 = (2 - r) / 2 * x * (x - one) * (4 * x + r - 2) * beta
    a43 = (
        (2 - r)
        * (2 * x - r)
        * (2 + r - 2 * x)
        * (x - one)
        * (2 * x - one)
        / (4 * (2 * x * x - one) * (2 * x * x - 4 * x + one))
    )
    b = [
        x,
        (2 - r) / 2 - (one - r) * x,
        (one - r) * (x - one),
        (2 - r) / 2 - x,
    ]
    A = [
        [zero, zero, zero, zero],
        [a21, zero, zero, zero],
        [a31, a32, zero, zero],
        [a41, a42, a43, zero],
    ]
    return A, b


def _check_poles(x: Scalar, factors: Sequence, family: str) -> None:
    for factor in factors:
        if factor == 0:
            raise PoleParameter(f"x = {format_scalar(x)} is a pole of {family}")


def _validate(tableau: ButcherTableau, ec_degrees: Sequence[int]) -> None:
    psi = elementary_weights(tableau, max(ec_degrees))
    checks = condition_sets(ConditionKind.C, (1, 2)) + condition_sets(ConditionKind.EC, ec_degrees)
    for conditions in checks:
        values = residuals(psi, conditions)
        bad = [v for v in values if not is_zero(v)]
        if bad:
            raise FormulaInconsistency(
                f"{tableau.name}: {conditions.kind.value}({conditions.degree}) "
                f"residual {format_scalar(bad[0])} != 0"
            )
    logger.debug(f"{tableau.name} satisfies C(1..2) and EC({min(ec_degrees)}..{max(ec_degrees)})")


def _exact(x: Scalar) -> Scalar:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise MixedVariantError(f"EES tableaux need an exact parameter, got {x!r}")
    return x


def ees25_tableau(x: Scalar, validate: bool = True) -> ButcherTableau:
    x = _exact(x)
    _check_poles(x, ees25_pole_factors(x), "EES(2,5)")
    A, b = ees25_coefficients(x)
    tableau = ButcherTableau(tuple(map(tuple, A)), tuple(b), f"ees25:{format_scalar(x)}")
    if validate:
        _validate(tableau, range(3, 6))
    return tableau


def ees27_tableau(x: Scalar, sign: str = "plus", validate: bool = True) -> ButcherTableau:
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    x = _exact(x)
    _check_poles(x, ees27_pole_factors(x, sign), "EES(2,7)")
    A, b = ees27_coefficients(x, sign)
    prefix = "ees27" if sign == "plus" else "ees27-minus"
    tableau = ButcherTableau(tuple(map(tuple, A)), tuple(b), f"{prefix}:{format_scalar(x)}")
    if validate:
        _validate(tableau, range(3, 8))
    return tableau


# objective

_COEFFICIENTS: Dict[Tuple[EesFamily, str], Callable] = {
    (EesFamily.EES25, "plus"): lambda x: ees25_coefficients(x),
    (EesFamily.EES27, "plus"): lambda x: ees27_coefficients(x, "plus"),
    (EesFamily.EES27, "minus"): lambda x: ees27_coefficients(x, "minus"),
}


def family_poles(family: EesFamily, sign: str = "plus") -> List[float]:
    """Real poles of the closed-form family, as floats."""
    if family is EesFamily.EES25:
        return [-0.5, 0.5, 1.0]
    u = 1 if sign == "plus" else -1
    r = u * math.sqrt(2)
    candidates = [0.5, 1 / math.sqrt(2), -1 / math.sqrt(2), 1 + 1 / math.sqrt(2), 1 - 1 / math.sqrt(2)]
    candidates += [(1 - r) / 2, (2 - r) / 2, 1.0]
    return sorted(set(round(p, 15) for p in candidates))


def _compiled(target: AlgebraElement) -> List[Tuple[float, Tuple[Tree, ...]]]:
    return [(float(c), f.trees) for f, c in target.terms.items()]


def scan_objective(
    family: EesFamily,
    xs: np.ndarray,
    sign: str = "plus",
    ec_degree: Optional[int] = None,
) -> np.ndarray:
    """Σ_{|τ|=3}|ψₓ(τ) − 1/τ!| + Σ_{EC(m+2)}|ψₓ(τ⁺)|, vectorized over ``xs``."""
    family = EesFamily(family)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ec_degree = family.antisymmetric_order + 2 if ec_degree is None else ec_degree
    ec_items = condition_set(ConditionKind.EC, ec_degree).items
    max_degree = max([3] + [t.size for item in ec_items for f in item.target.terms for t in f.trees])
    A, b = _COEFFICIENTS[(family, sign)](xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = stage_weights(A, b, trees_up_to(max_degree))
        total = np.zeros_like(xs)
        for tree in enumerate_trees(3):
            total = total + np.abs(weights[tree] - 1 / tree.factorial)
        for item in ec_items:
            value = np.zeros_like(xs)
            for coeff, trees in _compiled(item.target):
                term = coeff
                for tree in trees:
                    term = term * weights[tree]
                value = value + term
            total = total + np.abs(value)
    for pole in family_poles(family, sign):
        total[np.abs(xs - pole) < 1e-12] = np.inf
    total[~np.isfinite(total)] = np.inf
    return total


def objective(family: EesFamily, x: float, sign: str = "plus", ec_degree: Optional[int] = None) -> float:
    return float(scan_objective(family, np.array([float(x)]), sign, ec_degree)[0])


@dataclass
class MinimizationResult:
    family: EesFamily
    x: float
    value: float
    grid: np.ndarray
    values: np.ndarray


def minimize_objective(
    family: EesFamily,
    bracket: Optional[Tuple[float, float]] = None,
    sign: str = "plus",
    ec_degree: Optional[int] = None,
    step: Optional[float] = None,
    tol: Optional[float] = None,
) -> MinimizationResult:
    """Grid scan followed by a bounded golden-section/Brent refinement."""
    family = EesFamily(family)
    lo, hi = bracket or settings.ees_bracket
    step = step or settings.ees_grid_step
    tol = tol or settings.ees_golden_tol
    poles = family_poles(family, sign)
    if any(abs(lo - p) < 1e-12 or abs(hi - p) < 1e-12 for p in poles):
        raise PoleInBracket(f"bracket ({lo}, {hi}) ends on a pole of {family.value}")
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    values = scan_objective(family, grid, sign, ec_degree)
    if not np.isfinite(values).any():
        raise PoleInBracket(f"objective is not finite anywhere on ({lo}, {hi})")
    k = int(np.argmin(values))
    a, c = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if any(a <= p <= c for p in poles):
        raise PoleInBracket(f"refinement bracket ({a}, {c}) contains a pole")
    result = minimize_scalar(
        lambda x: objective(family, x, sign, ec_degree),
        bounds=(a, c),
        method="bounded",
        options={"xatol": tol},
    )
    x_star = float(result.x) if result.fun <= values[k] else float(grid[k])
    value = min(float(result.fun), float(values[k]))
    logger.info(f"EES({family.value}) objective minimum {value:.3e} at x = {x_star:.6f}")
    return MinimizationResult(family, x_star, value, grid, values)
