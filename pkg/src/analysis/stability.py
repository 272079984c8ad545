"""Stability functions, stability domains and order stars.

R(z) = det(I − zA + z·1bᵀ) / det(I − zA) is extracted exactly with sympy's
fraction-free determinant; everything that touches the complex plane after
that (roots, rasters) is float.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..algebra.character import Character
from ..algebra.scalar import Scalar, format_scalar, from_sympy, is_exact, is_zero, radicand, to_sympy
from ..algebra.tree import tall_tree
from ..config.settings import settings
from ..errors import RootFindingFailure
from ..schemes.tableau import ButcherTableau

logger = logging.getLogger(__name__)

Z = sympy.Symbol("z")

Poly = Tuple[Scalar, ...]


def _trim(coeffs: Sequence[Scalar]) -> Poly:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def _poly_from_expr(expr: sympy.Expr, d: Optional[int]) -> Poly:
    poly = sympy.Poly(sympy.expand(expr), Z)
    return _trim(from_sympy(c, d) for c in reversed(poly.all_coeffs()))


def _poly_to_expr(coeffs: Poly) -> sympy.Expr:
    return sum((to_sympy(c) * Z**k for k, c in enumerate(coeffs)), sympy.Integer(0))


def _float_coeffs(coeffs: Poly) -> np.ndarray:
    """Highest degree first, as numpy.polyval expects."""
    return np.array([float(c) for c in reversed(coeffs)])


@dataclass(frozen=True)
class StabilityFunction:
    """R = P/Q with coefficients stored lowest degree first; P(0) = Q(0) = 1."""

    numerator: Poly
    denominator: Poly = (1,)
    name: str = ""
    radicand: Optional[int] = field(default=None, compare=False)

    @property
    def explicit(self) -> bool:
        return len(self.denominator) == 1

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.numerator + self.denominator)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        num = np.polyval(_float_coeffs(self.numerator), z)
        den = np.polyval(_float_coeffs(self.denominator), z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return num / den

    def to_sympy(self) -> sympy.Expr:
        return _poly_to_expr(self.numerator) / _poly_to_expr(self.denominator)

    @classmethod
    def from_sympy(cls, expr: sympy.Expr, name: str = "", d: Optional[int] = None) -> "StabilityFunction":
        num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
        scale = den.subs(Z, 0)
        return cls(
            _poly_from_expr(num / scale, d), _poly_from_expr(den / scale, d), name, d
        )

    def reflected(self) -> "StabilityFunction":
        """z ↦ R(−z)."""
        flip = lambda p: tuple(c if k % 2 == 0 else -c for k, c in enumerate(p))
        return StabilityFunction(flip(self.numerator), flip(self.denominator), self.name, self.radicand)

    def to_string(self) -> str:
        num = _format_poly(self.numerator)
        if self.explicit:
            return f"R(z) = {num}"
        return f"R(z) = ({num}) / ({_format_poly(self.denominator)})"


def _format_poly(coeffs: Poly) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if is_zero(c):
            continue
        text = format_scalar(c)
        if k == 0:
            parts.append(text)
        elif text == "1":
            parts.append("z" if k == 1 else f"z^{k}")
        else:
            parts.append(f"{text}*z" if k == 1 else f"{text}*z^{k}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def stability_function(T: ButcherTableau) -> StabilityFunction:
    s = T.stages
    d = radicand(list(T.b) + [x for row in T.A for x in row])
    A = sympy.Matrix(s, s, lambda i, j: to_sympy(T.A[i][j]))
    b = sympy.Matrix(1, s, lambda _, j: to_sympy(T.b[j]))
    ones = sympy.ones(s, 1)
    pencil = sympy.eye(s) - Z * A
    P = (pencil + Z * ones * b).det(method="bareiss")
    Q = pencil.det(method="bareiss")
    R = StabilityFunction(_poly_from_expr(P, d), _poly_from_expr(Q, d), T.name, d)
    logger.debug(f"stability function of {T.name}: {R.to_string()}")
    return R


def taylor_coefficients(R: StabilityFunction, n: int) -> List[Scalar]:
    """First n+1 Taylor coefficients of P/Q by series division."""
    P, Q = R.numerator, R.denominator
    coeffs: List[Scalar] = []
    for k in range(n + 1):
        value = P[k] if k < len(P) else 0
        for j in range(1, min(k, len(Q) - 1) + 1):
            value = value - Q[j] * coeffs[k - j]
        coeffs.append(value / Q[0])
    return coeffs


def char_stability_check(psi: Character, R: StabilityFunction, n: int, tol: Optional[float] = None) -> bool:
    """The zⁿ coefficient of R equals ψ on the n-node chain.

    On y' = λy every elementary differential except the chain's vanishes.
    """
    coefficient = taylor_coefficients(R, n)[n]
    value = psi(tall_tree(n))
    if psi.exact and R.exact and tol is None:
        return coefficient == value
    tol = settings.float_tol if tol is None else tol
    return abs(float(coefficient) - float(value)) <= tol


def composed_stability(R: StabilityFunction) -> StabilityFunction:
    """R̃(z) = R(z)/R(−z), the stability function of Ψ∘Ψ*."""
    expr = R.to_sympy() / R.reflected().to_sympy()
    composed = StabilityFunction.from_sympy(expr, f"{R.name}.{R.name}*", R.radicand)
    logger.debug(f"composed stability: {composed.to_string()}")
    return composed


class AStability(str, Enum):
    STABLE = "A-stable"
    UNSTABLE = "not A-stable"
    MARGINAL = "marginal"

    def __bool__(self) -> bool:
        return self is AStability.STABLE


def polynomial_roots(coeffs: Poly) -> np.ndarray:
    """Roots of a polynomial given lowest degree first, residual-checked."""
    coeffs = _trim(coeffs)
    if len(coeffs) <= 1:
        return np.array([], dtype=complex)
    high_first = _float_coeffs(coeffs)
    roots = np.roots(high_first)
    norm = np.abs(high_first).sum()
    degree = len(coeffs) - 1
    for k, root in enumerate(roots):
        scale = norm * max(1.0, abs(root)) ** degree
        residual = abs(np.polyval(high_first, root))
        if residual > settings.root_residual * scale:
            # a couple of Newton steps polish clustered roots
            derivative = np.polyder(high_first)
            for _ in range(5):
                root = root - np.polyval(high_first, root) / np.polyval(derivative, root)
            residual = abs(np.polyval(high_first, root))
            if residual > settings.root_residual * scale:
                raise RootFindingFailure(f"root {root} of degree-{degree} polynomial has residual {residual:.3e}")
            roots[k] = root
    return roots


def a_stable_symmetric_component(T: ButcherTableau, margin: Optional[float] = None) -> AStability:
    """Ψ∘Ψ* is A-stable iff every zero of P has negative real part."""
    if not T.explicit:
        raise ValueError(f"{T.name}: the A-stability criterion needs an explicit tableau")
    margin = settings.a_stability_margin if margin is None else margin
    R = stability_function(T)
    roots = polynomial_roots(R.numerator)
    if not len(roots):
        return AStability.STABLE
    worst = float(np.max(roots.real))
    if worst < -margin:
        verdict = AStability.STABLE
    elif worst > margin:
        verdict = AStability.UNSTABLE
    else:
        verdict = AStability.MARGINAL
        logger.warning(f"{T.name}: zero of P within {margin} of the imaginary axis")
    logger.info(f"{T.name}: symmetric component is {verdict.value} (max Re root {worst:.6g})")
    return verdict


def real_stability_interval(R: StabilityFunction) -> float:
    """Largest r with |R(x)| ≤ 1 on [−r, 0]; inf when unbounded."""
    P = _float_coeffs(R.numerator)
    Q = _float_coeffs(R.denominator)
    crossings = np.concatenate([np.roots(np.polysub(P, Q)), np.roots(np.polyadd(P, Q))])
    candidates = sorted(
        (float(r.real) for r in crossings if abs(r.imag) < 1e-9 and r.real < -1e-12),
        reverse=True,
    )
    for x in candidates:
        probe = x - 1e-7 * max(1.0, abs(x))
        if abs(R(probe)) > 1:
            return -x
    return math.inf


# rasters


@dataclass
class RasterGrid:
    re_range: Tuple[float, float]
    im_range: Tuple[float, float]
    resolution: int
    values: Optional[np.ndarray] = None
    kind: str = "domain"
    scheme: str = ""

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("raster resolution must be at least 2")

    @classmethod
    def default(cls) -> "RasterGrid":
        return cls(tuple(settings.raster_re), tuple(settings.raster_im), settings.raster_resolution)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Real parts left to right, imaginary parts top (max) to bottom."""
        re = np.linspace(*self.re_range, self.resolution)
        im = np.linspace(self.im_range[1], self.im_range[0], self.resolution)
        return re, im

    def points(self) -> np.ndarray:
        re, im = self.axes()
        X, Y = np.meshgrid(re, im)
        return X + 1j * Y

    def membership(self) -> np.ndarray:
        if self.values is None:
            raise ValueError("raster has not been computed")
        if self.kind == "domain":
            return self.values < 1
        return self.values > 0


def _rasterize(fn, grid: RasterGrid, kind: str, scheme: str, threads: Optional[int]) -> RasterGrid:
    points = grid.points()
    with ThreadPoolExecutor(max_workers=threads or settings.threads) as pool:
        rows = list(pool.map(fn, points))
    values = np.vstack(rows)
    poles = ~np.isfinite(values)
    if poles.any():
        logger.warning(f"{scheme}: {int(poles.sum())} raster samples hit a pole")
        values[poles] = np.inf
    return RasterGrid(grid.re_range, grid.im_range, grid.resolution, values, kind, scheme)


def raster_domain(R: StabilityFunction, grid: Optional[RasterGrid] = None, threads: Optional[int] = None) -> RasterGrid:
    """|R(z)| on the grid; the stability domain is where it is < 1."""
    grid = grid or RasterGrid.default()
    return _rasterize(lambda row: np.abs(R(row)), grid, "domain", R.name, threads)


def raster_order_star(R: StabilityFunction, grid: Optional[RasterGrid] = None, threads: Optional[int] = None) -> RasterGrid:
    """|R(z)| − |e^z| on the grid; the order star is where it is > 0."""
    grid = grid or RasterGrid.default()
    return _rasterize(lambda row: np.abs(R(row)) - np.abs(np.exp(row)), grid, "star", R.name, threads)
