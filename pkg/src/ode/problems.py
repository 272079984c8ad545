"""Benchmark initial value problems y' = f(y)."""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

logger = logging.getLogger(__name__)

Vector = np.ndarray


@dataclass(frozen=True)
class IvpProblem:
    name: str
    dimension: int
    rhs: Callable[[Vector], Vector]
    y0: Vector
    exact_solution: Optional[Callable[[float], Vector]] = None
    hamiltonian: Optional[Callable[[Vector], float]] = None
    parameters: Dict[str, float] = field(default_factory=dict)

    def initial_state(self) -> Vector:
        return np.array(self.y0, copy=True)


def inverse_square() -> IvpProblem:
    """Kepler problem on the unit circle: y = (q1, q2, p1, p2)."""

    def rhs(y: Vector) -> Vector:
        q, p = y[:2], y[2:]
        r3 = (q[0] * q[0] + q[1] * q[1]) ** 1.5
        return np.array([p[0], p[1], -q[0] / r3, -q[1] / r3])

    def exact(t: float) -> Vector:
        c, s = math.cos(t), math.sin(t)
        return np.array([c, s, -s, c])

    def hamiltonian(y: Vector) -> float:
        return 0.5 * (y[2] ** 2 + y[3] ** 2) - 1.0 / math.hypot(y[0], y[1])

    return IvpProblem("inverse-square", 4, rhs, np.array([1.0, 0.0, 0.0, 1.0]), exact, hamiltonian)


GALACTIC = dict(a=1.25, b=1.0, c=0.75, A=1.0, C=1.0, Omega=0.25, energy=2.0)


def galactic_initial_momentum(q1: float = 2.5, p3: float = 0.2, **constants) -> float:
    """Larger root p₂ of H(q1, 0, 0, 0, p₂, p3) = energy."""
    k = {**GALACTIC, **constants}
    # ½p₂² − Ωq₁p₂ + (½p₃² + A ln(C + q₁²/a²) − energy) = 0
    linear = -k["Omega"] * q1
    constant = 0.5 * p3 * p3 + k["A"] * math.log(k["C"] + q1 * q1 / k["a"] ** 2) - k["energy"]
    discriminant = linear * linear - 2.0 * constant
    return -linear + math.sqrt(discriminant)


def galactic(**constants) -> IvpProblem:
    """Star in a rotating triaxial logarithmic potential; y = (q1, q2, q3, p1, p2, p3).

    H = ½|p|² + A ln(C + q₁²/a² + q₂²/b² + q₃²/c²) + Ω(p₁q₂ − p₂q₁).
    """
    k = {**GALACTIC, **constants}
    a2, b2, c2 = k["a"] ** 2, k["b"] ** 2, k["c"] ** 2
    A, C, omega = k["A"], k["C"], k["Omega"]

    def rhs(y: Vector) -> Vector:
        q1, q2, q3, p1, p2, p3 = y
        D = C + q1 * q1 / a2 + q2 * q2 / b2 + q3 * q3 / c2
        return np.array(
            [
                p1 + omega * q2,
                p2 - omega * q1,
                p3,
                omega * p2 - 2 * A * q1 / (a2 * D),
                -omega * p1 - 2 * A * q2 / (b2 * D),
                -2 * A * q3 / (c2 * D),
            ]
        )

    def hamiltonian(y: Vector) -> float:
        q1, q2, q3, p1, p2, p3 = y
        D = C + q1 * q1 / a2 + q2 * q2 / b2 + q3 * q3 / c2
        return 0.5 * (p1 * p1 + p2 * p2 + p3 * p3) + A * math.log(D) + omega * (p1 * q2 - p2 * q1)

    p2 = galactic_initial_momentum(**constants)
    y0 = np.array([2.5, 0.0, 0.0, 0.0, p2, 0.2])
    logger.debug(f"galactic initial state {y0}, H = {hamiltonian(y0):.15f}")
    return IvpProblem("galactic", 6, rhs, y0, None, hamiltonian, k)


def linear_problem(lam: complex = -1.0, y0: complex = 1.0) -> IvpProblem:
    """Scalar y' = λy."""
    dtype = complex if isinstance(lam, complex) or isinstance(y0, complex) else float
    return IvpProblem(
        f"linear:{lam}",
        1,
        lambda y: lam * y,
        np.array([y0], dtype=dtype),
        lambda t: np.array([y0 * np.exp(lam * t)], dtype=dtype),
    )


PROBLEMS: Dict[str, Callable[[], IvpProblem]] = {
    "inverse-square": inverse_square,
    "galactic": galactic,
    "linear": linear_problem,
}
