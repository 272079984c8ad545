"""Streaming observers: Poincaré sections and Hamiltonian error statistics."""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..config.settings import settings
from .problems import IvpProblem

logger = logging.getLogger(__name__)

Vector = np.ndarray


@dataclass(frozen=True)
class SectionCondition:
    """y[coordinate] = 0 with y[guard] > 0 and f(y)[coordinate] > 0."""

    coordinate: int = 1
    guard: int = 0
    # columns written per crossing after t
    columns: Tuple[int, ...] = (0, 2, 3, 5)

    def accepts(self, y: Vector, dy: Vector) -> bool:
        return y[self.guard] > 0 and dy[self.coordinate] > 0


def _hermite(s: float, h: float, y0: Vector, f0: Vector, y1: Vector, f1: Vector) -> Vector:
    s2, s3 = s * s, s * s * s
    return (
        (2 * s3 - 3 * s2 + 1) * y0
        + (s3 - 2 * s2 + s) * h * f0
        + (-2 * s3 + 3 * s2) * y1
        + (s3 - s2) * h * f1
    )


class PoincareSection:
    """Collects section crossings from a stream of (t, y) updates."""

    def __init__(
        self,
        rhs: Callable[[Vector], Vector],
        condition: Optional[SectionCondition] = None,
        mode: str = "hermite",
    ):
        if mode not in ("hermite", "linear"):
            raise ValueError(f"interpolation mode must be 'hermite' or 'linear', got {mode!r}")
        self.rhs = rhs
        self.condition = condition or SectionCondition()
        self.mode = mode
        self.points: List[Tuple[float, Vector]] = []
        self._previous: Optional[Tuple[float, Vector]] = None

    def __len__(self) -> int:
        return len(self.points)

    def update(self, t: float, y: Vector) -> None:
        i = self.condition.coordinate
        if self._previous is None:
            if y[i] == 0 and self.condition.accepts(y, self.rhs(y)):
                self.points.append((t, np.array(y, copy=True)))
            self._previous = (t, np.array(y, copy=True))
            return
        t0, y0 = self._previous
        g0, g1 = y0[i], y[i]
        if g0 != 0 and (g0 < 0) != (g1 < 0):
            crossing = self._locate(t0, y0, t, y)
            if crossing is not None:
                self.points.append(crossing)
        self._previous = (t, np.array(y, copy=True))

    def _locate(self, t0: float, y0: Vector, t1: float, y1: Vector) -> Optional[Tuple[float, Vector]]:
        i = self.condition.coordinate
        h = t1 - t0
        if self.mode == "linear":
            s = y0[i] / (y0[i] - y1[i])
            state = y0 + s * (y1 - y0)
        else:
            f0, f1 = self.rhs(y0), self.rhs(y1)
            s = brentq(lambda u: _hermite(u, h, y0, f0, y1, f1)[i], 0.0, 1.0, xtol=1e-15)
            state = _hermite(s, h, y0, f0, y1, f1)
        if not self.condition.accepts(state, self.rhs(state)):
            return None
        return t0 + s * h, state

    def rows(self) -> List[List[float]]:
        cols = self.condition.columns
        return [[t] + [float(y[c]) for c in cols] for t, y in self.points]


class HamiltonianMAE:
    """Mean of |H(yₙ) − H(y₀)| over accepted steps, computed online."""

    def __init__(self, hamiltonian: Callable[[Vector], float]):
        self.hamiltonian = hamiltonian
        self.reference: Optional[float] = None
        self.total = 0.0
        self.count = 0

    def update(self, t: float, y: Vector) -> None:
        value = self.hamiltonian(y)
        if self.reference is None:
            self.reference = value
            return
        self.total += abs(value - self.reference)
        self.count += 1

    @property
    def value(self) -> float:
        return self.total / self.count if self.count else 0.0


class HamiltonianDrift:
    """Online least-squares slope of H(yₙ) − H(y₀) against t."""

    def __init__(self, hamiltonian: Callable[[Vector], float]):
        self.hamiltonian = hamiltonian
        self.reference: Optional[float] = None
        self.n = 0
        self.st = self.se = self.stt = self.ste = 0.0

    def update(self, t: float, y: Vector) -> None:
        value = self.hamiltonian(y)
        if self.reference is None:
            self.reference = value
        e = value - self.reference
        self.n += 1
        self.st += t
        self.se += e
        self.stt += t * t
        self.ste += t * e

    @property
    def slope(self) -> float:
        denominator = self.n * self.stt - self.st * self.st
        if self.n < 2 or denominator == 0:
            return 0.0
        return (self.n * self.ste - self.st * self.se) / denominator


@dataclass
class ReferenceSection:
    times: np.ndarray
    states: np.ndarray
    hamiltonian_error: float = field(default=math.nan)

    @property
    def count(self) -> int:
        return len(self.times)


def reference_section(
    problem: IvpProblem,
    t_end: float,
    condition: Optional[SectionCondition] = None,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> ReferenceSection:
    """Section crossings of a DOP853 run, including t = 0 when it lies on the section."""
    condition = condition or SectionCondition()
    i = condition.coordinate
    y0 = problem.initial_state()

    def event(t, y):
        return y[i]

    # f(y)[coordinate] > 0 at a zero of y[coordinate] means an upward crossing
    event.direction = 1

    solution = solve_ivp(
        lambda t, y: problem.rhs(y),
        (0.0, t_end),
        y0,
        method="DOP853",
        events=event,
        rtol=rtol or settings.reference_rtol,
        atol=atol or settings.reference_atol,
    )
    if not solution.success:
        raise RuntimeError(f"reference run failed: {solution.message}")
    times, states = solution.t_events[0], solution.y_events[0]
    # a start on the section is reported by the event finder at t = 0; it is added back below
    keep = [k for k in range(len(times)) if states[k][condition.guard] > 0 and times[k] > 1e-12 * t_end]
    times, states = times[keep], states[keep]
    if y0[i] == 0 and condition.accepts(y0, problem.rhs(y0)):
        times = np.concatenate([[0.0], times])
        states = np.vstack([y0[None, :], states]) if len(states) else y0[None, :]
    error = math.nan
    if problem.hamiltonian is not None:
        error = abs(problem.hamiltonian(solution.y[:, -1]) - problem.hamiltonian(y0))
    logger.info(f"reference section on {problem.name} to t={t_end}: {len(times)} points")
    return ReferenceSection(times, states, error)


def section_count_ratio(points: Sequence, reference: ReferenceSection) -> float:
    return len(points) / reference.count if reference.count else math.inf
