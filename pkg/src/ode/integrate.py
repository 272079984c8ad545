"""Fixed-step Runge–Kutta integration.

Explicit tableaux evaluate their stages in order. Implicit ones solve the
stage equations by damped fixed-point iteration; there is no Newton solver.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Protocol, Sequence

import numpy as np

from ..config.settings import settings
from ..errors import ImplicitSolveDiverged
from ..schemes.tableau import ButcherTableau
from .problems import IvpProblem

logger = logging.getLogger(__name__)

Vector = np.ndarray

MAX_STEPS = 2**31


class Observer(Protocol):
    def update(self, t: float, y: Vector) -> None: ...


@dataclass
class Trajectory:
    """Uniform-step states; a streamed run keeps only the first and last rows."""

    times: np.ndarray
    states: np.ndarray
    h: float
    streamed: bool = False

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> Vector:
        return self.states[-1]


def _solve_stages(
    A: np.ndarray,
    f: Callable[[Vector], Vector],
    y: Vector,
    h: float,
    step_index: Optional[int],
) -> np.ndarray:
    s = A.shape[0]
    K = np.tile(f(y), (s, 1))
    tol = settings.implicit_tol
    damping = settings.implicit_damping
    update = np.inf
    for iteration in range(1, settings.implicit_max_iter + 1):
        new = np.array([f(y + h * (A[i] @ K)) for i in range(s)])
        delta = new - K
        update = float(np.max(np.abs(delta)))
        K = K + damping * delta
        if update <= tol * max(1.0, float(np.max(np.abs(K)))):
            return K
    raise ImplicitSolveDiverged(update, settings.implicit_max_iter, step_index)


def step(
    T: ButcherTableau,
    f: Callable[[Vector], Vector],
    y: Vector,
    h: float,
    step_index: Optional[int] = None,
) -> Vector:
    """One step y + h Σ bᵢkᵢ."""
    A, b, _ = T.arrays()
    if T.explicit:
        s = T.stages
        K = np.empty((s,) + np.shape(y), dtype=np.result_type(y, float))
        for i in range(s):
            K[i] = f(y + h * (A[i, :i] @ K[:i])) if i else f(y)
    else:
        K = _solve_stages(A, f, y, h, step_index)
    return y + h * (b @ K)


def _step_count(h: float, t_end: float, t0: float = 0.0) -> int:
    if h == 0:
        raise ValueError("step size must be non-zero")
    n = round((t_end - t0) / h)
    if n < 0 or n >= MAX_STEPS:
        raise ValueError(f"{n} steps of {h} do not reach t_end = {t_end}")
    return n


def integrate(
    T: ButcherTableau,
    problem: IvpProblem,
    y0: Optional[Vector] = None,
    h: float = 0.1,
    t_end: float = 1.0,
    t0: float = 0.0,
    observers: Sequence[Observer] = (),
    store: bool = True,
) -> Trajectory:
    """Integrate from t0 to t_end; observers see every accepted state including y0."""
    y = problem.initial_state() if y0 is None else np.array(y0, copy=True)
    n = _step_count(h, t_end, t0)
    dtype = np.result_type(y, float)
    if store:
        states = np.empty((n + 1,) + y.shape, dtype=dtype)
        states[0] = y
    for observer in observers:
        observer.update(t0, y)
    for k in range(1, n + 1):
        y = step(T, problem.rhs, y, h, k)
        t = t0 + k * h
        if store:
            states[k] = y
        for observer in observers:
            observer.update(t, y)
    logger.debug(f"{T.name} on {problem.name}: {n} steps of {h}")
    if store:
        return Trajectory(t0 + h * np.arange(n + 1), states, h)
    first = problem.initial_state() if y0 is None else np.asarray(y0)
    return Trajectory(np.array([t0, t0 + n * h]), np.array([first, y], dtype=dtype), h, streamed=True)


def reversal_error(
    T: ButcherTableau, problem: IvpProblem, y0: Optional[Vector] = None, h: float = 0.1, t_end: float = 10.0
) -> float:
    """‖y0 − Φ₋ₕᴺ Φₕᴺ(y0)‖ with N = t_end/h."""
    start = problem.initial_state() if y0 is None else np.asarray(y0)
    forward = integrate(T, problem, start, h, t_end, store=False).final
    backward = integrate(T, problem, forward, -h, 0.0, t0=t_end, store=False).final
    error = float(np.linalg.norm(backward - start))
    logger.info(f"{T.name}: reversal error {error:.4e} on {problem.name} (h={h}, t_end={t_end})")
    return error


def final_error(T: ButcherTableau, problem: IvpProblem, h: float, t_end: float) -> float:
    """Euclidean error at t_end against the exact solution."""
    if problem.exact_solution is None:
        raise ValueError(f"{problem.name} has no exact solution")
    final = integrate(T, problem, None, h, t_end, store=False).final
    return float(np.linalg.norm(final - problem.exact_solution(t_end)))


def convergence_order(
    T: ButcherTableau, problem: IvpProblem, hs: Iterable[float], t_end: float = 1.0
) -> float:
    """Least-squares slope of log(error) against log(h)."""
    hs = list(hs)
    errors = [final_error(T, problem, h, t_end) for h in hs]
    slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
    logger.debug(f"{T.name}: errors {errors} give slope {slope:.3f}")
    return float(slope)


def linear_powers(T: ButcherTableau, lam: complex, h: float, steps: int, y0: complex = 1.0) -> List[complex]:
    """Successive states of N steps on y' = λy."""
    y = np.array([y0], dtype=complex)
    out = [complex(y[0])]
    for k in range(steps):
        y = step(T, lambda v: lam * v, y, h, k + 1)
        out.append(complex(y[0]))
    return out
