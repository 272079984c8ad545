import math

import numpy as np
import pytest

from src.analysis.stability import stability_function
from src.errors import ImplicitSolveDiverged
from src.ode.integrate import (
    convergence_order,
    final_error,
    integrate,
    linear_powers,
    reversal_error,
    step,
)
from src.ode.poincare import (
    HamiltonianDrift,
    HamiltonianMAE,
    PoincareSection,
    SectionCondition,
    reference_section,
    section_count_ratio,
)
from src.ode.problems import galactic, galactic_initial_momentum, inverse_square, linear_problem
from src.schemes import library
from src.verify import galactic_run

# q2 = 0 upward with q1 > 0 on the 4-dimensional inverse-square state
KEPLER_SECTION = SectionCondition(coordinate=1, guard=0, columns=(0, 2, 3))


def test_inverse_square_problem():
    problem = inverse_square()
    np.testing.assert_allclose(problem.exact_solution(0.0), problem.initial_state())
    assert problem.hamiltonian(problem.initial_state()) == pytest.approx(-0.5)


def test_galactic_initial_state():
    problem = galactic()
    assert galactic_initial_momentum() == pytest.approx(1.6889, abs=1e-4)
    assert problem.hamiltonian(problem.initial_state()) == pytest.approx(2.0, abs=1e-13)
    assert problem.dimension == 6


def test_galactic_flow_conserves_energy(rk4):
    problem = galactic()
    mae = HamiltonianMAE(problem.hamiltonian)
    integrate(rk4, problem, None, 1e-3, 0.2, observers=[mae], store=False)
    assert mae.value < 1e-10


@pytest.mark.parametrize("name", ["euler", "rk4", "midpoint", "gauss2", "ees25-opt"])
def test_linear_steps_are_powers_of_r(name):
    T = library.get_scheme(name)
    lam, h, steps = complex(-1.0, 0.5), 0.1, 20
    states = linear_powers(T, lam, h, steps)
    exact = complex(stability_function(T)(h * lam)) ** steps
    assert abs(states[-1] - exact) <= 1e-12 * abs(exact)


@pytest.mark.parametrize("name,limit", [("midpoint", 1e-11), ("ees25-opt", 1e-5)])
def test_reversal_error(name, limit):
    assert reversal_error(library.get_scheme(name), inverse_square(), None, 0.1, 10.0) <= limit


@pytest.mark.slow
def test_reversal_payoff_of_ees27():
    problem = inverse_square()
    ees27 = reversal_error(library.get_scheme("ees27-simple"), problem, None, 0.1, 10.0)
    rk4 = reversal_error(library.classic_rk4(), problem, None, 0.1, 10.0)
    assert ees27 <= 5e-9
    assert ees27 <= 1e-3 * rk4


def test_midpoint_final_error(midpoint):
    error = final_error(midpoint, inverse_square(), 0.1, 10.0)
    assert 1.0063e-1 / 3 <= error <= 3 * 1.0063e-1


@pytest.mark.parametrize("name,order", [("rk4", 4), ("midpoint", 2), ("heun3", 3)])
def test_convergence_order(name, order):
    slope = convergence_order(library.get_scheme(name), inverse_square(), [0.1, 0.05, 0.025], 1.0)
    assert slope == pytest.approx(order, abs=0.3)


def test_final_error_needs_exact_solution(rk4):
    with pytest.raises(ValueError):
        final_error(rk4, galactic(), 0.1, 1.0)


def test_stored_and_streamed_runs_agree(rk4):
    problem = inverse_square()
    stored = integrate(rk4, problem, None, 0.1, 1.0)
    streamed = integrate(rk4, problem, None, 0.1, 1.0, store=False)
    assert len(stored) == 11 and stored.times[-1] == pytest.approx(1.0)
    assert streamed.streamed and len(streamed) == 2
    np.testing.assert_array_equal(stored.final, streamed.final)


@pytest.mark.parametrize("h,t_end", [(0.0, 1.0), (0.1, -1.0)])
def test_bad_step_counts(rk4, h, t_end):
    with pytest.raises(ValueError):
        integrate(rk4, inverse_square(), None, h, t_end)


def test_implicit_solver_divergence():
    problem = linear_problem(-1000.0)
    with pytest.raises(ImplicitSolveDiverged) as info:
        integrate(library.backward_euler(), problem, None, 0.1, 1.0)
    assert info.value.step_index == 1


def test_implicit_step_on_linear_problem(midpoint):
    y = step(midpoint, lambda v: -v, np.array([1.0]), 0.1)
    assert y[0] == pytest.approx((1 - 0.05) / (1 + 0.05), rel=1e-13)


@pytest.mark.parametrize("mode,tol", [("hermite", 1e-6), ("linear", 1e-4)])
def test_poincare_crossings(rk4, mode, tol):
    problem = inverse_square()
    section = PoincareSection(problem.rhs, KEPLER_SECTION, mode)
    integrate(rk4, problem, None, 0.01, 13.0, observers=[section], store=False)
    times = [t for t, _ in section.points]
    assert len(section) == 3
    np.testing.assert_allclose(times, [0.0, 2 * math.pi, 4 * math.pi], atol=tol)
    assert all(len(row) == 4 for row in section.rows())


def test_poincare_mode_validation():
    with pytest.raises(ValueError):
        PoincareSection(inverse_square().rhs, mode="cubic")


def test_reference_section_counts_the_start():
    problem = inverse_square()
    reference = reference_section(problem, 13.0, KEPLER_SECTION)
    assert reference.count == 3
    np.testing.assert_allclose(reference.times, [0.0, 2 * math.pi, 4 * math.pi], atol=1e-8)
    assert reference.hamiltonian_error < 1e-9
    assert section_count_ratio([0, 1, 2], reference) == 1.0


def test_hamiltonian_statistics():
    mae = HamiltonianMAE(lambda y: float(y[0]))
    drift = HamiltonianDrift(lambda y: float(y[0]))
    for t, value in [(0.0, 1.0), (1.0, 1.5), (2.0, 2.0), (3.0, 2.5)]:
        mae.update(t, np.array([value]))
        drift.update(t, np.array([value]))
    assert mae.value == pytest.approx(1.0)
    assert drift.slope == pytest.approx(0.5)


@pytest.mark.slow
def test_galactic_desk_run():
    count, mae = galactic_run("ees27-opt", 1 / 40, 1e3)
    _, mae_rk4 = galactic_run("rk4", 1 / 40, 1e3)
    reference = reference_section(galactic(), 1e3)
    assert abs(count - reference.count) <= max(2, 0.03 * reference.count)
    assert mae <= 1e-1 * mae_rk4


@pytest.mark.extended
def test_galactic_full_run():
    count, _ = galactic_run("ees27-opt", 1 / 40, 1e6)
    assert abs(count - 47101) <= 25
