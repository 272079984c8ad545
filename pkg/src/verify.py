"""Registry of reproducible checks run by ``bsf verify``.

Check ids are stable; a prefix selects a subset (``verify hopf.``). Checks
marked extended only run when ``--extended`` or ``BSF_EXTENDED=1`` is given.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import character as ch
from .algebra.hopf import (
    AlgebraElement,
    TensorElement,
    antipode,
    antipode_forest_formula,
    coproduct,
    id_sqrt,
    reduced_coproduct,
    tau_minus,
    tau_plus,
)
from .algebra.scalar import QuadExt, format_scalar, parse_scalar
from .algebra.tree import EMPTY, Forest, parse_forest, parse_tree, trees_up_to
from .analysis.stability import (
    AStability,
    a_stable_symmetric_component,
    char_stability_check,
    composed_stability,
    real_stability_interval,
    stability_function,
)
from .config.settings import settings
from .io.models import CheckResult, VerifyReport
from .ode.integrate import final_error, integrate, linear_powers, reversal_error
from .ode.poincare import HamiltonianMAE, PoincareSection, reference_section
from .ode.problems import galactic, galactic_initial_momentum, inverse_square
from .schemes import ees, library
from .schemes.tableau import (
    ButcherTableau,
    compose_tableaux,
    elementary_weights,
)

logger = logging.getLogger(__name__)

F = Fraction
R2 = QuadExt.root(2)


def element(*terms: Tuple[str, str]) -> AlgebraElement:
    """Build an element from ``(coefficient, forest)`` text pairs."""
    return AlgebraElement([(parse_forest(f), parse_scalar(c)) for c, f in terms])


def show(x) -> str:
    if isinstance(x, (AlgebraElement, TensorElement)):
        return " + ".join(x.to_lines()) or "0"
    if isinstance(x, (Fraction, QuadExt, int)):
        return format_scalar(x)
    return str(x)


# rows: tree, Id^{1/2}(τ), τ⁻, τ⁺ with every • factor written out
DECOMPOSITION_TABLE: List[Tuple[str, Tuple, Tuple, Tuple]] = [
    ("()", (("1/2", "()"),), (("1", "()"),), ()),
    (
        "(())",
        (("1/2", "(())"), ("-1/8", "() ()")),
        (("1/2", "() ()"),),
        (("1", "(())"), ("-1/2", "() ()")),
    ),
    ("(()())", (("1/2", "(()())"), ("-1/4", "(()) ()")), (("1", "(()())"),), ()),
    (
        "((()))",
        (("1/2", "((()))"), ("-1/4", "(()) ()"), ("1/16", "() () ()")),
        (("1", "((()))"), ("-1", "(()) ()"), ("1/2", "() () ()")),
        (),
    ),
    (
        "(()()())",
        (("1/2", "(()()())"), ("-3/8", "(()()) ()"), ("1/64", "() () () ()")),
        (("3/2", "(()()) ()"), ("-1/4", "() () () ()")),
        (("1", "(()()())"), ("-3/2", "(()()) ()"), ("1/4", "() () () ()")),
    ),
    (
        "(()(()))",
        (
            ("1/2", "(()(()))"),
            ("-1/8", "(()) (())"),
            ("-1/8", "((())) ()"),
            ("-1/8", "(()()) ()"),
            ("1/16", "(()) () ()"),
            ("1/128", "() () () ()"),
        ),
        (("1/2", "((())) ()"), ("1/2", "(()()) ()"), ("-1/2", "(()) () ()"), ("1/8", "() () () ()")),
        (("1", "(()(()))"), ("-1/2", "((())) ()"), ("-1/2", "(()()) ()"), ("1/8", "() () () ()")),
    ),
    (
        "((()()))",
        (
            ("1/2", "((()()))"),
            ("-1/4", "((())) ()"),
            ("-1/8", "(()()) ()"),
            ("1/8", "(()) () ()"),
            ("-1/64", "() () () ()"),
        ),
        (("1", "((())) ()"), ("1/2", "(()()) ()"), ("-1", "(()) () ()"), ("1/4", "() () () ()")),
        (
            ("1", "((()()))"),
            ("-1", "((())) ()"),
            ("-1/2", "(()()) ()"),
            ("1", "(()) () ()"),
            ("-1/4", "() () () ()"),
        ),
    ),
    (
        "(((())))",
        (
            ("1/2", "(((())))"),
            ("-1/8", "(()) (())"),
            ("-1/4", "((())) ()"),
            ("3/16", "(()) () ()"),
            ("-5/128", "() () () ()"),
        ),
        (("1", "((())) ()"), ("-1", "(()) () ()"), ("3/8", "() () () ()")),
        (("1", "(((())))"), ("-1", "((())) ()"), ("1/2", "(()) () ()"), ("-1/8", "() () () ()")),
    ),
]

# tree, 1/τ!, ψ(τ) = (−1)^{|τ|}ψ(Sτ) for the implicit midpoint rule
MIDPOINT_TABLE: List[Tuple[str, Fraction, Fraction]] = [
    ("()", F(1), F(1)),
    ("(())", F(1, 2), F(1, 2)),
    ("(()())", F(1, 3), F(1, 4)),
    ("((()))", F(1, 6), F(1, 4)),
    ("(()()())", F(1, 4), F(1, 8)),
    ("(()(()))", F(1, 8), F(1, 8)),
    ("((()()))", F(1, 12), F(1, 8)),
    ("(((())))", F(1, 24), F(1, 8)),
]

GAUSS2_VALUES: List[Tuple[str, Fraction]] = [
    ("((()()()))", F(1, 18)),
    ("(()(()()))", F(5, 72)),
    ("(()(()()()))", F(7, 144)),
]

COUNTS_TILDE = [0, 1, 2, 6, 14, 34, 81, 196, 481]
COUNTS_PLUS = [0, 1, 1, 5, 5, 25, 25, 140, 140]

# (kind, i) -> (n=1, n=2, n=3); None where n ≥ i
WEIGHT_TABLE: Dict[Tuple[str, int], Tuple[Optional[int], ...]] = {
    ("SC", 2): (2, None, None),
    ("EC", 2): (2, None, None),
    ("SC", 4): (46, 34, 16),
    ("EC", 4): (38, 34, 16),
    ("SC", 6): (807, 641, 503),
    ("EC", 6): (665, 549, 387),
    ("SC", 8): (13332, 10866, 8708),
    ("EC", 8): (12711, 10207, 6917),
}

PRINTED_TABLEAUX: Dict[str, Tuple[List[List], List]] = {
    "ees25-simple": ([[F(1, 2)], [0, 1]], [F(1, 4), F(1, 2), F(1, 4)]),
    "ees25-opt": ([[F(1, 3)], [F(-5, 48), F(15, 16)]], [F(1, 10), F(1, 2), F(2, 5)]),
    "ees27-simple": (
        [[(2 - R2) / 2], [0, R2 / 2], [(2 - R2) / 2, 0, R2 / 2]],
        [(2 - R2) / 4, R2 / 4, R2 / 4, (2 - R2) / 4],
    ),
    "ees27-opt": (
        [
            [(2 - R2) / 3],
            [(-4 + R2) / 24, (4 + R2) / 8],
            [(-176 + 145 * R2) / 168, 3 * (8 - 5 * R2) / 56, 3 * (3 - R2) / 7],
        ],
        [(5 - 3 * R2) / 14, (3 + R2) / 14, 3 * (-1 + 2 * R2) / 14, (9 - 4 * R2) / 14],
    ),
}


@dataclass
class Outcome:
    expected: str
    actual: str
    passed: bool
    # a reproduced inconsistency in published material, reported but not failed
    discrepancy: bool = False


def compare(expected, actual) -> Outcome:
    return Outcome(show(expected), show(actual), expected == actual)


def bound(value: float, limit: float, label: str = "<=") -> Outcome:
    return Outcome(f"{label} {limit:.4e}", f"{value:.4e}", value <= limit)


@dataclass(frozen=True)
class Check:
    check_id: str
    description: str
    run: Callable[[], Outcome]
    extended: bool = False


CHECKS: List[Check] = []


def register(check_id: str, description: str, run: Callable[[], Outcome], extended: bool = False) -> None:
    if any(c.check_id == check_id for c in CHECKS):
        raise ValueError(f"duplicate check id {check_id}")
    CHECKS.append(Check(check_id, description, run, extended))


def check(check_id: str, description: str, extended: bool = False):
    def decorator(fn: Callable[[], Outcome]) -> Callable[[], Outcome]:
        register(check_id, description, fn, extended)
        return fn

    return decorator


# hopf


@check("hopf.coproduct.cherry", "coproduct and reduced coproduct of the cherry")
def _coproduct_cherry() -> Outcome:
    cherry, dot, chain = parse_tree("(()())"), parse_tree("()"), parse_tree("(())")
    reduced = {(Forest((dot,)), Forest((chain,))): 2, (Forest((dot, dot)), Forest((dot,))): 1}
    full = {**reduced, (Forest((cherry,)), EMPTY): 1, (EMPTY, Forest((cherry,))): 1}
    expected = (TensorElement(full), TensorElement(reduced))
    actual = (coproduct(cherry), reduced_coproduct(cherry))
    return Outcome(
        " | ".join(show(x) for x in expected), " | ".join(show(x) for x in actual), expected == actual
    )


_ANTIPODES = [
    ("dot", "()", (("-1", "()"),)),
    ("chain2", "(())", (("-1", "(())"), ("1", "() ()"))),
    ("cherry", "(()())", (("-1", "(()())"), ("2", "(()) ()"), ("-1", "() () ()"))),
]

for _label, _tree, _terms in _ANTIPODES:
    register(
        f"hopf.antipode.{_label}",
        f"S{_tree} as displayed",
        lambda t=_tree, e=_terms: compare(element(*e), antipode(parse_tree(t))),
    )


@check("hopf.antipode.forest-formula", "edge-subset antipode equals the recursive one to degree 7")
def _forest_formula() -> Outcome:
    bad = [t for t in trees_up_to(7) if antipode_forest_formula(t) != antipode(t)]
    return Outcome("0 mismatches", f"{len(bad)} mismatches", not bad)


for _k, (_tree, _sqrt, _minus, _plus) in enumerate(DECOMPOSITION_TABLE, start=1):
    for _name, _fn, _terms in (("idsqrt", id_sqrt, _sqrt), ("minus", tau_minus, _minus), ("plus", tau_plus, _plus)):
        register(
            f"hopf.table.row{_k}.{_name}",
            f"{_name} of {_tree}",
            lambda t=_tree, fn=_fn, e=_terms: compare(element(*e), fn(parse_tree(t))),
        )


# adjoint


def _midpoint_row(tree_text: str, factorial: Fraction, value: Fraction) -> Outcome:
    psi = elementary_weights(library.implicit_midpoint(), 4)
    tree = parse_tree(tree_text)
    expected = (factorial, value, value)
    actual = (Fraction(1, tree.factorial), psi(tree), ch.adjoint(psi)(tree))
    return Outcome(
        ", ".join(map(show, expected)), ", ".join(map(show, actual)), expected == actual
    )


for _k, _row in enumerate(MIDPOINT_TABLE, start=1):
    register(f"adjoint.midpoint.row{_k}", f"1/τ!, ψ and (−1)^|τ|ψ(Sτ) of {_row[0]}", lambda r=_row: _midpoint_row(*r))


@check("adjoint.gauss2", "Gauss-2 weights 1/18, 5/72, 7/144 and ψ* = ψ at the size-6 tree")
def _gauss2() -> Outcome:
    psi = elementary_weights(library.gauss2(), 6)
    trees = [parse_tree(t) for t, _ in GAUSS2_VALUES]
    expected = [v for _, v in GAUSS2_VALUES] + [F(7, 144)]
    actual = [psi(t) for t in trees] + [ch.adjoint(psi)(trees[-1])]
    return compare(expected, actual)


# counts and weights


@check("counts.tilde", "cumulative non-trivial SC conditions, p = 1..9")
def _counts_tilde() -> Outcome:
    return compare(COUNTS_TILDE, ees.nonzero_counts(ees.ConditionKind.SC, 9))


@check("counts.plus", "cumulative non-trivial EC conditions, p = 1..9")
def _counts_plus() -> Outcome:
    return compare(COUNTS_PLUS, ees.nonzero_counts(ees.ConditionKind.EC, 9))


for (_kind, _i), _row in WEIGHT_TABLE.items():
    for _n, _value in enumerate(_row, start=1):
        register(
            f"weights.{_kind}{_i}.n{_n}",
            f"w({_kind}({_i}), {_n})",
            lambda k=_kind, i=_i, n=_n, v=_value: compare(v, ees.weight_table((i,), (n,))[(k, i, n)]),
        )


# schemes


@check("rk.compose.trapezoidal", "Euler over h/2 then backward Euler over h/2 is the trapezoidal rule")
def _crank_nicolson() -> Outcome:
    composed = compose_tableaux(library.explicit_euler(), library.backward_euler(), F(1, 2))
    expected = library.trapezoidal()
    return compare((expected.A, expected.b), (composed.A, composed.b))


@check("rk.dirk", "printed two-stage DIRK against both composition conventions (documented discrepancy)")
def _dirk() -> Outcome:
    printed = library.reference_dirk()
    midpoint = library.implicit_midpoint()
    psi = elementary_weights(printed, 4)
    full = elementary_weights(compose_tableaux(midpoint, midpoint, 1), 4)
    half = elementary_weights(compose_tableaux(midpoint, midpoint, F(1, 2)), 4)
    bc = sum(b * c for b, c in zip(printed.b, printed.c))
    actual = f"sum(b*c) = {format_scalar(bc)}, theta=1: {psi.equals(full)}, theta=1/2: {psi.equals(half)}"
    reproduced = bc == 1 and not psi.equals(full) and not psi.equals(half)
    if reproduced:
        logger.warning(f"printed DIRK matches neither composition: {actual}")
    return Outcome("sum(b*c) = 1, theta=1: False, theta=1/2: False", actual, reproduced, discrepancy=True)


@check("rk.order.library", "ord of every fixed library scheme equals its claimed order")
def _library_orders() -> Outcome:
    expected, actual = {}, {}
    for name in library.scheme_names():
        entry = library.lookup(name)
        if entry.order == 0:
            continue
        psi = elementary_weights(library.get_scheme(name), entry.order + 1)
        expected[name] = entry.order
        actual[name] = ch.ord(psi).value
    return compare(expected, actual)


@check("rk.symmetric.library", "symmetric schemes have odd characters, the others do not")
def _library_symmetry() -> Outcome:
    expected, actual = {}, {}
    for name in library.scheme_names():
        entry = library.lookup(name)
        if entry.order == 0:
            continue
        psi = elementary_weights(library.get_scheme(name), 5)
        expected[name] = entry.symmetric
        actual[name] = ch.is_odd(psi)
    return compare(expected, actual)


# ees


def _printed(spec: str) -> Outcome:
    rows, b = PRINTED_TABLEAUX[spec]
    printed = ButcherTableau.from_rows([[0]] + rows, b, spec)
    derived = library.get_scheme(spec)
    return compare((printed.A, printed.b), (derived.A, derived.b))


for _spec in PRINTED_TABLEAUX:
    register(f"ees.printed.{_spec}", f"closed form at {_spec} reproduces the printed tableau", lambda s=_spec: _printed(s))


def _orders(spec: str, degree: int, expected: Tuple[int, int]) -> Outcome:
    psi = elementary_weights(library.get_scheme(spec), degree)
    return compare(expected, (ch.ord(psi).value, ch.ord_plus(psi).value))


for _label, _spec, _degree, _expected in [
    ("ees25-simple", "ees25-simple", 6, (2, 5)),
    ("ees25-opt", "ees25-opt", 6, (2, 5)),
    ("ees25-third", "ees25:1/3", 6, (2, 5)),
    ("ees27-simple", "ees27-simple", 8, (2, 7)),
    ("ees27-opt", "ees27-opt", 8, (2, 7)),
]:
    register(
        f"ees.order.{_label}",
        f"(ord, ord+) of {_spec}",
        lambda s=_spec, d=_degree, e=_expected: _orders(s, d, e),
    )


@check("ees.minus-branch", "the -r2 branch of EES(2,7) validates against C(1..2) and EC(3..7)")
def _minus_branch() -> Outcome:
    tableau = ees.ees27_tableau(F(1, 10), "minus")
    psi = elementary_weights(tableau, 8)
    return compare((2, 7), (ch.ord(psi).value, ch.ord_plus(psi).value))


@check("ees.bushy-eighth", "ψ of the 3-chain is 1/8 for every EES(2,5) member")
def _eighth() -> Outcome:
    chain = parse_tree("((()))")
    xs = [F(1, 4), F(1, 10), F(1, 3), F(-1, 5)]
    return compare([F(1, 8)] * len(xs), [elementary_weights(ees.ees25_tableau(x), 3)(chain) for x in xs])


@check("ees.objective.ees25", "EES(2,5) objective minimizer near 0.1")
def _objective25() -> Outcome:
    result = ees.minimize_objective(ees.EesFamily.EES25)
    return Outcome("|x - 0.1| <= 0.02", f"x = {result.x:.6f}", abs(result.x - 0.1) <= 0.02)


@check("ees.objective.ees27", "EES(2,7) objective minimizer near (5-3*r2)/14")
def _objective27() -> Outcome:
    target = (5 - 3 * math.sqrt(2)) / 14
    result = ees.minimize_objective(ees.EesFamily.EES27)
    return Outcome(f"|x - {target:.6f}| <= 0.02", f"x = {result.x:.6f}", abs(result.x - target) <= 0.02)


# stability


@check("stability.functions", "R(z) of Euler, classic RK4 and implicit midpoint")
def _functions() -> Outcome:
    expected = [
        ((F(1), F(1)), (F(1),)),
        ((F(1), F(1), F(1, 2), F(1, 6), F(1, 24)), (F(1),)),
        ((F(1), F(1, 2)), (F(1), F(-1, 2))),
    ]
    actual = []
    for T in (library.explicit_euler(), library.classic_rk4(), library.implicit_midpoint()):
        R = stability_function(T)
        actual.append((R.numerator, R.denominator))
    return compare(expected, actual)


@check("stability.composed.euler", "composed stability of Euler is (1+z)/(1-z) with |R(it)| = 1")
def _composed_euler() -> Outcome:
    R = composed_stability(stability_function(library.explicit_euler()))
    moduli = [abs(complex(R(1j * t))) for t in (0.1, 1.0, 10.0)]
    passed = (R.numerator, R.denominator) == ((1, 1), (1, -1)) and all(abs(m - 1) <= 1e-12 for m in moduli)
    return Outcome("(1 + z)/(1 - z), |R(it)| = 1", f"{R.to_string()}, {moduli}", passed)


@check("stability.a-stable", "A-stability of the symmetric component of Euler, RK4 and R = 1 + z - z^2")
def _a_stable() -> Outcome:
    counterexample = ButcherTableau.from_rows([[0], [1]], [2, -1], "counterexample")
    verdicts = [
        a_stable_symmetric_component(T)
        for T in (library.explicit_euler(), library.classic_rk4(), counterexample)
    ]
    return compare(
        [AStability.STABLE.value, AStability.STABLE.value, AStability.UNSTABLE.value], [v.value for v in verdicts]
    )


@check("stability.chain-coefficients", "z^n coefficient of R equals ψ on the n-chain for library schemes")
def _chain_coefficients() -> Outcome:
    failures = []
    for name in library.scheme_names():
        T = library.get_scheme(name)
        psi = elementary_weights(T, 6)
        R = stability_function(T)
        failures += [f"{name}:{n}" for n in range(1, 7) if not char_stability_check(psi, R, n)]
    return Outcome("no failures", ", ".join(failures) or "no failures", not failures)


@check("stability.real-interval", "EES(2,7) optimum has a longer real stability interval than RK4 and Nystrom RK5")
def _real_interval() -> Outcome:
    intervals = {
        name: real_stability_interval(stability_function(library.get_scheme(name)))
        for name in ("ees27-opt", "rk4", "nystrom5")
    }
    passed = intervals["ees27-opt"] > max(intervals["rk4"], intervals["nystrom5"])
    return Outcome("ees27-opt > rk4, nystrom5", ", ".join(f"{k}={v:.4f}" for k, v in intervals.items()), passed)


# ode


@check("ode.linear", "N steps on y' = λy equal R(hλ)^N y0 for library schemes")
def _linear() -> Outcome:
    lam, h, steps = complex(-1.0, 0.5), 0.1, 20
    worst = 0.0
    for name in library.scheme_names():
        T = library.get_scheme(name)
        R = stability_function(T)
        states = linear_powers(T, lam, h, steps)
        exact = complex(R(h * lam)) ** steps
        worst = max(worst, abs(states[-1] - exact) / abs(exact))
    return bound(worst, 1e-12)


_REVERSAL_LIMITS = [("midpoint", 1e-11), ("ees25-opt", 1e-5), ("ees27-simple", 5e-9)]

for _name, _limit in _REVERSAL_LIMITS:
    register(
        f"ode.reversal.{_name}",
        f"inverse-square reversal error of {_name}, h = 0.1, t <= 10",
        lambda n=_name, lim=_limit: bound(reversal_error(library.get_scheme(n), inverse_square(), None, 0.1, 10.0), lim),
    )


@check("ode.error.midpoint", "implicit midpoint final-time error on the inverse-square problem is about 1e-1")
def _midpoint_error() -> Outcome:
    error = final_error(library.implicit_midpoint(), inverse_square(), 0.1, 10.0)
    return Outcome("within 3x of 1.0063e-01", f"{error:.4e}", 1.0063e-1 / 3 <= error <= 3 * 1.0063e-1)


@check("ode.reversal.payoff", "EES(2,7) reversal error is at least 1000x below classic RK4")
def _payoff() -> Outcome:
    names = ["ees27-simple", "rk4"]
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        errors = list(pool.map(lambda n: reversal_error(library.get_scheme(n), inverse_square(), None, 0.1, 10.0), names))
    return Outcome("ratio <= 1e-3", f"{errors[0]:.3e} / {errors[1]:.3e}", errors[0] <= 1e-3 * errors[1])


@check("galactic.initial", "p2(0) is about 1.6889 and H(y0) = 2")
def _galactic_initial() -> Outcome:
    problem = galactic()
    p2 = galactic_initial_momentum()
    energy = problem.hamiltonian(problem.initial_state())
    return Outcome("p2 = 1.6889, H = 2", f"p2 = {p2:.6f}, H = {energy:.15f}", abs(p2 - 1.6889) < 1e-4 and abs(energy - 2) < 1e-13)


def galactic_run(spec: str, h: float, t_end: float) -> Tuple[int, float]:
    """Poincaré point count and Hamiltonian MAE of one streamed galactic run."""
    problem = galactic()
    section = PoincareSection(problem.rhs)
    mae = HamiltonianMAE(problem.hamiltonian)
    integrate(library.get_scheme(spec), problem, None, h, t_end, observers=[section, mae], store=False)
    logger.info(f"galactic {spec}: {len(section)} section points, MAE {mae.value:.3e}")
    return len(section), mae.value


def _galactic_compare(t_end: float, count_check: Callable[[int, int], bool], label: str) -> Outcome:
    specs = ["ees27-opt", "rk4"]
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        runs = list(pool.map(lambda s: galactic_run(s, 1 / 40, t_end), specs))
        reference = reference_section(galactic(), t_end)
    (count, mae), (_, mae_rk4) = runs
    passed = count_check(count, reference.count) and mae <= 1e-2 * mae_rk4
    actual = f"{count} points vs reference {reference.count}; MAE {mae:.3e} vs RK4 {mae_rk4:.3e}"
    return Outcome(label, actual, passed)


@check("galactic.desk", "EES(2,7) optimum on the galactic problem, h = 1/40, t <= 1e4")
def _galactic_desk() -> Outcome:
    return _galactic_compare(
        1e4, lambda n, ref: abs(n - ref) <= 0.03 * ref, "count within 3% of DOP853, MAE ratio to RK4 <= 1e-2"
    )


@check("galactic.full", "EES(2,7) optimum on the galactic problem, h = 1/40, t <= 1e6", extended=True)
def _galactic_full() -> Outcome:
    return _galactic_compare(1e6, lambda n, ref: abs(n - 47101) <= 25, "count within 25 of 47101")


# runner


def select(prefix: Optional[str] = None) -> List[Check]:
    return [c for c in CHECKS if prefix is None or c.check_id.startswith(prefix)]


def run_check(item: Check, extended: bool) -> CheckResult:
    if item.extended and not extended:
        return CheckResult(check_id=item.check_id, description=item.description, status="skipped")
    start = time.perf_counter()
    try:
        outcome = item.run()
    except Exception as err:  # failures are report entries
        logger.error(f"{item.check_id} raised {type(err).__name__}: {err}")
        outcome = Outcome("no exception", f"{type(err).__name__}: {err}", False)
    elapsed = time.perf_counter() - start
    if not outcome.passed:
        status = "fail"
    else:
        status = "documented-discrepancy" if outcome.discrepancy else "pass"
    logger.debug(f"{item.check_id}: {status} in {elapsed:.3f}s")
    return CheckResult(
        check_id=item.check_id,
        description=item.description,
        expected=outcome.expected,
        actual=outcome.actual,
        status=status,
        elapsed=elapsed,
    )


def run_checks(prefix: Optional[str] = None, extended: Optional[bool] = None) -> VerifyReport:
    extended = settings.extended if extended is None else extended
    report = VerifyReport(prefix=prefix)
    for item in select(prefix):
        report.checks.append(run_check(item, extended))
    logger.info(
        f"verify {prefix or '(all)'}: {report.count('pass')} passed, "
        f"{report.count('fail')} failed, {report.count('skipped')} skipped"
    )
    return report


def check_ids() -> Sequence[str]:
    return [c.check_id for c in CHECKS]
