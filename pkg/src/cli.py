"""``bsf``: trees, Hopf operations, schemes, EES families, stability, ODE runs and verify."""

import argparse
import csv
import json
import logging
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .algebra import character as ch
from .algebra.hopf import OPERATIONS, AlgebraElement, dot_reduce, id_sqrt, tau_minus, tau_plus
from .algebra.scalar import format_scalar, parse_scalar, to_float
from .algebra.tree import forest_key, format_forest, format_tree, parse_tree, trees_up_to
from .analysis.stability import (
    RasterGrid,
    a_stable_symmetric_component,
    composed_stability,
    raster_domain,
    raster_order_star,
    real_stability_interval,
    stability_function,
)
from .config.settings import MAX_DEGREE, settings
from .errors import EXIT_OK, EXIT_USAGE, BSeriesError
from .io.models import SchemeReport, TableauModel
from .io.writers import write_csv, write_raster
from .ode.integrate import integrate, reversal_error
from .ode.poincare import HamiltonianMAE, PoincareSection
from .ode.problems import PROBLEMS
from .schemes import ees, library
from .schemes.tableau import ButcherTableau, elementary_weights
from .verify import check_ids, run_checks

logger = logging.getLogger(__name__)

FORMATS = ("text", "json", "csv")
SECTION_HEADER = ["t", "q1", "q3", "p1", "p3"]


def load_tableau(spec: str) -> ButcherTableau:
    """A library name (``rk4``, ``ees25:1/10``) or a tableau JSON file."""
    if spec.endswith(".json"):
        path = settings.find_file(spec)
        if path is None:
            raise FileNotFoundError(spec)
        return TableauModel.model_validate_json(path.read_text()).to_tableau()
    return library.get_scheme(spec)


def emit_table(fmt: str, header: Sequence[str], rows) -> None:
    rows = [list(r) for r in rows]
    if fmt == "json":
        print(json.dumps([dict(zip(header, r)) for r in rows], indent=2))
    elif fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        for row in rows:
            print("\t".join(str(x) for x in row))


def element_rows(x) -> List[List[str]]:
    if isinstance(x, AlgebraElement):
        return [[format_scalar(c), format_forest(f)] for f, c in x.sorted_terms()]
    ordered = sorted(x.terms.items(), key=lambda item: (forest_key(item[0][0]), forest_key(item[0][1])), reverse=True)
    return [[format_scalar(c), format_forest(l), format_forest(r)] for (l, r), c in ordered]


# commands


def cmd_trees(args) -> int:
    size = args.size or settings.degree
    rows = ((format_tree(t), t.size, t.sigma, t.factorial) for t in trees_up_to(size))
    emit_table(args.format, ["tree", "order", "sigma", "factorial"], rows)
    return EXIT_OK


def cmd_hopf(args) -> int:
    tree = parse_tree(args.tree)
    result = OPERATIONS[args.operation](tree)
    if args.reduced and isinstance(result, AlgebraElement):
        result = dot_reduce(result)
    if args.format == "text":
        print("\n".join(result.to_lines()) or "0")
        return EXIT_OK
    header = ["coefficient", "forest"] if isinstance(result, AlgebraElement) else ["coefficient", "left", "right"]
    emit_table(args.format, header, element_rows(result))
    return EXIT_OK


def _decompose_tree(args) -> int:
    tree = parse_tree(args.tree)
    parts = {"idsqrt": id_sqrt(tree), "minus": tau_minus(tree), "plus": tau_plus(tree)}
    if args.reduced:
        parts = {k: dot_reduce(v) for k, v in parts.items()}
    if args.format == "json":
        print(json.dumps({"tree": format_tree(tree), **{k: v.to_lines() for k, v in parts.items()}}, indent=2))
    elif args.format == "csv":
        emit_table("csv", ["part", "coefficient", "forest"], ([k] + row for k, v in parts.items() for row in element_rows(v)))
    else:
        print(f"tree: {format_tree(tree)}")
        for name, value in parts.items():
            print(f"{name}:")
            for line in value.to_lines() or ["0"]:
                print(f"    {line}")
    return EXIT_OK


def _decompose_random(args) -> int:
    degree = min(settings.degree, 6)
    psi = ch.random_character(degree, random.Random(settings.seed))
    zeta_plus, zeta_minus = ch.odd_even_decompose(psi)
    via_maps = ch.decompose_via_tree_maps(psi)
    checks = {
        "zeta+ even": ch.is_even(zeta_plus),
        "zeta- odd": ch.is_odd(zeta_minus),
        "zeta+ zeta- = psi": (zeta_plus * zeta_minus).equals(psi),
        "tree maps agree": zeta_plus.equals(via_maps[0]) and zeta_minus.equals(via_maps[1]),
    }
    if args.format == "text":
        print(f"random character, seed {settings.seed}, degree {degree}")
        for label, ok in checks.items():
            print(f"{label}: {'yes' if ok else 'no'}")
    else:
        emit_table(args.format, ["check", "holds"], checks.items())
    return EXIT_OK if all(checks.values()) else 1


def cmd_decompose(args) -> int:
    if args.random:
        return _decompose_random(args)
    if not args.tree:
        raise BSeriesError("decompose needs a tree encoding or --random")
    return _decompose_tree(args)


def cmd_scheme(args) -> int:
    T = load_tableau(args.scheme)
    if args.action == "show":
        if args.format == "json":
            print(TableauModel.from_tableau(T).model_dump_json(indent=2))
        else:
            print(T.to_string())
        return EXIT_OK
    psi = elementary_weights(T, settings.degree)
    report = SchemeReport(
        name=T.name,
        degree=settings.degree,
        order=str(ch.ord(psi)),
        antisymmetric_order=str(ch.ord_plus(psi)),
        symmetric=ch.is_odd(psi),
        consistent=T.consistent,
        explicit=T.explicit,
    )
    if args.format == "json":
        print(report.model_dump_json(indent=2))
    else:
        print(report.to_string(), end="")
    return EXIT_OK


def _residual_lines(T: ButcherTableau, family: ees.EesFamily) -> List[List[str]]:
    m = family.antisymmetric_order
    psi = elementary_weights(T, m + 1)
    sets = ees.condition_sets(ees.ConditionKind.C, (1, 2, 3))
    sets += ees.condition_sets(ees.ConditionKind.EC, range(3, m + 2))
    rows = []
    for conditions in sets:
        values = ees.residuals(psi, conditions)
        worst = max((abs(to_float(v)) for v in values), default=0.0)
        rows.append([f"{conditions.kind.value}({conditions.degree})", len(conditions), f"{worst:.3e}"])
    return rows


def cmd_ees(args) -> int:
    family = ees.EesFamily(args.family)
    if args.x == "scan":
        result = ees.minimize_objective(family, sign=args.sign, ec_degree=args.ec_degree)
        if args.csv:
            write_csv(args.csv, ["x", "objective"], zip(result.grid, result.values))
        if args.format == "json":
            print(json.dumps({"family": family.value, "x": result.x, "objective": result.value}, indent=2))
        else:
            print(f"EES({family.value}) minimizer x = {result.x:.8f}, objective = {result.value:.6e}")
        return EXIT_OK
    T = ees.EesFamilySpec(family, parse_scalar(args.x), args.sign).tableau()
    print(TableauModel.from_tableau(T).model_dump_json(indent=2))
    rows = _residual_lines(T, family)
    if args.format == "text":
        for label, count, worst in rows:
            print(f"{label}: {count} conditions, max |residual| = {worst}")
    else:
        emit_table(args.format, ["set", "conditions", "max_residual"], rows)
    return EXIT_OK


def cmd_stability(args) -> int:
    T = load_tableau(args.scheme)
    R = stability_function(T)
    if args.report or not args.raster:
        print(R.to_string())
        if T.explicit:
            print(f"symmetric component: {a_stable_symmetric_component(T).value}")
            print(f"composed: {composed_stability(R).to_string()}")
        print(f"real stability interval: [-{real_stability_interval(R):.6f}, 0]")
    if args.raster:
        grid = RasterGrid(
            tuple(settings.raster_re), tuple(settings.raster_im), args.resolution or settings.raster_resolution
        )
        grid = raster_order_star(R, grid) if args.star else raster_domain(R, grid)
        write_raster(Path(args.raster), grid)
    return EXIT_OK


def cmd_integrate(args) -> int:
    problem = PROBLEMS[args.problem]()
    T = load_tableau(args.scheme)
    if args.reverse:
        error = reversal_error(T, problem, None, args.h, args.t_end)
        print(f"{T.name}: reversal error {error:.6e}")
        return EXIT_OK
    observers = []
    section = mae = None
    if args.poincare:
        section = PoincareSection(problem.rhs)
        observers.append(section)
    if args.hamiltonian_mae:
        if problem.hamiltonian is None:
            raise BSeriesError(f"{problem.name} has no Hamiltonian")
        mae = HamiltonianMAE(problem.hamiltonian)
        observers.append(mae)
    trajectory = integrate(T, problem, None, args.h, args.t_end, observers=observers, store=bool(args.csv))
    if args.csv:
        header = ["t"] + [f"y{i + 1}" for i in range(problem.dimension)]
        write_csv(args.csv, header, ([t, *y] for t, y in zip(trajectory.times, trajectory.states)))
    if section is not None:
        write_csv(args.poincare, SECTION_HEADER, section.rows())
    print(f"{T.name} on {problem.name}: t = {trajectory.times[-1]:.6g}, y = {trajectory.final.tolist()}")
    if section is not None:
        print(f"section points: {len(section)}")
    if mae is not None:
        print(f"hamiltonian MAE: {mae.value:.6e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        print("\n".join(check_ids()))
        return EXIT_OK
    report = run_checks(args.prefix, args.extended or settings.extended)
    if args.format == "json":
        print(report.model_dump_json(indent=2))
    elif args.format == "csv":
        emit_table(
            "csv",
            ["check_id", "status", "expected", "actual", "elapsed"],
            ([c.check_id, c.status, c.expected, c.actual, f"{c.elapsed:.3f}"] for c in report),
        )
    else:
        print(report.to_string(), end="")
    return report.exit_code


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-d", "--debug", action="store_true")
    common.add_argument("--degree", type=int, help=f"truncation degree (1..{MAX_DEGREE})")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="bsf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", parents=[common], help="enumerate trees with |t|, sigma and t!")
    p.add_argument("size", nargs="?", type=int)
    p.set_defaults(handler=cmd_trees)

    p = sub.add_parser("hopf", parents=[common], help="apply a Hopf-algebra map to a tree")
    p.add_argument("tree")
    p.add_argument("operation", choices=sorted(OPERATIONS))
    p.add_argument("--reduced", action="store_true", help="suppress bullet factors")
    p.set_defaults(handler=cmd_hopf)

    p = sub.add_parser("decompose", parents=[common], help="Id^1/2, tau- and tau+ of a tree")
    p.add_argument("tree", nargs="?")
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--random", action="store_true", help="decompose a seeded random character")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("scheme", parents=[common], help="inspect a Runge-Kutta scheme")
    p.add_argument("action", choices=["check", "show"])
    p.add_argument("scheme", help="library name, family:param, or tableau JSON file")
    p.set_defaults(handler=cmd_scheme)

    p = sub.add_parser("ees", parents=[common], help="explicit and effectively symmetric (EES) families")
    p.add_argument("action", choices=["derive"])
    p.add_argument("--family", choices=[f.value for f in ees.EesFamily], required=True)
    p.add_argument("--x", required=True, help="scalar parameter or 'scan'")
    p.add_argument("--sign", choices=["plus", "minus"], default="plus")
    p.add_argument("--ec-degree", type=int)
    p.add_argument("--csv", type=Path, help="objective scan output")
    p.set_defaults(handler=cmd_ees)

    p = sub.add_parser("stability", parents=[common], help="stability function, rasters, A-stability")
    p.add_argument("--scheme", required=True)
    p.add_argument("--raster", help="output .pgm or .csv")
    p.add_argument("--star", action="store_true", help="order star instead of stability domain")
    p.add_argument("--resolution", type=int)
    p.add_argument("--report", action="store_true")
    p.set_defaults(handler=cmd_stability)

    p = sub.add_parser("integrate", parents=[common], help="fixed-step integration of a benchmark problem")
    p.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--reverse", action="store_true", help="report the time-reversal error")
    p.add_argument("--poincare", type=Path)
    p.add_argument("--hamiltonian-mae", action="store_true")
    p.add_argument("--csv", type=Path, help="trajectory output")
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("verify", parents=[common], help="replay the published reference values")
    p.add_argument("prefix", nargs="?")
    p.add_argument("--extended", action="store_true")
    p.add_argument("--list", action="store_true", help="print check ids only")
    p.set_defaults(handler=cmd_verify)
    return parser


def apply_overrides(args, parser: argparse.ArgumentParser) -> None:
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
    if args.degree is not None:
        if not 1 <= args.degree <= MAX_DEGREE:
            parser.error(f"--degree must lie in 1..{MAX_DEGREE}")
        settings.degree = args.degree
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be positive")
        settings.threads = args.threads
    if args.seed is not None:
        settings.seed = args.seed


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    apply_overrides(args, parser)
    try:
        return args.handler(args)
    except BSeriesError as err:
        logger.error(f"{type(err).__name__}: {err}")
        return err.exit_code
    except (ValueError, FileNotFoundError) as err:
        logger.error(f"{type(err).__name__}: {err}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
