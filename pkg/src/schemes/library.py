"""Named Runge–Kutta schemes.

Each entry records the claimed order and whether the scheme is symmetric,
so test harnesses can compare the claims against computed characters.
Parameterized families are addressed as ``family:param``, e.g.
``ees25:1/10`` or ``omega:1/3``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from ..algebra.scalar import QuadExt, Scalar, parse_scalar
from ..errors import ParseError
from .tableau import ButcherTableau

logger = logging.getLogger(__name__)

F = Fraction
R3 = QuadExt.root(3)
R5 = QuadExt.root(5)


def explicit_euler() -> ButcherTableau:
    return ButcherTableau.from_rows([[0]], [1], "euler")


def backward_euler() -> ButcherTableau:
    return ButcherTableau.from_rows([[1]], [1], "backward-euler")


def implicit_midpoint() -> ButcherTableau:
    return ButcherTableau.from_rows([[F(1, 2)]], [1], "midpoint")


def trapezoidal() -> ButcherTableau:
    return ButcherTableau.from_rows([[0, 0], [F(1, 2), F(1, 2)]], [F(1, 2), F(1, 2)], "trapezoidal")


def gauss2() -> ButcherTableau:
    quarter = QuadExt(F(1, 4), 0, 3)
    return ButcherTableau.from_rows(
        [[quarter, quarter - R3 / 6], [quarter + R3 / 6, quarter]],
        [F(1, 2), F(1, 2)],
        "gauss2",
    )


def heun2() -> ButcherTableau:
    return ButcherTableau.from_rows([[0], [1]], [F(1, 2), F(1, 2)], "heun2")


def heun3() -> ButcherTableau:
    return ButcherTableau.from_rows(
        [[0], [F(1, 3)], [0, F(2, 3)]], [F(1, 4), 0, F(3, 4)], "heun3"
    )


def kutta3() -> ButcherTableau:
    return ButcherTableau.from_rows(
        [[0], [F(1, 2)], [-1, 2]], [F(1, 6), F(2, 3), F(1, 6)], "kutta3"
    )


def classic_rk4() -> ButcherTableau:
    return ButcherTableau.from_rows(
        [[0], [F(1, 2)], [0, F(1, 2)], [0, 0, 1]],
        [F(1, 6), F(1, 3), F(1, 3), F(1, 6)],
        "rk4",
    )


def ralston_rk4() -> ButcherTableau:
    """Ralston's minimum-error fourth-order method, exact in Q(√5)."""
    return ButcherTableau.from_rows(
        [
            [0],
            [F(2, 5)],
            [(-2889 + 1428 * R5) / 1024, (3785 - 1620 * R5) / 1024],
            [
                (-3365 + 2094 * R5) / 6040,
                (-975 - 3046 * R5) / 2552,
                (467040 + 203968 * R5) / 240845,
            ],
        ],
        [
            (263 + 24 * R5) / 1812,
            (125 - 1000 * R5) / 3828,
            1024 * (3346 + 1623 * R5) / 5924787,
            (30 - 4 * R5) / 123,
        ],
        "ralston4",
    )


def nystrom_rk5() -> ButcherTableau:
    return ButcherTableau.from_rows(
        [
            [0],
            [F(1, 3)],
            [F(4, 25), F(6, 25)],
            [F(1, 4), -3, F(15, 4)],
            [F(2, 27), F(10, 9), F(-50, 81), F(8, 81)],
            [F(2, 25), F(12, 25), F(2, 15), F(8, 75), 0],
        ],
        [F(23, 192), 0, F(125, 192), 0, F(-27, 64), F(125, 192)],
        "nystrom5",
    )


def omega_lambda(lam: Scalar) -> ButcherTableau:
    """Ω_λ: c = (2λ, −2λ), A = [[λ, λ], [−λ, −λ]], b = (λ, −λ)."""
    if lam == 0:
        raise ValueError("omega_lambda requires lambda != 0")
    return ButcherTableau.from_rows([[lam, lam], [-lam, -lam]], [lam, -lam], f"omega:{lam}")


def reference_dirk() -> ButcherTableau:
    """The printed two-stage DIRK claimed to be midpoint composed with itself."""
    return ButcherTableau.from_rows([[F(1, 2), 0], [1, F(1, 2)]], [F(1, 2), F(1, 2)], "printed-dirk")


@dataclass(frozen=True)
class SchemeEntry:
    name: str
    factory: Callable[..., ButcherTableau]
    order: int
    symmetric: bool
    explicit: bool
    description: str = ""
    parameterized: bool = False


def _ees25(x: Scalar) -> ButcherTableau:
    from .ees import ees25_tableau

    return ees25_tableau(x)


def _ees27(x: Scalar) -> ButcherTableau:
    from .ees import ees27_tableau

    return ees27_tableau(x, "plus")


def _ees27_minus(x: Scalar) -> ButcherTableau:
    from .ees import ees27_tableau

    return ees27_tableau(x, "minus")


SCHEMES: Dict[str, SchemeEntry] = {
    entry.name: entry
    for entry in [
        SchemeEntry("euler", explicit_euler, 1, False, True, "explicit Euler"),
        SchemeEntry("backward-euler", backward_euler, 1, False, False, "implicit Euler"),
        SchemeEntry("midpoint", implicit_midpoint, 2, True, False, "implicit midpoint rule"),
        SchemeEntry("trapezoidal", trapezoidal, 2, True, False, "Crank–Nicolson"),
        SchemeEntry("gauss2", gauss2, 4, True, False, "2-stage Gauss collocation"),
        SchemeEntry("heun2", heun2, 2, False, True, "Heun's second-order method"),
        SchemeEntry("heun3", heun3, 3, False, True, "Heun's third-order method"),
        SchemeEntry("kutta3", kutta3, 3, False, True, "Kutta's third-order method"),
        SchemeEntry("rk4", classic_rk4, 4, False, True, "classic Runge–Kutta"),
        SchemeEntry("ralston4", ralston_rk4, 4, False, True, "Ralston's fourth-order method"),
        SchemeEntry("nystrom5", nystrom_rk5, 5, False, True, "Nyström's fifth-order method"),
        SchemeEntry("omega", omega_lambda, 0, False, False, "even two-stage family", True),
        SchemeEntry("ees25", _ees25, 2, False, True, "EES(2,5;x)", True),
        SchemeEntry("ees27", _ees27, 2, False, True, "EES(2,7;x), +r2 branch", True),
        SchemeEntry("ees27-minus", _ees27_minus, 2, False, True, "EES(2,7;x), -r2 branch", True),
    ]
}

# printed optimal members
ALIASES: Dict[str, str] = {
    "ees25-opt": "ees25:1/10",
    "ees25-simple": "ees25:1/4",
    "ees27-opt": "ees27:(5-3*r2)/14",
    "ees27-simple": "ees27:(2-r2)/4",
}


def scheme_names(include_families: bool = False) -> List[str]:
    names = [n for n, e in SCHEMES.items() if include_families or not e.parameterized]
    return names + (list(ALIASES) if include_families else [])


def lookup(spec: str) -> SchemeEntry:
    name = ALIASES.get(spec, spec).partition(":")[0]
    if name not in SCHEMES:
        raise ParseError(f"unknown scheme {name!r}", spec, 0)
    return SCHEMES[name]


def get_scheme(spec: str) -> ButcherTableau:
    """Resolve ``name`` or ``family:param`` into a tableau."""
    resolved = ALIASES.get(spec, spec)
    name, sep, param = resolved.partition(":")
    entry = lookup(resolved)
    if entry.parameterized:
        if not sep:
            raise ParseError(f"scheme {name!r} needs a parameter, e.g. {name}:1/4", spec, len(spec))
        tableau = entry.factory(parse_scalar(param))
    else:
        if sep:
            raise ParseError(f"scheme {name!r} takes no parameter", spec, len(name))
        tableau = entry.factory()
    logger.debug(f"resolved scheme {spec!r}: \n{tableau.to_string()}")
    if spec in ALIASES:
        tableau = ButcherTableau(tableau.A, tableau.b, spec)
    return tableau


def claimed_order(spec: str) -> Optional[int]:
    return lookup(spec).order
