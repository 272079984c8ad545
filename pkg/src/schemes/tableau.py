"""Butcher tableaux and their B-series characters."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..algebra.character import Character
from ..algebra.scalar import Scalar, format_scalar, is_exact, is_zero, parse_scalar, unify
from ..algebra.tree import Tree, trees_up_to
from ..config.settings import settings
from ..errors import InvalidTheta

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class ButcherTableau:
    """(A, b) of an s-stage Runge–Kutta method; c is always Σⱼ aᵢⱼ."""

    A: Matrix
    b: Tuple[Scalar, ...]
    name: str = ""
    _arrays: Dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        s = len(self.b)
        if len(self.A) != s or any(len(row) != s for row in self.A):
            raise ValueError(f"tableau {self.name!r}: A must be {s}x{s}")
        flat = unify([x for row in self.A for x in row] + list(self.b))
        A = tuple(tuple(flat[i * s : (i + 1) * s]) for i in range(s))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", tuple(flat[s * s :]))

    @classmethod
    def from_rows(cls, A: Sequence[Sequence], b: Sequence, name: str = "") -> "ButcherTableau":
        """Build from rows that may be ragged (explicit rows omit trailing zeros)."""
        s = len(b)
        parsed = [[_coerce(x) for x in row] for row in A]
        full = tuple(tuple(row + [Fraction(0)] * (s - len(row))) for row in parsed)
        return cls(full, tuple(_coerce(x) for x in b), name)

    @property
    def stages(self) -> int:
        return len(self.b)

    @cached_property
    def c(self) -> Tuple[Scalar, ...]:
        return tuple(sum(row[1:], row[0]) for row in self.A)

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.b)

    @property
    def consistent(self) -> bool:
        total = sum(self.b[1:], self.b[0])
        if self.exact:
            return total == 1
        return abs(total - 1) <= settings.float_tol

    @property
    def explicit(self) -> bool:
        return all(is_zero(self.A[i][j]) for i in range(self.stages) for j in range(i, self.stages))

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Float copies (A, b, c) for the integrators."""
        if not self._arrays:
            self._arrays["A"] = np.array([[float(x) for x in row] for row in self.A])
            self._arrays["b"] = np.array([float(x) for x in self.b])
            self._arrays["c"] = self._arrays["A"].sum(axis=1)
        return self._arrays["A"], self._arrays["b"], self._arrays["c"]

    def to_float(self) -> "ButcherTableau":
        return ButcherTableau(
            tuple(tuple(float(x) for x in row) for row in self.A),
            tuple(float(x) for x in self.b),
            self.name,
        )

    def to_string(self) -> str:
        width = max(len(format_scalar(x)) for x in list(self.c) + [x for r in self.A for x in r] + list(self.b))
        cell = lambda x: format_scalar(x).rjust(width)
        lines = [f"{self.name}" if self.name else "tableau"]
        for ci, row in zip(self.c, self.A):
            lines.append(f"{cell(ci)} | " + " ".join(cell(x) for x in row))
        lines.append("-" * (width + 2) + "+" + "-" * ((width + 1) * self.stages))
        lines.append(" " * width + " | " + " ".join(cell(x) for x in self.b))
        return "\n".join(lines)


def _coerce(x) -> Scalar:
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


# elementary weights


def stage_weights(
    A: Sequence[Sequence], b: Sequence, trees: Sequence[Tree]
) -> Dict[Tree, object]:
    """ψ(τ) by the (ψᵢD)/ψᵢ recursion over the stages.

    Works for any ring elements supporting + and * (exact scalars, floats,
    numpy arrays); ``trees`` must be closed under taking subtrees and ordered
    by size.
    """
    s = len(b)
    nonzero = [[j for j in range(s) if not is_zero(A[i][j])] for i in range(s)]
    used_b = [i for i in range(s) if not is_zero(b[i])]
    internal: Dict[Tree, List] = {}
    values: Dict[Tree, object] = {}
    for tree in trees:
        # (ψᵢD)(τ) = Π ψᵢ(children); (ψᵢD)(•) = 1
        derivative = []
        for i in range(s):
            d = 1
            for child in tree.children:
                d = d * internal[child][i]
            derivative.append(d)
        internal[tree] = [_dot(A[i], derivative, nonzero[i]) for i in range(s)]
        values[tree] = _dot(b, derivative, used_b)
    return values


def _dot(row: Sequence, vector: Sequence, support: Sequence[int]):
    total = 0
    for j in support:
        total = total + row[j] * vector[j]
    return total


def elementary_weights(T: ButcherTableau, N: Optional[int] = None) -> Character:
    """The character ψ of ``T`` up to degree N (Def. of elementary weights)."""
    N = N or settings.degree
    values = stage_weights(T.A, T.b, trees_up_to(N))
    return Character.build(values, N, T.name)


def _labelled(tree: Tree) -> List[Tuple[int, int]]:
    edges: List[Tuple[int, int]] = []
    counter = [0]

    def visit(node: Tree) -> int:
        index = counter[0]
        counter[0] += 1
        for child in node.children:
            edges.append((index, visit(child)))
        return index

    visit(tree)
    return edges


def elementary_weight_closed_form(T: ButcherTableau, tree: Tree) -> Scalar:
    """ψ(τ) = Σ over index assignments of b_{root} Π_{(u,v)∈E} a_{u v}."""
    edges = _labelled(tree)
    total: Scalar = 0
    for idx in product(range(T.stages), repeat=tree.size):
        term = T.b[idx[0]]
        for u, v in edges:
            term = term * T.A[idx[u]][idx[v]]
            if is_zero(term):
                break
        total = total + term
    return total


# derived tableaux


def adjoint_tableau(T: ButcherTableau) -> ButcherTableau:
    """a*ᵢⱼ = b_{s+1−j} − a_{s+1−i,s+1−j}, b*ⱼ = b_{s+1−j}."""
    s = T.stages
    A = tuple(
        tuple(T.b[s - 1 - j] - T.A[s - 1 - i][s - 1 - j] for j in range(s)) for i in range(s)
    )
    b = tuple(T.b[s - 1 - j] for j in range(s))
    return ButcherTableau(A, b, f"{T.name}*")


def compose_tableaux(T1: ButcherTableau, T2: ButcherTableau, theta: Scalar = Fraction(1, 2)) -> ButcherTableau:
    """T1 over θh followed by T2 over (1−θ)h; θ = 1 runs both over h."""
    if not 0 < theta <= 1:
        raise InvalidTheta(f"theta must lie in (0, 1], got {theta}")
    s1, s2 = T1.stages, T2.stages
    if theta == 1:
        w1, w2 = 1, 1
    else:
        w1, w2 = theta, 1 - theta
    zero = T1.b[0] * 0
    rows = []
    for i in range(s1):
        rows.append(tuple(w1 * x for x in T1.A[i]) + (zero,) * s2)
    for i in range(s2):
        rows.append(tuple(w1 * x for x in T1.b) + tuple(w2 * x for x in T2.A[i]))
    b = tuple(w1 * x for x in T1.b) + tuple(w2 * x for x in T2.b)
    return ButcherTableau(tuple(rows), b, f"{T2.name}.{T1.name}")


def squared_symmetric_component(T: ButcherTableau) -> ButcherTableau:
    """Ψ∘Ψ* over half steps: the adjoint first, then the method."""
    return compose_tableaux(adjoint_tableau(T), T, Fraction(1, 2))


def is_symmetric_tableau(T: ButcherTableau) -> bool:
    """Entrywise check of a_{s+1−i,s+1−j} + a_ij = b_{s+1−j} = b_j."""
    s = T.stages
    for j in range(s):
        if T.b[s - 1 - j] != T.b[j]:
            return False
        for i in range(s):
            if T.A[s - 1 - i][s - 1 - j] + T.A[i][j] != T.b[j]:
                return False
    return True


def tableau_from_mapping(data: Mapping) -> ButcherTableau:
    return ButcherTableau.from_rows(data["A"], data["b"], data.get("name", ""))
