import logging
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..algebra.character import Character
from ..algebra.scalar import format_scalar, parse_scalar
from ..algebra.tree import format_tree, parse_tree
from ..errors import EXIT_CHECK_FAILURE, EXIT_OK
from ..schemes.tableau import ButcherTableau

logger = logging.getLogger(__name__)


class TableauModel(BaseModel):
    """File form of a Butcher tableau; c is derived on load."""

    name: str = ""
    A: List[List[str]]
    b: List[str]

    @classmethod
    def from_tableau(cls, T: ButcherTableau) -> "TableauModel":
        return cls(
            name=T.name,
            A=[[format_scalar(x) for x in row] for row in T.A],
            b=[format_scalar(x) for x in T.b],
        )

    def to_tableau(self) -> ButcherTableau:
        return ButcherTableau.from_rows(
            [[parse_scalar(x) for x in row] for row in self.A],
            [parse_scalar(x) for x in self.b],
            self.name,
        )


class CharacterModel(BaseModel):
    name: str = ""
    truncation: int
    values: Dict[str, str]

    @classmethod
    def from_character(cls, psi: Character) -> "CharacterModel":
        return cls(
            name=psi.name,
            truncation=psi.truncation,
            values={format_tree(t): format_scalar(v) for t, v in psi.sorted_items()},
        )

    def to_character(self) -> Character:
        values = {parse_tree(k): parse_scalar(v) for k, v in self.values.items()}
        return Character.build(values, self.truncation, self.name)


Status = Literal["pass", "fail", "skipped", "documented-discrepancy"]


class CheckResult(BaseModel):
    check_id: str
    description: str
    expected: str = ""
    actual: str = ""
    status: Status
    elapsed: float = 0.0

    def to_string(self) -> str:
        out = f"[{self.status.upper():>7}] {self.check_id}: {self.description} ({self.elapsed:.3f}s)\n"
        if self.status in ("fail", "documented-discrepancy"):
            out += " " * 4 + f"expected: {self.expected}\n"
            out += " " * 4 + f"actual:   {self.actual}\n"
        return out


class VerifyReport(BaseModel):
    prefix: Optional[str] = None
    checks: List[CheckResult] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.checks)

    def __getitem__(self, idx: int) -> CheckResult:
        return self.checks[idx]

    def __iter__(self):
        return iter(self.checks)

    def count(self, status: Status) -> int:
        return sum(1 for c in self.checks if c.status == status)

    @property
    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def exit_code(self) -> int:
        return EXIT_CHECK_FAILURE if self.failed else EXIT_OK

    def to_string(self) -> str:
        out = "".join(check.to_string() for check in self.checks)
        out += (
            f"\n{self.count('pass')} passed, {self.count('fail')} failed, "
            f"{self.count('skipped')} skipped, "
            f"{self.count('documented-discrepancy')} documented discrepancies\n"
        )
        return out


class RasterMetadata(BaseModel):
    """JSON sidecar of a raster: rows run from max to min imaginary part."""

    kind: Literal["domain", "star"]
    scheme: str
    re_range: Tuple[float, float]
    im_range: Tuple[float, float]
    resolution: int
    membership: str

    model_config = ConfigDict(extra="allow")

    @classmethod
    def from_raster(cls, grid) -> "RasterMetadata":
        return cls(
            kind=grid.kind,
            scheme=grid.scheme,
            re_range=grid.re_range,
            im_range=grid.im_range,
            resolution=grid.resolution,
            membership="|R(z)| < 1" if grid.kind == "domain" else "|R(z)| - |exp(z)| > 0",
        )


class SchemeReport(BaseModel):
    """Summary printed by ``scheme check``."""

    name: str
    degree: int
    order: str
    antisymmetric_order: str
    symmetric: bool
    consistent: bool
    explicit: bool

    def to_string(self) -> str:
        yes = lambda flag: "yes" if flag else "no"
        return (
            f"scheme: {self.name}\n"
            f"degree: {self.degree}\n"
            f"ord: {self.order}\n"
            f"ord+: {self.antisymmetric_order}\n"
            f"symmetric: {yes(self.symmetric)}\n"
            f"consistent: {yes(self.consistent)}\n"
            f"explicit: {yes(self.explicit)}\n"
        )
