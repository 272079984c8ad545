import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_PATH = Path(__file__).parents[2]

MAX_DEGREE = 10

logger = logging.getLogger(__name__)


@dataclass
class NavigatorMixin:
    path_root: Path = PROJECT_PATH
    path_data: Path = path_root / "data"
    path_output: Path = path_root / "output"

    def find_file(
        self,
        fname: Union[str, Path],
        base: Optional[Path] = None,
    ) -> Optional[Path]:
        if (fpath := Path(fname)).exists():
            return fpath
        base = base or self.path_data
        if not base.exists():
            logger.error(f"No file found for '{fname}' (missing {base})")
            return None
        files = list(base.rglob(f"*{fname}*", case_sensitive=False))
        if len(files) > 1:
            logger.warning(f"Multiple files found for '{fname}': {files}")
        for path in files:
            if path.is_file():
                logger.info(f"Found file for '{fname}': {path}")
                return path
        logger.error(f"No file found for '{fname}'")
        return None


class AlgebraMixin:
    degree: int = Field(default=9)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1)
    seed: int = Field(default=0)


class SolverMixin:
    implicit_tol: float = Field(default=1e-14)
    implicit_max_iter: int = Field(default=100)
    implicit_damping: float = Field(default=1.0)
    float_tol: float = Field(default=1e-10)
    reference_rtol: float = Field(default=1e-12)
    reference_atol: float = Field(default=1e-12)


class StabilityMixin:
    raster_re: Tuple[float, float] = Field(default=(-6.0, 6.0))
    raster_im: Tuple[float, float] = Field(default=(-6.0, 6.0))
    raster_resolution: int = Field(default=600)
    a_stability_margin: float = Field(default=1e-12)
    root_residual: float = Field(default=1e-10)


class EesMixin:
    ees_bracket: Tuple[float, float] = Field(default=(-0.4, 0.45))
    ees_grid_step: float = Field(default=1e-3)
    ees_golden_tol: float = Field(default=1e-6)


class ProjectSettings(
    BaseSettings, NavigatorMixin, AlgebraMixin, SolverMixin, StabilityMixin, EesMixin
):
    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_prefix="BSF_", extra="ignore"
    )

    log_level: int = logging.INFO
    extended: bool = False

    @field_validator("degree")
    @classmethod
    def _check_degree(cls, value: int) -> int:
        if not 1 <= value <= MAX_DEGREE:
            raise ValueError(f"degree must lie in 1..{MAX_DEGREE}, got {value}")
        if value > 9:
            logger.warning(
                f"degree {value} requested: memo tables grow roughly 2.5x per degree"
            )
        return value


settings = ProjectSettings()

logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s - %(levelname)s - %(message)s",
)
