import csv
import logging
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel

from .models import RasterMetadata

logger = logging.getLogger(__name__)


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return path


def write_json(path: Union[str, Path], model: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n")
    logger.info(f"Wrote {path}")
    return path


def write_pgm(path: Union[str, Path], membership: np.ndarray) -> Path:
    """Binary P5 image: members black (0), the rest white (255)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    height, width = membership.shape
    pixels = np.where(membership, 0, 255).astype(np.uint8)
    with path.open("wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
    logger.info(f"Wrote {width}x{height} raster to {path}")
    return path


def read_pgm(path: Union[str, Path]) -> np.ndarray:
    data = Path(path).read_bytes()
    magic, size, maxval, pixels = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError(f"{path} is not an 8-bit binary PGM")
    width, height = map(int, size.split())
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width)


def write_raster(path: Union[str, Path], grid) -> Path:
    """PGM membership image or CSV (z_re, z_im, value), plus a JSON sidecar."""
    path = Path(path)
    if path.suffix == ".pgm":
        write_pgm(path, grid.membership())
    elif path.suffix == ".csv":
        re, im = grid.axes()
        rows = (
            (re[j], im[i], grid.values[i, j])
            for i in range(grid.resolution)
            for j in range(grid.resolution)
        )
        write_csv(path, ["z_re", "z_im", "value"], rows)
    else:
        raise ValueError(f"raster output must end in .pgm or .csv, got {path.name}")
    write_json(path.with_suffix(".json"), RasterMetadata.from_raster(grid))
    return path
