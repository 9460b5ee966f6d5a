"""
Sampling fields onto rectangular cell-centred grids, the figure presets, and
bit-stable CSV / JSON export.
"""

import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum, IntEnum
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd

from utils.analysis import exact_real_part_cartesian, paraxial_field
from utils.core_field import SphericalPoint, eval_field
from utils.errors import DomainError, GridExportError
from utils.serialize import format_number

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["x", "y", "re", "im"]
DEFAULT_2D_SIZE = 256
DEFAULT_1D_SIZE = 4096


class Figure(IntEnum):
    FIG3 = 3
    FIG4 = 4
    FIG5 = 5
    FIG6 = 6


class FieldKind(str, Enum):
    EXACT = "exact"
    PARAXIAL = "paraxial"
    SPHERICAL = "spherical"


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise DomainError(f"axis {self.name!r} needs finite lo < hi, got ({self.lo}, {self.hi})")
        if self.n < 1:
            raise DomainError(f"axis {self.name!r} needs at least one cell, got {self.n}")

    def centers(self):
        """Cell centres lo + (i + 0.5)*(hi - lo)/n; the endpoints are never sampled."""
        return self.lo + (np.arange(self.n) + 0.5) * (self.hi - self.lo) / self.n

    def as_dict(self):
        return {"name": self.name, "lo": self.lo, "hi": self.hi, "n": self.n}


@dataclass(frozen=True)
class FieldGrid:
    x_axis: Axis
    y_axis: Axis
    values: np.ndarray
    mask: np.ndarray
    generator: str

    def __post_init__(self):
        shape = (self.y_axis.n, self.x_axis.n)
        if self.values.shape != shape or self.mask.shape != shape:
            raise DomainError(f"grid arrays must have shape {shape}, got {self.values.shape}")

    @property
    def masked_count(self):
        return int(self.mask.sum())


class GridSamples(NamedTuple):
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    mask: np.ndarray


def sample_grid(fn, x_axis, y_axis, generator="custom", threads=1):
    """Evaluate ``fn(x, y) -> complex`` at every cell centre.

    Domain errors (the library's own, ``ValueError`` from math, or any
    ``ArithmeticError``) and non-finite values become masked cells. Rows may be
    sampled on a thread pool; the result does not depend on ``threads``.
    """
    xs, ys = x_axis.centers(), y_axis.centers()

    def sample_row(j):
        row = np.zeros(x_axis.n, dtype=complex)
        row_mask = np.zeros(x_axis.n, dtype=bool)
        y = float(ys[j])
        for i, x in enumerate(xs):
            try:
                value = complex(fn(float(x), y))
            except (ValueError, ArithmeticError) as exc:
                logger.debug("masked cell (%r, %r): %s", float(x), y, exc)
                row_mask[i] = True
                continue
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                row_mask[i] = True
                continue
            row[i] = value
        return row, row_mask

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(sample_row, range(y_axis.n)))
    else:
        rows = [sample_row(j) for j in range(y_axis.n)]

    values = np.array([row for row, _ in rows]).reshape(y_axis.n, x_axis.n)
    mask = np.array([row_mask for _, row_mask in rows]).reshape(y_axis.n, x_axis.n)
    if mask.any():
        logger.info("%d of %d cells masked in %s", int(mask.sum()), mask.size, generator)
    return FieldGrid(x_axis=x_axis, y_axis=y_axis, values=values, mask=mask, generator=generator)


# --- Figure presets ---

# (x range, y range, two-dimensional?)
_FIGURE_RANGES = {
    Figure.FIG3: ((0.0, 1.0), (0.0, 1000.0), True),
    Figure.FIG4: ((0.0, 700.0), (0.0, 100000.0), True),
    Figure.FIG5: ((0.0, 1.0), (0.0, 1000.0), False),
    Figure.FIG6: ((0.0, 1.0), (0.0, 100000.0), False),
}


def _beam_profile(k):
    # caption form ln(x/2y) read as ln(x/(2y)), matching ln(r/(2Z))
    return lambda x, y: math.log(x / (2.0 * y)) * math.cos(k * y) / (k * y)


def _spherical_wave(k):
    return lambda x, y: math.cos(k * y) / (k * y)


def _as_figure(figure):
    try:
        if not isinstance(figure, Figure):
            figure = Figure(int(str(figure).lower().replace("fig", "")))
    except ValueError:
        raise DomainError(f"unknown figure {figure!r}; expected one of 3, 4, 5, 6") from None
    return figure


def figure_shape(figure, n_x=None, n_y=None):
    """Cell counts (n_x, n_y) a figure preset samples once defaults are filled in."""
    figure = _as_figure(figure)
    if _FIGURE_RANGES[figure][2]:
        n_x = DEFAULT_2D_SIZE if n_x is None else n_x
        n_y = DEFAULT_2D_SIZE if n_y is None else n_y
        if n_x < 2 or n_y < 2:
            raise DomainError(f"grid needs at least 2 cells per sampled axis, got {n_x}x{n_y}")
    else:
        n_x = 1
        n_y = DEFAULT_1D_SIZE if n_y is None else n_y
        if n_y < 2:
            raise DomainError(f"grid needs at least 2 cells per sampled axis, got {n_x}x{n_y}")
    return n_x, n_y


def figure_grid(figure, k=1.0, n_x=None, n_y=None, threads=1):
    figure = _as_figure(figure)
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")

    (x_lo, x_hi), (y_lo, y_hi), two_dimensional = _FIGURE_RANGES[figure]
    n_x, n_y = figure_shape(figure, n_x, n_y)
    if two_dimensional:
        fn, formula = _beam_profile(k), "ln(x/(2y))*cos(k*y)/(k*y)"
    else:
        fn, formula = _spherical_wave(k), "cos(k*y)/(k*y)"

    generator = f"fig{figure.value}:{formula};k={format_number(k)}"
    return sample_grid(
        fn, Axis("x", x_lo, x_hi, n_x), Axis("y", y_lo, y_hi, n_y), generator, threads
    )


def field_grid(kind, beam, x_axis, y_axis, threads=1):
    """Sample a library field: exact / paraxial over (r, Z), spherical over (R, theta)."""
    kind = FieldKind(kind)
    if kind is FieldKind.EXACT:
        fn = lambda x, y: exact_real_part_cartesian(beam, x, 0.0, y)  # noqa: E731
    elif kind is FieldKind.PARAXIAL:
        fn = lambda x, y: paraxial_field(beam, x, 0.0, y)  # noqa: E731
    else:
        fn = lambda x, y: eval_field(beam, SphericalPoint(x, y))[0]  # noqa: E731
    generator = f"{kind.value}:a={format_number(beam.a)};k={format_number(beam.k)}"
    return sample_grid(fn, x_axis, y_axis, generator, threads)


# --- Export ---


def _write(payload, destination):
    if destination is None:
        return payload
    try:
        if hasattr(destination, "write"):
            destination.write(payload)
        else:
            Path(destination).write_bytes(payload)
    except OSError as exc:
        raise GridExportError(f"could not write grid to {destination}: {exc}") from exc
    return payload


def export_csv(grid, destination=None):
    """UTF-8 CSV, header x,y,re,im, one row per cell (y outer, x inner); masked re/im are empty."""
    xs = [format_number(x) for x in grid.x_axis.centers()]
    ys = [format_number(y) for y in grid.y_axis.centers()]
    rows = []
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            if grid.mask[j, i]:
                rows.append((x, y, "", ""))
            else:
                value = grid.values[j, i]
                rows.append((x, y, format_number(value.real), format_number(value.imag)))
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    payload = frame.to_csv(index=False, lineterminator="\n").encode("utf-8")
    return _write(payload, destination)


def load_csv(source):
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    frame = pd.read_csv(source, dtype=str, keep_default_na=False, encoding="utf-8")
    mask = (frame["re"] == "").to_numpy()
    re = np.array([0.0 if m else float(v) for v, m in zip(frame["re"], mask)])
    im = np.array([0.0 if m else float(v) for v, m in zip(frame["im"], mask)])
    return GridSamples(
        x=frame["x"].map(float).to_numpy(),
        y=frame["y"].map(float).to_numpy(),
        values=re + 1j * im,
        mask=mask,
    )


def export_json(grid, destination=None):
    """Single JSON object: x_axis, y_axis, generator, re, im (null where masked), mask."""
    re = [
        [None if m else float(v.real) for v, m in zip(row, row_mask)]
        for row, row_mask in zip(grid.values, grid.mask)
    ]
    im = [
        [None if m else float(v.imag) for v, m in zip(row, row_mask)]
        for row, row_mask in zip(grid.values, grid.mask)
    ]
    document = {
        "x_axis": grid.x_axis.as_dict(),
        "y_axis": grid.y_axis.as_dict(),
        "generator": grid.generator,
        "re": re,
        "im": im,
        "mask": grid.mask.tolist(),
    }
    payload = (json.dumps(document, allow_nan=False) + "\n").encode("utf-8")
    return _write(payload, destination)


def load_json(source):
    if isinstance(source, bytes):
        document = json.loads(source)
    elif hasattr(source, "read"):
        document = json.load(source)
    else:
        document = json.loads(Path(source).read_text(encoding="utf-8"))
    mask = np.array(document["mask"], dtype=bool)
    re = np.array([[0.0 if v is None else v for v in row] for row in document["re"]], dtype=float)
    im = np.array([[0.0 if v is None else v for v in row] for row in document["im"]], dtype=float)
    return FieldGrid(
        x_axis=Axis(**document["x_axis"]),
        y_axis=Axis(**document["y_axis"]),
        values=re + 1j * im,
        mask=mask,
        generator=document["generator"],
    )
