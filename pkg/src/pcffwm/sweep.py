"""Parameter-space sweep of (pitch, d/pitch) designs.

Each cell gets a ZDW and a group-velocity symmetry bandwidth; cells where
the empirical fit does not apply, or where no ZDW exists, are recorded
with a status instead of being skipped. Cells are independent, so the
sweep optionally fans out over a process pool; assembly is by row-major
cell index, making serial and parallel runs byte-identical.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bsfwm import symmetry_bandwidth
from .errors import ConfigError, DomainError, NotFoundError
from .pcf import DispersionModel, FibreGeometry

__all__ = ["SweepGrid", "CellResult", "SweepResult", "run_sweep", "extract_zdw_contours"]

STATUS_OK = "ok"
STATUS_NO_ZDW = "no-zdw"
STATUS_INVALID = "invalid-domain"
STATUS_TRUNCATED = "truncated"


@dataclass(frozen=True)
class SweepGrid:
    """Inclusive axis ranges with fixed steps, plus the symmetry threshold."""

    pitch_range: tuple[float, float]  # um
    pitch_step: float
    ratio_range: tuple[float, float]
    ratio_step: float
    threshold: float  # m/s

    def __post_init__(self):
        for name, (lo, hi), step in (
            ("pitch", self.pitch_range, self.pitch_step),
            ("ratio", self.ratio_range, self.ratio_step),
        ):
            if not step > 0:
                raise ConfigError(f"{name} step must be positive")
            # a degenerate range (lo == hi) means a single-point axis
            if not lo <= hi:
                raise ConfigError(f"{name} range must be non-empty")

    def pitch_axis(self) -> np.ndarray:
        lo, hi = self.pitch_range
        return np.round(np.arange(lo, hi + self.pitch_step / 2, self.pitch_step), 12)

    def ratio_axis(self) -> np.ndarray:
        lo, hi = self.ratio_range
        return np.round(np.arange(lo, hi + self.ratio_step / 2, self.ratio_step), 12)


@dataclass(frozen=True)
class CellResult:
    pitch: float
    ratio: float
    status: str
    zdw: float | None = None  # um
    bandwidth: float | None = None  # um


@dataclass(frozen=True)
class SweepResult:
    grid: SweepGrid
    cells: tuple  # row-major over (pitch, ratio)

    def field(self, attr: str) -> np.ndarray:
        """2-D array of a per-cell quantity, NaN where absent;
        shape (n_pitch, n_ratio)."""
        p = self.grid.pitch_axis()
        r = self.grid.ratio_axis()
        out = np.full((len(p), len(r)), np.nan)
        for idx, cell in enumerate(self.cells):
            val = getattr(cell, attr)
            if val is not None:
                out[idx // len(r), idx % len(r)] = val
        return out


def _evaluate_cell(args) -> CellResult:
    pitch, ratio, threshold, zdw_window, step_nm = args
    try:
        geometry = FibreGeometry(pitch, ratio)
        model = DispersionModel(geometry)
    except (ValueError, DomainError):
        return CellResult(pitch, ratio, STATUS_INVALID)
    rlo, rhi = model.fits.ratio_range
    if not rlo <= ratio <= rhi:
        return CellResult(pitch, ratio, STATUS_INVALID)
    lo, hi = model.lambda_window()
    if not max(lo, zdw_window[0]) < min(hi, zdw_window[1]):
        return CellResult(pitch, ratio, STATUS_INVALID)
    try:
        span = symmetry_bandwidth(model, threshold, zdw_window, step_nm)
    except NotFoundError:
        return CellResult(pitch, ratio, STATUS_NO_ZDW)
    except DomainError:
        return CellResult(pitch, ratio, STATUS_INVALID)
    status = STATUS_TRUNCATED if span.truncated else STATUS_OK
    return CellResult(pitch, ratio, status, zdw=span.lambda0_um, bandwidth=span.span_um)


def run_sweep(
    grid: SweepGrid,
    zdw_window: tuple[float, float] = (0.4, 2.0),
    step_nm: float = 1.0,
    workers: int = 1,
) -> SweepResult:
    """Evaluate every cell of the grid; deterministic, order-independent."""
    pitches = grid.pitch_axis()
    ratios = grid.ratio_axis()
    jobs = [
        (float(p), float(r), grid.threshold, zdw_window, step_nm)
        for p in pitches
        for r in ratios
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = tuple(pool.map(_evaluate_cell, jobs, chunksize=8))
    else:
        cells = tuple(_evaluate_cell(j) for j in jobs)
    if all(c.status == STATUS_INVALID for c in cells):
        raise ConfigError("sweep grid has no valid cells")
    return SweepResult(grid=grid, cells=cells)


def extract_zdw_contours(result: SweepResult, levels) -> dict:
    """Marching-squares contours of the ZDW field at the requested levels
    (um). Cells without a ZDW are masked; a level outside the field's
    range simply yields no polylines."""
    from skimage import measure

    ok = sum(1 for c in result.cells if c.status in (STATUS_OK, STATUS_TRUNCATED))
    if ok < 4:
        raise ConfigError("need at least 4 cells with a ZDW to contour")
    field_arr = result.field("zdw")
    pitches = result.grid.pitch_axis()
    ratios = result.grid.ratio_axis()
    out = {}
    for level in levels:
        lines = []
        for poly in measure.find_contours(field_arr, float(level)):
            pv = np.interp(poly[:, 0], np.arange(len(pitches)), pitches)
            rv = np.interp(poly[:, 1], np.arange(len(ratios)), ratios)
            lines.append(np.column_stack([pv, rv]))
        out[float(level)] = lines
    return out
