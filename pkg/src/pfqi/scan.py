"""Run the single-frame analysis over a grid of candidate frame velocities."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pfqi import constants
from pfqi.bounds import analyze, classify_alignment
from pfqi.errors import DomainError
from pfqi.kinematics import EquatorialDirection
from pfqi.record import ExperimentRecord, FrameSpec


@dataclass(frozen=True)
class FrameGrid:
    speeds: tuple
    directions: tuple

    def __post_init__(self):
        object.__setattr__(self, "speeds", tuple(self.speeds))
        object.__setattr__(self, "directions", tuple(self.directions))
        if not self.speeds or not self.directions:
            raise ValueError("frame grid is empty")
        if any(not 0 <= v < constants.C for v in self.speeds):
            raise ValueError("grid speeds must lie in [0, c)")

    def cells(self):
        return [(v, d) for v in self.speeds for d in self.directions]

    def __len__(self):
        return len(self.speeds) * len(self.directions)


def sky_lattice(n_dec: int = 12, n_ra: int = 24) -> tuple:
    """Equal-area declination bands (uniform in sin dec) times uniform RA.

    Cell centres only; the poles themselves are never on the lattice.
    """
    if n_dec < 1 or n_ra < 1:
        raise ValueError("lattice needs at least one band and one meridian")
    sin_dec = -1.0 + (2.0 * np.arange(n_dec) + 1.0) / n_dec
    decs = np.arcsin(sin_dec)
    ras = 2.0 * math.pi * (np.arange(n_ra) + 0.5) / n_ra
    return tuple(EquatorialDirection(float(ra), float(dec)) for dec in decs for ra in ras)


def default_grid(speeds: Sequence[float] = (constants.CMB_SPEED,), n_dec=12, n_ra=24) -> FrameGrid:
    return FrameGrid(tuple(speeds), sky_lattice(n_dec, n_ra))


@dataclass(frozen=True)
class ScanRow:
    index: int
    speed: float
    right_ascension: float
    declination: float
    alignment: Optional[str]
    n_crossings: Optional[int]
    bound: Optional[float]
    ceiling: Optional[float]
    error: str = ""


def analyze_cell(record: ExperimentRecord, index: int, speed: float,
                 direction: EquatorialDirection, step: float = 10.0) -> ScanRow:
    """One grid cell; domain failures come back as an error row."""
    frame = FrameSpec(f"cell{index}", speed, direction)
    try:
        series = analyze(record.with_frame(frame), step)
        cls = classify_alignment(float(np.max(np.abs(series.r))), float(np.max(np.abs(series.beta_x))))
        return ScanRow(index, speed, direction.right_ascension, direction.declination,
                       cls.quality, len(series.crossings), series.bound, series.ceiling)
    except DomainError as exc:
        return ScanRow(index, speed, direction.right_ascension, direction.declination,
                       None, None, None, None, f"{type(exc).__name__}: {exc}")


def _cell_job(args):
    return analyze_cell(*args)


def scan(record: ExperimentRecord, grid: FrameGrid, step: float = 10.0, workers: int = 1) -> list:
    """Analyze every cell; rows come back ordered by cell index regardless of ``workers``."""
    jobs = [(record, i, v, d, step) for i, (v, d) in enumerate(grid.cells())]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_cell_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_cell_job(j) for j in jobs]
    return sorted(rows, key=lambda row: row.index)
