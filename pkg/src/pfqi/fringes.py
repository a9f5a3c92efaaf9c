"""Synthetic coincidence fringes under a finite-influence-speed hypothesis.

If influences travel at ``v_hyp`` in the preferred frame, correlations can
only survive while ``v_hyp >= |v_min(t)|``; elsewhere the fringe visibility
drops to ``v_collapse``. :func:`simulate` produces binned counts for that
scenario and :func:`detect_collapse` looks for the visibility loss in
half-fringe windows.

Random numbers: Philox4x64 keyed by the seed, one uniform per bin in bin
order, Poisson counts by inverse CDF. Bin ``i`` always consumes output ``i``
of the stream, so any contiguous slice of bins can be generated on its own.
"""

from __future__ import annotations

import math
import secrets
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.stats import poisson

from pfqi import constants
from pfqi.baseline import unit_baseline_array
from pfqi.bounds import UNBOUNDED, abs_v_qi_min_at, localization_ceiling, v_qi_min_boosted_array
from pfqi.errors import TooShortError
from pfqi.kinematics import FrameVelocity
from pfqi.record import ExperimentRecord


@dataclass(frozen=True)
class FringeModel:
    base_rate: float = 2.0  # coincidences/s
    visibility_v0: float = 0.9
    fringe_period: float = 3600.0
    bin_width: float = 50.0
    phase_at_t0: float = 0.0
    v_collapse: float = 0.0

    def __post_init__(self):
        if not (self.base_rate > 0 and self.fringe_period > 0 and self.bin_width > 0):
            raise ValueError("rate, fringe_period and bin_width must be positive")
        if not 0 <= self.visibility_v0 <= 1:
            raise ValueError("visibility_v0 must lie in [0, 1]")
        if not 0 <= self.v_collapse <= 1:
            raise ValueError("v_collapse must lie in [0, 1]")


@dataclass(frozen=True)
class InfluenceHypothesis:
    """Finite influence speed (m/s) or ``UNBOUNDED``.

    ``frame`` is an optional constant frame-relative-to-lab velocity that
    replaces the record's own frame when computing |v_min|(t).
    """

    v_hyp: object = UNBOUNDED
    frame: Optional[FrameVelocity] = None

    def __post_init__(self):
        if self.v_hyp is not UNBOUNDED and not self.v_hyp > constants.C:
            raise ValueError("a finite influence speed must exceed c")


@dataclass(frozen=True)
class BinnedCounts:
    t_start: np.ndarray  # s since run start
    counts: np.ndarray
    expected: np.ndarray
    visibility: np.ndarray  # injected V(t)
    bin_width: float
    seed: int
    start_utc: object = None

    def injected_intervals(self, threshold: Optional[float] = None) -> list:
        """Contiguous (t1, t2) spans where the injected visibility was reduced."""
        v0 = float(np.max(self.visibility)) if threshold is None else threshold
        low = self.visibility < v0
        return _runs(self.t_start, self.t_start + self.bin_width, low)


@dataclass(frozen=True)
class CollapseReport:
    windows: list = field(default_factory=list)  # (t_start, t_end, V, sigma_V)
    collapsed: bool = False
    collapse_interval: Optional[tuple] = None
    flagged: list = field(default_factory=list)  # window indices


def _runs(starts, ends, mask) -> list:
    out = []
    i, n = 0, len(mask)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            out.append((float(starts[i]), float(ends[j])))
            i = j + 1
        else:
            i += 1
    return out


def bin_uniforms(seed: int, start: int, stop: int) -> np.ndarray:
    """Uniforms for bins [start, stop) from the seeded Philox stream."""
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(start // 4)  # one counter step yields four 64-bit outputs
    return np.random.Generator(bitgen).random(stop - start + start % 4)[start % 4 :]


def poisson_inverse_cdf(u: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return np.maximum(poisson.ppf(u, lam), 0).astype(np.int64)


def _v_min_for(record: ExperimentRecord, hyp: InfluenceHypothesis, t: np.ndarray) -> np.ndarray:
    if hyp.frame is None:
        return abs_v_qi_min_at(record, t)
    beta = unit_baseline_array(record.baseline, t) @ hyp.frame.as_array() / constants.C
    v, unbounded = v_qi_min_boosted_array(record.r_array(t), beta)
    ceiling = localization_ceiling(record.baseline.d_ab, record.alignment.delta_tau)
    return np.where(unbounded, ceiling, np.minimum(np.abs(np.nan_to_num(v)), ceiling))


def injected_visibility(record, model: FringeModel, hyp: InfluenceHypothesis, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if hyp.v_hyp is UNBOUNDED:
        return np.full(t.shape, model.visibility_v0)
    survives = hyp.v_hyp >= _v_min_for(record, hyp, t)
    return np.where(survives, model.visibility_v0, model.v_collapse)


def expected_counts(model: FringeModel, t_start: np.ndarray, visibility: np.ndarray) -> np.ndarray:
    """Per-bin mean, evaluated at bin centres; never negative since V <= 1."""
    centre = t_start + 0.5 * model.bin_width
    phase = 2.0 * math.pi * centre / model.fringe_period + model.phase_at_t0
    return model.base_rate * model.bin_width * (1.0 + visibility * np.cos(phase))


def simulate(record: ExperimentRecord, model: FringeModel, hyp: InfluenceHypothesis,
             seed: Optional[int] = None) -> BinnedCounts:
    """Binned coincidence counts over the run for the given hypothesis.

    A missing seed is drawn from the OS and recorded in the result.
    """
    if seed is None:
        seed = secrets.randbits(63)
    n_bins = int(math.floor(record.duration / model.bin_width + 1e-9))
    if n_bins < 1:
        raise TooShortError("run shorter than one bin")
    t_start = model.bin_width * np.arange(n_bins)
    vis = injected_visibility(record, model, hyp, t_start + 0.5 * model.bin_width)
    lam = expected_counts(model, t_start, vis)
    counts = poisson_inverse_cdf(bin_uniforms(seed, 0, n_bins), lam)
    return BinnedCounts(t_start, counts, lam, vis, model.bin_width, seed, record.start_utc)


def fit_windows(t_start: np.ndarray, counts: np.ndarray, model: FringeModel):
    """Weighted least squares of a + b cos + c sin over every half-fringe window.

    Returns (window starts, ends, visibility, sigma) arrays.
    """
    n = int(round(0.5 * model.fringe_period / model.bin_width))
    if n < 3 or len(counts) < n or len(counts) * model.bin_width < model.fringe_period:
        raise TooShortError(
            f"need at least one full fringe of bins ({model.fringe_period:g} s), got "
            f"{len(counts) * model.bin_width:g} s"
        )
    centre = t_start + 0.5 * model.bin_width
    phase = 2.0 * math.pi * centre / model.fringe_period + model.phase_at_t0
    X = np.stack([np.ones_like(phase), np.cos(phase), np.sin(phase)], axis=-1)  # (N, 3)
    y = counts.astype(float)
    w = 1.0 / np.maximum(y, 1.0)  # Poisson variance ~ counts

    # Per-window normal equations via sliding sums.
    XtWX = np.einsum("ni,nj,n->nij", X, X, w)
    XtWy = np.einsum("ni,n->ni", X, w * y)
    A = sliding_window_view(XtWX, n, axis=0).sum(axis=-1)  # (M, 3, 3)
    B = sliding_window_view(XtWy, n, axis=0).sum(axis=-1)  # (M, 3)
    cov = np.linalg.inv(A)
    coef = np.einsum("mij,mj->mi", cov, B)
    a, b, c = coef[:, 0], coef[:, 1], coef[:, 2]
    amp = np.hypot(b, c)
    vis = amp / a

    # Delta method: dV/d(a, b, c).
    safe_amp = np.where(amp > 0, amp, 1.0)
    grad = np.stack(
        [-amp / a**2, np.where(amp > 0, b / safe_amp, 1.0) / a, np.where(amp > 0, c / safe_amp, 0.0) / a],
        axis=-1,
    )
    sigma = np.sqrt(np.einsum("mi,mij,mj->m", grad, cov, grad))
    starts = t_start[: len(vis)]
    ends = t_start[n - 1 :] + model.bin_width
    return starts, ends, vis, sigma


def detect_collapse(counts: BinnedCounts, model: FringeModel, n_sigma: float = 3.0) -> CollapseReport:
    """Flag half-fringe windows whose visibility is below V0/2 by ``n_sigma``."""
    starts, ends, vis, sigma = fit_windows(counts.t_start, counts.counts, model)
    flagged = vis + n_sigma * sigma < 0.5 * model.visibility_v0
    windows = [(float(s), float(e), float(v), float(sg)) for s, e, v, sg in zip(starts, ends, vis, sigma)]
    idx = np.flatnonzero(flagged)
    interval = None
    if len(idx):
        interval = (float(starts[idx].min()), float(ends[idx].max()))
    return CollapseReport(windows, bool(len(idx)), interval, [int(i) for i in idx])
