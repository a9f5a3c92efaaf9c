"""Minimum influence speed in lab and boosted frames, and bounds derived from it.

Conventions: the x axis runs from A's detector to B's (so x_B - x_A = d_AB > 0)
and tau = t_A - t_B, positive when A fires after B in the lab. With
r = c tau / d_AB and beta_x the frame velocity projected on the baseline,

    v_min(beta) = -c (1 + r beta_x) / (r + beta_x),

which diverges where the two detections are simultaneous in the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.optimize import bisect

from pfqi.constants import C
from pfqi.errors import NotSpaceLikeError, WindowTooLongError

if TYPE_CHECKING:
    from pfqi.record import ExperimentRecord

SIMULTANEITY_EPS = 1e-15
CROSSING_XTOL = 1e-4  # s


class _Unbounded:
    """Sentinel for an infinite minimum speed (simultaneous detections)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __str__(self):
        return "unbounded"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


@dataclass(frozen=True)
class AlignmentProfile:
    """Detection-time offset t_A - t_B, drifting linearly from tau_i to tau_f."""

    tau_i: float
    tau_f: float
    delta_tau: float

    def __post_init__(self):
        if not self.delta_tau > 0:
            raise ValueError("delta_tau must be positive")

    def tau(self, t, duration: float):
        t = np.asarray(t, dtype=float)
        return self.tau_i + (self.tau_f - self.tau_i) * t / duration


@dataclass(frozen=True)
class SetupState:
    r: float
    beta_x: float

    def __post_init__(self):
        if abs(self.r) >= 1:
            raise NotSpaceLikeError(f"|r| = {abs(self.r)} >= 1: detections are not space-like")


@dataclass(frozen=True)
class AlignmentClass:
    quality: str  # "good" or "bad"
    attainable: Optional[float] = None  # m/s, bad case only


@dataclass(frozen=True)
class BoundSeries:
    """Sampled |v_min|(t) for one run.

    ``v_qi_min`` is signed and clamped to +-ceiling; ``capped`` marks samples
    whose true magnitude reached the ceiling (or diverged).
    """

    t: np.ndarray
    r: np.ndarray
    beta_x: np.ndarray
    v_qi_min: np.ndarray
    capped: np.ndarray
    crossings: list = field(default_factory=list)
    ceiling: float = math.inf
    bound: Optional[float] = None

    def __post_init__(self):
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("sample times must be strictly increasing")
        if self.bound is not None and self.bound > self.ceiling:
            raise ValueError("bound exceeds the localization ceiling")

    @property
    def abs_v(self) -> np.ndarray:
        return np.abs(self.v_qi_min)

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class PlanInput:
    d_ab: float
    achievable_alignment: float  # m, c * tau
    delta_tau: float
    fringe_period: float
    frame_speed: float
    beta_rate: Optional[float] = None  # max |d beta_x/dt| (1/s); default frame_speed/c * omega_d
    omega_d: float = 2.0 * math.pi / 86_164.1

    def __post_init__(self):
        for name in ("d_ab", "achievable_alignment", "delta_tau", "fringe_period"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.frame_speed < 0:
            raise ValueError("frame_speed must be non-negative")


@dataclass(frozen=True)
class PlanResult:
    required_r: float
    achieved_r: float
    good_alignment: bool
    ceiling: float
    rotation_limited_bound: object  # m/s or UNBOUNDED
    attainable_bound: float
    required_fringe_time: object  # s or UNBOUNDED (no rotation)

    @property
    def simultaneity_reachable(self) -> bool:
        return self.required_r > 0


def v_qi_min_lab(d_ab: float, tau: float):
    """Lab-frame minimum speed (x_A - x_B)/(t_A - t_B) = -d_AB/tau.

    Returns ``UNBOUNDED`` for simultaneous detections.
    """
    if not d_ab > 0:
        raise ValueError("d_ab must be positive")
    if tau == 0:
        return UNBOUNDED
    return -d_ab / tau


def v_qi_min_boosted(r: float, beta_x: float):
    """Minimum speed in a frame moving at beta_x c along the baseline.

    :param r: alignment c*tau/d_AB, must satisfy |r| < 1
    :param beta_x: frame velocity projected on the baseline, in units of c
    :return: signed speed (m/s) or ``UNBOUNDED`` when r + beta_x vanishes
    """
    if abs(r) >= 1:
        raise NotSpaceLikeError(f"|r| = {abs(r)} >= 1: detections are not space-like")
    if abs(beta_x) >= 1:
        raise ValueError(f"|beta_x| = {abs(beta_x)} >= 1")
    den = r + beta_x
    if abs(den) <= SIMULTANEITY_EPS:
        return UNBOUNDED
    return -C * (1.0 + r * beta_x) / den


def v_qi_min_boosted_array(r, beta_x):
    """Vectorized form; simultaneous samples come back as NaN with a True mask.

    Returns ``(v, unbounded_mask)``.
    """
    r = np.asarray(r, dtype=float)
    beta_x = np.asarray(beta_x, dtype=float)
    if np.any(np.abs(r) >= 1):
        raise NotSpaceLikeError("|r| >= 1: detections are not space-like")
    den = r + beta_x
    unbounded = np.abs(den) <= SIMULTANEITY_EPS
    safe = np.where(unbounded, 1.0, den)
    v = np.where(unbounded, np.nan, -C * (1.0 + r * beta_x) / safe)
    return v, unbounded


def classify_alignment(r_max: float, beta_x_max: float) -> AlignmentClass:
    """Good alignment iff simultaneity in the frame is reachable (r_max <= beta_x_max)."""
    if r_max < 0 or beta_x_max < 0:
        raise ValueError("inputs must be non-negative")
    if r_max > beta_x_max:
        return AlignmentClass("bad", C / r_max)
    return AlignmentClass("good")


def localization_ceiling(d_ab: float, delta_tau: float) -> float:
    """Largest resolvable |v_min| (m/s) given the photons' timing localization."""
    if not (d_ab > 0 and delta_tau > 0):
        raise ValueError("inputs must be positive")
    return d_ab / delta_tau


def sample_times(duration: float, step: float) -> np.ndarray:
    if not step > 0:
        raise ValueError("step must be positive")
    if not duration > 0:
        raise ValueError("empty window")
    n = int(math.floor(duration / step + 1e-9))
    return step * np.arange(n + 1)


def _series_at(record: "ExperimentRecord", t: np.ndarray):
    r = record.r_array(t)
    beta = record.beta_x_array(t)
    ceiling = localization_ceiling(record.baseline.d_ab, record.alignment.delta_tau)
    v, unbounded = v_qi_min_boosted_array(r, beta)
    capped = unbounded | (np.abs(np.nan_to_num(v, nan=np.inf)) >= ceiling)
    sign = np.sign(np.nan_to_num(v, nan=-1.0))
    v = np.where(capped, sign * ceiling, v)
    return r, beta, v, capped, ceiling


def abs_v_qi_min_at(record: "ExperimentRecord", t) -> np.ndarray:
    """|v_min|(t) clamped at the ceiling, for arbitrary times."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.abs(_series_at(record, t)[2])


def find_crossings(record: "ExperimentRecord", t: np.ndarray, s: np.ndarray) -> list:
    """Roots of r + beta_x located by sign change between samples, refined by bisection."""

    def f(x):
        return float(record.r_array(x) + record.beta_x_array(x)[0])

    roots = []
    for i in range(len(t) - 1):
        if s[i] == 0.0:
            roots.append(float(t[i]))
        elif s[i] * s[i + 1] < 0:
            roots.append(float(bisect(f, t[i], t[i + 1], xtol=CROSSING_XTOL)))
    if len(t) and s[-1] == 0.0:
        roots.append(float(t[-1]))
    return roots


def evaluate_series(record: "ExperimentRecord", step: float = 10.0) -> BoundSeries:
    """Sample r(t), beta_x(t) and v_min(t) across the run and locate crossings."""
    t = sample_times(record.duration, step)
    r, beta, v, capped, ceiling = _series_at(record, t)
    crossings = find_crossings(record, t, r + beta)
    return BoundSeries(t, r, beta, v, capped, crossings, ceiling)


def extract_bound(series: BoundSeries, fringe_period: float) -> float:
    """Conservative lower bound on the influence speed (m/s).

    Any speed that was below |v_min| throughout a half-fringe would have
    erased the correlations for that half-fringe. The bound is therefore the
    largest, over all half-fringe windows, of the smallest |v_min| inside the
    window. Samples are clamped at the localization ceiling.
    """
    if not len(series):
        raise ValueError("empty series")
    if not fringe_period > 0:
        raise ValueError("fringe_period must be positive")
    abs_v = series.abs_v
    if len(series) == 1:
        k = 0
    else:
        step = float(series.t[1] - series.t[0])
        k = int(math.floor(0.5 * fringe_period / step + 1e-9))
    if k + 1 > len(abs_v):
        raise WindowTooLongError(
            f"half-fringe window {0.5 * fringe_period:g} s longer than the series"
        )
    window_min = sliding_window_view(abs_v, k + 1).min(axis=1)
    return float(min(window_min.max(), series.ceiling))


def analyze(record: "ExperimentRecord", step: float = 10.0) -> BoundSeries:
    """evaluate_series followed by extract_bound at the record's fringe period."""
    series = evaluate_series(record, step)
    return replace(series, bound=extract_bound(series, record.fringe_period))


def plan(inp: PlanInput) -> PlanResult:
    """Alignment, fringe-time and bound requirements for a planned run.

    Near a simultaneity crossing, r + beta_x drifts at roughly the maximum
    rate of beta_x, so over a half-fringe window centred on the crossing the
    smallest |v_min| sits a quarter period away:
    ``c / (rate * fringe_period / 4)``. Setting that equal to the ceiling
    gives the fringe time needed to reach the localization limit.
    """
    required_r = inp.frame_speed / C
    achieved_r = inp.achievable_alignment / inp.d_ab
    ceiling = localization_ceiling(inp.d_ab, inp.delta_tau)
    rate = inp.beta_rate if inp.beta_rate is not None else required_r * inp.omega_d
    if rate > 0:
        rotation = C / (rate * inp.fringe_period / 4.0)
        fringe_time = 4.0 * C / (rate * ceiling)
        attainable = min(ceiling, rotation)
    else:
        rotation = UNBOUNDED
        fringe_time = UNBOUNDED
        attainable = ceiling
    if achieved_r > required_r:
        attainable = min(attainable, C / achieved_r)
    return PlanResult(
        required_r=required_r,
        achieved_r=achieved_r,
        good_alignment=achieved_r <= required_r and required_r > 0,
        ceiling=ceiling,
        rotation_limited_bound=rotation,
        attainable_bound=attainable,
        required_fringe_time=fringe_time,
    )
