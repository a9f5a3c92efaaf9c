"""Two-station geometry: the rotating A->B unit vector and its frame projection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from pfqi import constants
from pfqi.errors import DegenerateBaselineError
from pfqi.kinematics import DEFAULT_CONSTANTS, Epoch, FrameVelocity, OrbitalConstants

_J2000 = datetime(2000, 1, 1, 12, 0, tzinfo=timezone.utc)


@dataclass(frozen=True)
class Station:
    name: str
    latitude: float  # rad, north positive
    longitude: float  # rad, east positive

    def __post_init__(self):
        if abs(self.latitude) > math.pi / 2:
            raise ValueError(f"{self.name}: latitude {self.latitude} outside [-pi/2, pi/2]")

    @property
    def colatitude(self) -> float:
        return math.pi / 2 - self.latitude


@dataclass(frozen=True)
class Baseline:
    """Stations A and B, detector separation and A's sidereal angle at t=0.

    ``d_ab`` is the physical detector separation; only the direction of the
    baseline is taken from the station coordinates.
    """

    a: Station
    b: Station
    d_ab: float
    phi0: float
    consts: OrbitalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        if not self.d_ab > 0:
            raise ValueError(f"d_ab must be positive, got {self.d_ab}")
        if (self.a.latitude, self.a.longitude) == (self.b.latitude, self.b.longitude):
            raise DegenerateBaselineError(f"stations {self.a.name} and {self.b.name} coincide")

    @property
    def delta_longitude(self) -> float:
        return self.b.longitude - self.a.longitude

    def swapped(self) -> "Baseline":
        """Same baseline seen from B: phi0 moves to B's meridian."""
        return Baseline(self.b, self.a, self.d_ab, self.phi0 + self.delta_longitude, self.consts)


@dataclass(frozen=True)
class BaselineSample:
    t: float
    e_x: np.ndarray
    beta_x: float


def unit_baseline_array(baseline: Baseline, t) -> np.ndarray:
    """Vectorized A->B unit vector; returns shape (len(t), 3) or (3,) for scalar t."""
    t = np.asarray(t, dtype=float)
    th_a, th_b = baseline.a.colatitude, baseline.b.colatitude
    phi_a = baseline.phi0 + baseline.consts.omega_d * t
    phi_b = phi_a + baseline.delta_longitude

    sa, sb = math.sin(th_a), math.sin(th_b)
    # squared chord, haversine form (no cancellation for nearby stations)
    n_sq = 4.0 * (math.sin(0.5 * (th_a - th_b)) ** 2
                  + sa * sb * math.sin(0.5 * baseline.delta_longitude) ** 2)
    if n_sq <= 0.0:
        raise DegenerateBaselineError("stations coincide")
    norm = math.sqrt(n_sq)

    # differences via sum-to-product so short baselines keep full precision
    half_dl = math.sin(0.5 * baseline.delta_longitude)
    d_sin = 2.0 * math.cos(0.5 * (th_a + th_b)) * math.sin(0.5 * (th_b - th_a))  # sb - sa
    d_cos = -2.0 * math.sin(0.5 * (th_a + th_b)) * math.sin(0.5 * (th_b - th_a))  # cb - ca
    phi_mid = 0.5 * (phi_a + phi_b)
    ex = (-2.0 * sb * np.sin(phi_mid) * half_dl + d_sin * np.cos(phi_a)) / norm
    ey = (2.0 * sb * np.cos(phi_mid) * half_dl + d_sin * np.sin(phi_a)) / norm
    ez = np.full_like(ex, d_cos / norm)
    return np.stack([ex, ey, ez], axis=-1)


def unit_baseline(baseline: Baseline, t: float) -> np.ndarray:
    """Unit vector from A's detector to B's detector at ``t`` seconds into the run.

    Station azimuths advance with sidereal rotation, B offset from A by the
    signed longitude difference; colatitudes are fixed.
    """
    return unit_baseline_array(baseline, float(t))


def beta_x(baseline: Baseline, t: float, v_frame_rel_lab: FrameVelocity) -> float:
    """Projection of the frame velocity on the baseline, in units of c."""
    e = unit_baseline(baseline, t)
    return float(np.dot(v_frame_rel_lab.as_array(), e) / constants.C)


def sample(baseline: Baseline, t: float, v_frame_rel_lab: FrameVelocity) -> BaselineSample:
    e = unit_baseline(baseline, t)
    return BaselineSample(t, e, float(np.dot(v_frame_rel_lab.as_array(), e) / constants.C))


def greenwich_sidereal_angle(instant: datetime) -> float:
    """Greenwich mean sidereal angle (rad), low-precision linear form.

    GMST = 280.46061837 deg + 360.98564736629 deg * (JD_UT - 2451545.0), i.e.
    days from J2000.0 (2000-01-01 12:00 UT). Good to well under 1e-4 rad for
    decades around J2000; UT1-UTC is ignored.
    """
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=timezone.utc)
    days = (instant - _J2000).total_seconds() / constants.DAY
    deg = 280.46061837 + 360.98564736629 * days
    return math.radians(deg % 360.0)


def vernal_hour_angle(a: Station, epoch: Epoch) -> float:
    """Angle from the vernal point to the meridian of ``a`` at the epoch (rad, [0, 2pi))."""
    return (greenwich_sidereal_angle(epoch.utc_instant) + a.longitude) % (2.0 * math.pi)
