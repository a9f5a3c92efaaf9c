"""Velocity of the laboratory relative to a candidate preferred frame.

Coordinates are fixed equatorial: z along the Earth's rotation axis (north),
x towards the vernal point, y completing a right-handed system. The lab
velocity is the Galilean sum of three contributions: site around the Earth's
centre (spin), Earth around the Sun (orbit), Sun relative to the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from typing import Iterable

import numpy as np

from pfqi import constants
from pfqi.errors import EpochOutOfRangeError, GalileanRegimeError, InvalidSpeedError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EquatorialDirection:
    """Sky direction as right ascension / declination (radians)."""

    right_ascension: float
    declination: float

    def __post_init__(self):
        if not (-math.pi / 2 <= self.declination <= math.pi / 2):
            raise ValueError(f"declination {self.declination} outside [-pi/2, pi/2]")
        object.__setattr__(self, "right_ascension", self.right_ascension % TWO_PI)

    @classmethod
    def from_hours_degrees(cls, ra_hours: float, dec_deg: float) -> "EquatorialDirection":
        return cls(math.radians(ra_hours * 15.0), math.radians(dec_deg))

    @property
    def azimuth(self) -> float:
        """Polar-coordinate azimuth measured from the vernal point (= RA)."""
        return self.right_ascension

    @property
    def polar_angle(self) -> float:
        """Angle from the north celestial pole (= pi/2 - declination)."""
        return math.pi / 2 - self.declination

    def unit_vector(self) -> np.ndarray:
        phi, theta = self.azimuth, self.polar_angle
        return np.array(
            [math.cos(phi) * math.sin(theta), math.sin(phi) * math.sin(theta), math.cos(theta)]
        )


CMB_DIRECTION = EquatorialDirection.from_hours_degrees(constants.CMB_RA_HOURS, constants.CMB_DEC_DEG)


@dataclass(frozen=True)
class FrameVelocity:
    """Velocity (m/s) in equatorial-vernal coordinates, tagged "X relative to Y"."""

    vx: float
    vy: float
    vz: float
    label: str = ""

    def __post_init__(self):
        comps = (self.vx, self.vy, self.vz)
        if not all(math.isfinite(v) for v in comps):
            raise InvalidSpeedError(f"non-finite velocity component in {comps}")
        if math.hypot(*comps) >= constants.C:
            raise InvalidSpeedError(f"|v| = {math.hypot(*comps):.6g} m/s is not below c")

    @classmethod
    def from_array(cls, v, label: str = "") -> "FrameVelocity":
        return cls(float(v[0]), float(v[1]), float(v[2]), label)

    @classmethod
    def zero(cls, label: str = "") -> "FrameVelocity":
        return cls(0.0, 0.0, 0.0, label)

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz])

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy, self.vz)


@dataclass(frozen=True)
class OrbitalConstants:
    """Rates and lengths entering the orbital and spin terms.

    ``orbit_model`` selects the Earth-Sun velocity vector: ``"published"``
    is the closed form used for the Geneva analysis; ``"ecliptic"`` is the
    prograde tangent of a circular orbit lying in the ecliptic plane. The two
    share the z component and differ in the sign of x and y.
    """

    year: float = constants.TROPICAL_YEAR
    theta_e: float = constants.ECLIPTIC_INCLINATION
    D_earth_sun: float = constants.EARTH_SUN_DISTANCE
    R_earth: float = constants.EARTH_RADIUS
    sidereal_day: float = constants.SIDEREAL_DAY
    orbit_model: str = "published"

    def __post_init__(self):
        for name in ("year", "theta_e", "D_earth_sun", "R_earth", "sidereal_day"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.orbit_model not in ("published", "ecliptic"):
            raise ValueError(f"unknown orbit_model {self.orbit_model!r}")

    @property
    def omega_y(self) -> float:
        """Orbital angular rate (rad/s)."""
        return TWO_PI / self.year

    @property
    def omega_d(self) -> float:
        """Sidereal rotation rate (rad/s)."""
        return TWO_PI / self.sidereal_day


DEFAULT_CONSTANTS = OrbitalConstants()


# Spring equinoxes 1990-2030 (UTC). Uniform spacing of one tropical year from
# the 2000-03-20 07:35 UTC equinox; within ~20 min of the true instants over
# the whole range, i.e. under 4e-4 rad in the orbital angle.
_EQUINOX_ANCHOR = datetime(2000, 3, 20, 7, 35, tzinfo=timezone.utc)
SPRING_EQUINOXES = tuple(
    _EQUINOX_ANCHOR + timedelta(seconds=k * constants.TROPICAL_YEAR) for k in range(-10, 31)
)


def _as_utc(instant: datetime) -> datetime:
    if instant.tzinfo is None:
        return instant.replace(tzinfo=timezone.utc)
    return instant.astimezone(timezone.utc)


def last_spring_equinox(instant: datetime) -> datetime:
    instant = _as_utc(instant)
    if not SPRING_EQUINOXES[0] <= instant < SPRING_EQUINOXES[-1] + timedelta(
        seconds=constants.TROPICAL_YEAR
    ):
        raise EpochOutOfRangeError(f"{instant.isoformat()} outside the equinox table (1990-2030)")
    past = [eq for eq in SPRING_EQUINOXES if eq <= instant]
    return past[-1]


@dataclass(frozen=True)
class Epoch:
    """A UTC instant plus the time elapsed since the preceding spring equinox."""

    utc_instant: datetime
    delta_t_equinox: float = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "utc_instant", _as_utc(self.utc_instant))
        if self.delta_t_equinox is None:
            eq = last_spring_equinox(self.utc_instant)
            object.__setattr__(self, "delta_t_equinox", (self.utc_instant - eq).total_seconds())
        if not 0.0 <= self.delta_t_equinox < constants.TROPICAL_YEAR:
            raise ValueError(f"delta_t_equinox {self.delta_t_equinox} s outside one tropical year")

    def theta0(self, consts: OrbitalConstants = DEFAULT_CONSTANTS) -> float:
        """Orbital angle swept since the spring equinox, omega_y * delta_t."""
        return consts.omega_y * self.delta_t_equinox


def sun_cmb_velocity(
    direction: EquatorialDirection = CMB_DIRECTION,
    speed: float = constants.CMB_SPEED,
    label: str = "Sun relative to CMB",
) -> FrameVelocity:
    """Velocity of the Sun relative to a frame, given the apex direction.

    A zero speed yields the zero vector (frame co-moving with the Sun).
    """
    if speed < 0 or speed >= constants.C:
        raise InvalidSpeedError(f"speed {speed} m/s must lie in [0, c)")
    return FrameVelocity.from_array(speed * direction.unit_vector(), label)


def earth_sun_velocity(epoch: Epoch, consts: OrbitalConstants = DEFAULT_CONSTANTS) -> FrameVelocity:
    """Orbital velocity of the Earth (circular orbit), frozen at the epoch.

    The in-run advance of the orbital angle is neglected: a run lasts hours.
    """
    th0 = epoch.theta0(consts)
    scale = consts.omega_y * consts.D_earth_sun
    s, c = math.sin(th0), math.cos(th0)
    flip = 1.0 if consts.orbit_model == "published" else -1.0
    v = scale * np.array(
        [-flip * s, flip * c * math.cos(consts.theta_e), -c * math.sin(consts.theta_e)]
    )
    return FrameVelocity.from_array(v, "Earth relative to Sun")


def spin_velocity_array(latitude: float, azimuth, consts: OrbitalConstants = DEFAULT_CONSTANTS):
    """Vectorized spin velocity; ``azimuth`` may be an array. Returns (..., 3)."""
    azimuth = np.asarray(azimuth, dtype=float)
    speed = consts.omega_d * consts.R_earth * math.cos(latitude)
    return speed * np.stack([-np.sin(azimuth), np.cos(azimuth), np.zeros_like(azimuth)], axis=-1)


def site_spin_velocity(
    latitude: float, hour_angle_of_vernal_point: float, consts: OrbitalConstants = DEFAULT_CONSTANTS
) -> FrameVelocity:
    """Eastward velocity of a site on the rotating Earth.

    :param latitude: geographic latitude (rad)
    :param hour_angle_of_vernal_point: azimuth of the site's meridian measured
        from the vernal point (local sidereal angle, rad)
    """
    if abs(latitude) > math.pi / 2:
        raise ValueError(f"latitude {latitude} outside [-pi/2, pi/2]")
    v = spin_velocity_array(latitude, hour_angle_of_vernal_point, consts)
    return FrameVelocity.from_array(v, "site relative to Earth")


def compose_galilean(parts: Iterable[FrameVelocity]) -> FrameVelocity:
    """Plain vector sum of slow velocities; refuses anything at or above 0.01 c."""
    parts = list(parts)
    total = [0.0, 0.0, 0.0]
    for p in parts:
        if p.speed >= constants.GALILEAN_LIMIT:
            raise GalileanRegimeError(f"{p.label or 'part'}: {p.speed:.6g} m/s >= 0.01 c")
        total[0] += p.vx
        total[1] += p.vy
        total[2] += p.vz
    return FrameVelocity(*total, label=" + ".join(p.label for p in parts))


def frame_relative_to_lab(v_lab_rel_frame: FrameVelocity) -> FrameVelocity:
    label = v_lab_rel_frame.label
    if label.count(" relative to ") == 1:
        a, b = label.split(" relative to ")
        label = f"{b} relative to {a}"
    elif label:
        label = f"-({label})"
    return replace(
        v_lab_rel_frame,
        vx=-v_lab_rel_frame.vx,
        vy=-v_lab_rel_frame.vy,
        vz=-v_lab_rel_frame.vz,
        label=label,
    )

