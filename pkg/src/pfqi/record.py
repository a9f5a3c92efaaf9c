"""Experiment record: everything needed to evaluate one run in one frame."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import numpy as np

from pfqi import constants
from pfqi.baseline import Baseline, unit_baseline_array
from pfqi.bounds import AlignmentProfile
from pfqi.kinematics import (
    CMB_DIRECTION,
    DEFAULT_CONSTANTS,
    EquatorialDirection,
    Epoch,
    FrameVelocity,
    OrbitalConstants,
    compose_galilean,
    earth_sun_velocity,
    frame_relative_to_lab,
    site_spin_velocity,
    spin_velocity_array,
    sun_cmb_velocity,
)


@dataclass(frozen=True)
class FrameSpec:
    """Candidate preferred frame: velocity of the Sun relative to it."""

    name: str
    speed: float
    direction: EquatorialDirection

    def __post_init__(self):
        if not 0 <= self.speed < constants.C:
            raise ValueError(f"frame speed {self.speed} m/s must lie in [0, c)")

    @classmethod
    def cmb(cls) -> "FrameSpec":
        return cls("cmb", constants.CMB_SPEED, CMB_DIRECTION)

    def sun_velocity(self) -> FrameVelocity:
        return sun_cmb_velocity(self.direction, self.speed, f"Sun relative to {self.name}")


@dataclass(frozen=True)
class ExperimentRecord:
    baseline: Baseline
    start_utc: datetime
    end_utc: datetime
    alignment: AlignmentProfile
    fringe_period: float
    frame: FrameSpec = field(default_factory=FrameSpec.cmb)
    consts: OrbitalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        for name in ("start_utc", "end_utc"):
            value = getattr(self, name)
            if value.tzinfo is None:
                object.__setattr__(self, name, value.replace(tzinfo=timezone.utc))
        if not self.end_utc > self.start_utc:
            raise ValueError("end_utc must be after start_utc")
        if not self.fringe_period > 0:
            raise ValueError("fringe_period must be positive")
        if self.baseline.consts != self.consts:
            object.__setattr__(self, "baseline", replace(self.baseline, consts=self.consts))

    @property
    def duration(self) -> float:
        return (self.end_utc - self.start_utc).total_seconds()

    @property
    def epoch(self) -> Epoch:
        return Epoch(self.start_utc)

    @property
    def theta0(self) -> float:
        return self.epoch.theta0(self.consts)

    def with_frame(self, frame: FrameSpec) -> "ExperimentRecord":
        return replace(self, frame=frame)

    def lab_velocity_parts(self, t: float = 0.0) -> list[FrameVelocity]:
        """Spin, orbital and Sun-frame terms of the lab velocity at time ``t``."""
        b = self.baseline
        spin = site_spin_velocity(b.a.latitude, b.phi0 + self.consts.omega_d * t, self.consts)
        return [spin, earth_sun_velocity(self.epoch, self.consts), self.frame.sun_velocity()]

    def lab_velocity(self, t: float = 0.0) -> FrameVelocity:
        v = compose_galilean(self.lab_velocity_parts(t))
        return FrameVelocity(v.vx, v.vy, v.vz, f"lab relative to {self.frame.name}")

    def frame_velocity(self, t: float = 0.0) -> FrameVelocity:
        return frame_relative_to_lab(self.lab_velocity(t))

    def frame_velocity_array(self, t) -> np.ndarray:
        """Frame-relative-to-lab velocity at each time in ``t``, shape (n, 3)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        parts = self.lab_velocity_parts(0.0)
        compose_galilean(parts)  # regime check
        b = self.baseline
        spin = spin_velocity_array(b.a.latitude, b.phi0 + self.consts.omega_d * t, self.consts)
        steady = parts[1].as_array() + parts[2].as_array()
        return -(spin + steady)

    def r_array(self, t) -> np.ndarray:
        return constants.C * self.alignment.tau(t, self.duration) / self.baseline.d_ab

    def beta_x_array(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        e = unit_baseline_array(self.baseline, t)
        return np.einsum("ij,ij->i", self.frame_velocity_array(t), e) / constants.C

    def max_beta_rate(self, step: float = 10.0) -> float:
        """Largest |d beta_x / dt| over the run (1/s), by central differences."""
        n = max(int(math.floor(self.duration / step)), 2)
        t = np.linspace(0.0, self.duration, n + 1)
        return float(np.max(np.abs(np.gradient(self.beta_x_array(t), t))))
