"""Preferred-frame bounds on the speed of quantum information.

Kinematics of a two-station EPR timing experiment seen from a candidate
preferred frame (the CMB rest frame by default): lab velocity composition,
baseline geometry, the boosted minimum influence speed, conservative bound
extraction, frame scans, experiment planning and fringe-collapse simulation.
"""

from pfqi.constants import C
from pfqi.errors import ConfigError, DomainError
from pfqi.kinematics import (
    EquatorialDirection,
    Epoch,
    FrameVelocity,
    OrbitalConstants,
    compose_galilean,
    earth_sun_velocity,
    frame_relative_to_lab,
    site_spin_velocity,
    sun_cmb_velocity,
)
from pfqi.baseline import Baseline, Station, beta_x, unit_baseline, vernal_hour_angle
from pfqi.bounds import (
    UNBOUNDED,
    AlignmentProfile,
    BoundSeries,
    PlanInput,
    classify_alignment,
    evaluate_series,
    extract_bound,
    localization_ceiling,
    plan,
    v_qi_min_boosted,
    v_qi_min_lab,
)
from pfqi.record import ExperimentRecord, FrameSpec

__version__ = "0.1.0"
