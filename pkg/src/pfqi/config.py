"""Sectioned key-value config documents (INI syntax with unit-suffixed values).

Example (the shipped Geneva fixture)::

    [experiment]
    start = 1999-06-01T15:30:00Z
    end = 1999-06-02T06:30:00Z
    fringe_period = 1 h

    [station_a]
    name = Bellevue
    latitude = 46d15m N
    longitude = 6d09m E

    [station_b]
    name = Bernex
    latitude = 46d10m N
    longitude = 6d05m E

    [baseline]
    distance = 10.6 km

    [alignment]
    tau_i = 2 mm
    tau_f = 14 mm
    delta_tau = 90 ps

    [frame]
    preset = cmb

tau is t_A - t_B with A = ``station_a``; a length value is read as c*tau.
Optional sections: ``[constants]``, ``[simulation]``, ``[scan]``, ``[plan]``.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from pfqi import constants, units
from pfqi.baseline import Baseline, Station, vernal_hour_angle
from pfqi.bounds import UNBOUNDED, AlignmentProfile
from pfqi.errors import ConfigError
from pfqi.kinematics import EquatorialDirection, Epoch, OrbitalConstants
from pfqi.record import ExperimentRecord, FrameSpec


@dataclass(frozen=True)
class SimulationSpec:
    base_rate: float = 2.0  # coincidences/s
    visibility: float = 0.9
    bin_width: float = 50.0
    phase: float = 0.0
    v_hyp: object = UNBOUNDED  # m/s or UNBOUNDED
    v_collapse: float = 0.0
    seed: Optional[int] = None


@dataclass(frozen=True)
class ScanSpec:
    speeds: tuple = (constants.CMB_SPEED,)
    n_dec: int = 12
    n_ra: int = 24


@dataclass(frozen=True)
class PlanSpec:
    """Overrides for the planner; unset fields are taken from the record."""

    distance: Optional[float] = None
    achievable_alignment: Optional[float] = None
    delta_tau: Optional[float] = None
    fringe_period: Optional[float] = None
    frame_speed: Optional[float] = None
    beta_rate: Optional[float] = None


@dataclass(frozen=True)
class Config:
    record: ExperimentRecord
    step: float = 10.0
    phi0_override: Optional[float] = None
    simulation: SimulationSpec = field(default_factory=SimulationSpec)
    scan: ScanSpec = field(default_factory=ScanSpec)
    plan: PlanSpec = field(default_factory=PlanSpec)


class _Doc:
    def __init__(self, text):
        self.cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            self.cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError("<document>", f"malformed: {exc}") from exc

    def has(self, section, key=None):
        if not self.cp.has_section(section):
            return False
        return key is None or self.cp.has_option(section, key)

    def get(self, section, key, parser=str, default=...):
        path = f"{section}.{key}"
        if not self.has(section, key) or not self.cp.get(section, key).strip():
            if default is ...:
                raise ConfigError(path, "missing field")
            return default
        raw = self.cp.get(section, key).strip()
        try:
            return parser(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(path, str(exc)) from exc


def parse_instant(text: str) -> datetime:
    value = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


def _speed_or_unbounded(text):
    if text.strip().lower() in ("unbounded", "inf", "infinite", "none"):
        return UNBOUNDED
    return units.parse_speed(text)


def _speed_list(text):
    return tuple(units.parse_speed(part) for part in text.split(",") if part.strip())


def _checked(path, build):
    try:
        return build()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _constants(doc: _Doc) -> OrbitalConstants:
    d = OrbitalConstants()
    s = "constants"
    return _checked(
        s,
        lambda: OrbitalConstants(
            year=doc.get(s, "year", units.parse_time, d.year),
            theta_e=doc.get(s, "ecliptic_inclination", units.parse_angle, d.theta_e),
            D_earth_sun=doc.get(s, "earth_sun_distance", units.parse_length, d.D_earth_sun),
            R_earth=doc.get(s, "earth_radius", units.parse_length, d.R_earth),
            sidereal_day=doc.get(s, "sidereal_day", units.parse_time, d.sidereal_day),
            orbit_model=doc.get(s, "orbit_model", str, d.orbit_model),
        ),
    )


def _station(doc: _Doc, section: str) -> Station:
    name = doc.get(section, "name", str, section)
    lat = doc.get(section, "latitude", units.parse_latitude)
    lon = doc.get(section, "longitude", units.parse_longitude)
    return _checked(f"{section}.latitude", lambda: Station(name, lat, lon))


def _frame(doc: _Doc) -> FrameSpec:
    preset = doc.get("frame", "preset", str, None)
    if preset is not None:
        if preset.lower() != "cmb":
            raise ConfigError("frame.preset", f"unknown preset {preset!r} (known: cmb)")
        return FrameSpec.cmb()
    speed = doc.get("frame", "speed", units.parse_speed)
    ra = doc.get("frame", "right_ascension", units.parse_angle)
    dec = doc.get("frame", "declination", units.parse_angle)
    name = doc.get("frame", "name", str, "custom")
    direction = _checked("frame.declination", lambda: EquatorialDirection(ra, dec))
    return _checked("frame.speed", lambda: FrameSpec(name, speed, direction))


def load_config(text: str) -> Config:
    """Parse a config document into a validated :class:`Config` (SI units)."""
    doc = _Doc(text)
    consts = _constants(doc)
    start = doc.get("experiment", "start", parse_instant)
    end = doc.get("experiment", "end", parse_instant)
    fringe_period = doc.get("experiment", "fringe_period", units.parse_time)
    step = doc.get("experiment", "step", units.parse_time, 10.0)
    if not step > 0:
        raise ConfigError("experiment.step", "must be positive")
    if not end > start:
        raise ConfigError("experiment.end", "must be after experiment.start")
    if not fringe_period > 0:
        raise ConfigError("experiment.fringe_period", "must be positive")

    a = _station(doc, "station_a")
    b = _station(doc, "station_b")
    d_ab = doc.get("baseline", "distance", units.parse_length)
    phi0_override = doc.get("baseline", "phi0", units.parse_angle, None)
    if phi0_override is None:
        phi0 = _checked("experiment.start", lambda: vernal_hour_angle(a, Epoch(start)))
    else:
        phi0 = phi0_override
    baseline = _checked("baseline", lambda: Baseline(a, b, d_ab, phi0, consts))

    tau_i = doc.get("alignment", "tau_i", units.parse_tau)
    tau_f = doc.get("alignment", "tau_f", units.parse_tau, tau_i)
    delta_tau = doc.get("alignment", "delta_tau", units.parse_tau)
    alignment = _checked("alignment.delta_tau", lambda: AlignmentProfile(tau_i, tau_f, delta_tau))
    for key, tau in (("tau_i", tau_i), ("tau_f", tau_f)):
        if abs(constants.C * tau) >= d_ab:
            raise ConfigError(f"alignment.{key}", "|c tau| >= distance: detections not space-like")

    record = _checked(
        "experiment",
        lambda: ExperimentRecord(baseline, start, end, alignment, fringe_period, _frame(doc), consts),
    )
    _checked("experiment.start", lambda: record.epoch)

    sim_defaults = SimulationSpec()
    s = "simulation"
    sim = SimulationSpec(
        base_rate=doc.get(s, "base_rate", units.parse_rate, sim_defaults.base_rate),
        visibility=doc.get(s, "visibility", float, sim_defaults.visibility),
        bin_width=doc.get(s, "bin_width", units.parse_time, sim_defaults.bin_width),
        phase=doc.get(s, "phase", units.parse_angle, sim_defaults.phase),
        v_hyp=doc.get(s, "v_hyp", _speed_or_unbounded, sim_defaults.v_hyp),
        v_collapse=doc.get(s, "v_collapse", float, sim_defaults.v_collapse),
        seed=doc.get(s, "seed", int, None),
    )
    if not 0 < sim.visibility <= 1:
        raise ConfigError("simulation.visibility", "must lie in (0, 1]")
    if not 0 <= sim.v_collapse <= 1:
        raise ConfigError("simulation.v_collapse", "must lie in [0, 1]")
    if not (sim.base_rate > 0 and sim.bin_width > 0):
        raise ConfigError("simulation.base_rate", "rate and bin_width must be positive")
    if sim.v_hyp is not UNBOUNDED and not sim.v_hyp > constants.C:
        raise ConfigError("simulation.v_hyp", "a finite hypothesis speed must exceed c")

    scan_defaults = ScanSpec()
    scan = ScanSpec(
        speeds=doc.get("scan", "speeds", _speed_list, scan_defaults.speeds),
        n_dec=doc.get("scan", "n_dec", int, scan_defaults.n_dec),
        n_ra=doc.get("scan", "n_ra", int, scan_defaults.n_ra),
    )
    if any(not 0 <= v < constants.C for v in scan.speeds):
        raise ConfigError("scan.speeds", "speeds must lie in [0, c)")

    p = "plan"
    plan = PlanSpec(
        distance=doc.get(p, "distance", units.parse_length, None),
        achievable_alignment=doc.get(p, "achievable_alignment", units.parse_length, None),
        delta_tau=doc.get(p, "delta_tau", units.parse_tau, None),
        fringe_period=doc.get(p, "fringe_period", units.parse_time, None),
        frame_speed=doc.get(p, "frame_speed", units.parse_speed, None),
        beta_rate=doc.get(p, "beta_rate", units.parse_rate, None),
    )
    return Config(record, step, phi0_override, sim, scan, plan)


def parse_config(text: str) -> ExperimentRecord:
    return load_config(text).record


def _q(value, unit):
    return f"{value!r} {unit}"


def _iso(instant: datetime) -> str:
    return instant.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def dump_config(cfg: Config) -> str:
    """Serialize back to a document; values are written in SI with full precision."""
    rec = cfg.record
    b = rec.baseline
    c = rec.consts
    cp = configparser.ConfigParser(interpolation=None)
    cp["experiment"] = {
        "start": _iso(rec.start_utc),
        "end": _iso(rec.end_utc),
        "fringe_period": _q(rec.fringe_period, "s"),
        "step": _q(cfg.step, "s"),
    }
    for section, st in (("station_a", b.a), ("station_b", b.b)):
        cp[section] = {
            "name": st.name,
            "latitude": _q(st.latitude, "rad"),
            "longitude": _q(st.longitude, "rad"),
        }
    cp["baseline"] = {"distance": _q(b.d_ab, "m")}
    if cfg.phi0_override is not None:
        cp["baseline"]["phi0"] = _q(cfg.phi0_override, "rad")
    al = rec.alignment
    cp["alignment"] = {
        "tau_i": _q(al.tau_i, "s"),
        "tau_f": _q(al.tau_f, "s"),
        "delta_tau": _q(al.delta_tau, "s"),
    }
    if rec.frame == FrameSpec.cmb():
        cp["frame"] = {"preset": "cmb"}
    else:
        cp["frame"] = {
            "name": rec.frame.name,
            "speed": _q(rec.frame.speed, "m/s"),
            "right_ascension": _q(rec.frame.direction.right_ascension, "rad"),
            "declination": _q(rec.frame.direction.declination, "rad"),
        }
    cp["constants"] = {
        "year": _q(c.year, "s"),
        "sidereal_day": _q(c.sidereal_day, "s"),
        "ecliptic_inclination": _q(c.theta_e, "rad"),
        "earth_sun_distance": _q(c.D_earth_sun, "m"),
        "earth_radius": _q(c.R_earth, "m"),
        "orbit_model": c.orbit_model,
    }
    sim = cfg.simulation
    cp["simulation"] = {
        "base_rate": _q(sim.base_rate, "/s"),
        "visibility": repr(sim.visibility),
        "bin_width": _q(sim.bin_width, "s"),
        "phase": _q(sim.phase, "rad"),
        "v_hyp": "unbounded" if sim.v_hyp is UNBOUNDED else _q(sim.v_hyp, "m/s"),
        "v_collapse": repr(sim.v_collapse),
    }
    if sim.seed is not None:
        cp["simulation"]["seed"] = str(sim.seed)
    cp["scan"] = {
        "speeds": ", ".join(_q(v, "m/s") for v in cfg.scan.speeds),
        "n_dec": str(cfg.scan.n_dec),
        "n_ra": str(cfg.scan.n_ra),
    }
    plan_units = {"distance": "m", "achievable_alignment": "m", "delta_tau": "s",
                  "fringe_period": "s", "frame_speed": "m/s", "beta_rate": "/s"}
    plan_items = {k: _q(getattr(cfg.plan, k), u) for k, u in plan_units.items()
                  if getattr(cfg.plan, k) is not None}
    if plan_items:
        cp["plan"] = plan_items
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def read_config(path) -> Config:
    with open(path, encoding="utf-8") as fh:
        return load_config(fh.read())
