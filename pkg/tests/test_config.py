import math

import pytest

from pfqi import units
from pfqi.bounds import UNBOUNDED
from pfqi.config import dump_config, load_config, parse_config
from pfqi.constants import C
from pfqi.errors import ConfigError


@pytest.mark.parametrize(
    "text, expected",
    [
        ("10.6 km", 10600.0),
        ("2 mm", 0.002),
        ("1.5e3 m", 1500.0),
        ("3 um", 3e-6),
    ],
)
def test_lengths(text, expected):
    assert units.parse_length(text) == pytest.approx(expected)


@pytest.mark.parametrize(
    "text, expected",
    [("90 ps", 90e-12), ("1 h", 3600.0), ("50 s", 50.0), ("2 min", 120.0), ("1 d", 86400.0)],
)
def test_times(text, expected):
    assert units.parse_time(text) == pytest.approx(expected)


def test_speeds():
    assert units.parse_speed("371 km/s") == 371e3
    assert units.parse_speed("1e3 c") == pytest.approx(1e3 * C)


@pytest.mark.parametrize(
    "text, deg",
    [
        ("46d15m N", 46.25),
        ("46d10m S", -46.1666666667),
        ("6d09m E", 6.15),
        ("6d05m W", -6.0833333333),
        ("-7.22 deg", -7.22),
        ("11.20h", 168.0),
        ("43d45m", 43.75),
        ("46°15′N", 46.25),
        ("46.25 N", 46.25),
        ("0d04m", 4 / 60),
        ("1d0m36s", 1.01),
    ],
)
def test_angles(text, deg):
    hemi = "EW" if text.strip()[-1] in "EW" else "NS"
    assert math.degrees(units.parse_angle(text, hemi)) == pytest.approx(deg)


def test_angle_in_rad():
    assert units.parse_angle("2.247 rad") == 2.247


def test_tau_as_path_length():
    assert units.parse_tau("2 mm") == pytest.approx(6.67e-12, rel=1e-3)
    assert units.parse_tau("2 mm") == 0.002 / C
    assert units.parse_tau("6 ps") == pytest.approx(6e-12)


@pytest.mark.parametrize("bad", ["", "abc", "10 furlongs", "12"])
def test_bad_lengths(bad):
    with pytest.raises(ValueError):
        units.parse_length(bad)


def test_latitude_range():
    with pytest.raises(ValueError):
        units.parse_latitude("91°")
    with pytest.raises(ValueError):
        units.parse_latitude("46d15m E")


def test_geneva_fixture(geneva, geneva_cfg):
    rec = geneva
    assert rec.baseline.d_ab == 10600.0
    assert rec.alignment.tau_i == pytest.approx(0.002 / C)
    assert rec.alignment.tau_f == pytest.approx(0.014 / C)
    assert rec.alignment.delta_tau == pytest.approx(90e-12)
    assert rec.fringe_period == 3600.0
    assert rec.duration == 15 * 3600
    assert rec.frame.name == "cmb" and rec.frame.speed == 371e3
    assert math.degrees(rec.frame.direction.right_ascension) == pytest.approx(168.0)
    assert math.degrees(rec.frame.direction.declination) == pytest.approx(-7.22)
    assert rec.baseline.a.name == "Bellevue"
    assert geneva_cfg.simulation.v_hyp is UNBOUNDED


def test_round_trip(geneva_cfg, geneva_text):
    again = load_config(dump_config(geneva_cfg))
    assert again == geneva_cfg
    assert load_config(dump_config(again)) == again


def test_round_trip_custom_frame(geneva_text):
    text = geneva_text.replace(
        "preset = cmb",
        "name = test\nspeed = 600 km/s\nright_ascension = 3h\ndeclination = 20 deg",
    ) + "\n[plan]\nachievable_alignment = 1 mm\n\n[simulation]\nseed = 5\nv_hyp = 1e4 c\n"
    # duplicate [simulation] sections are a config error
    with pytest.raises(ConfigError):
        load_config(text)
    text = text.replace("[simulation]\nbase_rate", "[sim_old]\nbase_rate")
    cfg = load_config(text)
    assert cfg.record.frame.name == "test"
    assert cfg.simulation.seed == 5
    assert cfg.plan.achievable_alignment == 0.001
    assert load_config(dump_config(cfg)) == cfg


def _edit(text, old, new):
    assert old in text
    return text.replace(old, new)


@pytest.mark.parametrize(
    "old, new, field",
    [
        ("latitude = 46d15m N", "latitude = 91°", "station_a.latitude"),
        ("distance = 10.6 km", "distance = ten km", "baseline.distance"),
        ("delta_tau = 90 ps\n", "", "alignment.delta_tau"),
        ("tau_i = 2 mm", "tau_i = 20 km", "alignment.tau_i"),
        ("end = 1999-06-02T06:30:00Z", "end = 1999-06-01T06:30:00Z", "experiment.end"),
        ("preset = cmb", "preset = ether", "frame.preset"),
        ("start = 1999-06-01T15:30:00Z", "start = 1980-06-01T15:30:00Z", "experiment.start"),
        ("visibility = 0.9", "visibility = 1.5", "simulation.visibility"),
    ],
)
def test_errors_name_the_field(geneva_text, old, new, field):
    with pytest.raises(ConfigError) as info:
        parse_config(_edit(geneva_text, old, new))
    assert info.value.field.startswith(field)


def test_constants_override(geneva_text):
    cfg = load_config(geneva_text + "\n[constants]\nsidereal_day = 86400 s\norbit_model = ecliptic\n")
    assert cfg.record.consts.sidereal_day == 86400.0
    assert cfg.record.baseline.consts.orbit_model == "ecliptic"


def test_phi0_override(geneva_text):
    cfg = load_config(geneva_text.replace("distance = 10.6 km", "distance = 10.6 km\nphi0 = 2.247 rad"))
    assert cfg.record.baseline.phi0 == 2.247
    assert load_config(dump_config(cfg)) == cfg
