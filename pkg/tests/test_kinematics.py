import math
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfqi import constants
from pfqi.errors import EpochOutOfRangeError, GalileanRegimeError, InvalidSpeedError
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
    last_spring_equinox,
    site_spin_velocity,
    sun_cmb_velocity,
)

GENEVA_START = datetime(1999, 6, 1, 15, 30, tzinfo=timezone.utc)

small = st.floats(-1e5, 1e5, allow_nan=False)
velocities = st.builds(FrameVelocity, small, small, small)


def test_cmb_direction_polar_angles():
    assert math.degrees(CMB_DIRECTION.azimuth) == pytest.approx(168.0)
    assert math.degrees(CMB_DIRECTION.polar_angle) == pytest.approx(97.22)


def test_sun_cmb_components(golden):
    v = sun_cmb_velocity()
    np.testing.assert_allclose(v.as_array(), golden["v_sun_cmb"], rtol=1e-12)
    np.testing.assert_allclose(v.as_array() / 1e3, [-360.0, 76.5, -46.6], atol=0.1)
    assert v.speed == pytest.approx(371e3, rel=1e-12)


def test_sun_cmb_pole():
    v = sun_cmb_velocity(EquatorialDirection(0.0, math.pi / 2), 1234.0)
    np.testing.assert_allclose(v.as_array(), [0, 0, 1234.0], atol=1e-9)


@pytest.mark.parametrize("speed", [constants.C, 2 * constants.C, -1.0])
def test_sun_cmb_invalid_speed(speed):
    with pytest.raises(InvalidSpeedError):
        sun_cmb_velocity(CMB_DIRECTION, speed)


@given(st.floats(0, 2 * math.pi), st.floats(-math.pi / 2, math.pi / 2), st.floats(1.0, 1e7))
def test_sun_cmb_magnitude(ra, dec, speed):
    v = sun_cmb_velocity(EquatorialDirection(ra, dec), speed)
    assert v.speed == pytest.approx(speed, rel=1e-12)


def test_direction_validation():
    with pytest.raises(ValueError):
        EquatorialDirection(0.0, 1.6)
    assert EquatorialDirection(-0.5, 0.0).right_ascension == pytest.approx(2 * math.pi - 0.5)


def test_equinox_table():
    eq = last_spring_equinox(GENEVA_START)
    assert eq.year == 1999 and eq.month == 3 and eq.day == 21
    assert abs((eq - datetime(1999, 3, 21, 1, 46, tzinfo=timezone.utc)).total_seconds()) < 60
    with pytest.raises(EpochOutOfRangeError):
        Epoch(datetime(1985, 1, 1))


def test_theta0_geneva():
    theta0 = Epoch(GENEVA_START).theta0()
    assert theta0 == pytest.approx(1.248, abs=1e-3)
    assert theta0 == pytest.approx(1.24, abs=0.02)


@given(st.integers(0, 8 * 365), st.floats(0, 86400))
def test_theta0_periodic_in_tropical_year(days, secs):
    t = datetime(1992, 1, 1, tzinfo=timezone.utc) + timedelta(days=days, seconds=secs)
    later = t + timedelta(seconds=constants.TROPICAL_YEAR)
    assert Epoch(t).theta0() == pytest.approx(Epoch(later).theta0(), abs=1e-6)


def test_earth_sun_at_equinox():
    v = earth_sun_velocity(Epoch(datetime(2000, 1, 1), delta_t_equinox=0.0))
    e = DEFAULT_CONSTANTS.theta_e
    np.testing.assert_allclose(v.as_array() / v.speed, [0.0, math.cos(e), -math.sin(e)], atol=1e-15)


def test_earth_sun_geneva(golden):
    v = earth_sun_velocity(Epoch(GENEVA_START))
    np.testing.assert_allclose(v.as_array(), golden["v_earth_sun"], rtol=1e-9)
    assert v.speed / 1e3 == pytest.approx(30, abs=0.5)


def test_ecliptic_orbit_model_lies_in_ecliptic():
    consts = OrbitalConstants(orbit_model="ecliptic")
    e = consts.theta_e
    pole = np.array([0.0, -math.sin(e), math.cos(e)])
    for day in (0, 50, 100, 200, 300):
        ep = Epoch(datetime(2000, 1, 1), delta_t_equinox=day * 86400.0)
        assert abs(np.dot(earth_sun_velocity(ep, consts).as_array(), pole)) < 1e-9
    # published and ecliptic forms share the polar component
    ep = Epoch(GENEVA_START)
    assert earth_sun_velocity(ep, consts).vz == pytest.approx(earth_sun_velocity(ep).vz)


@given(st.floats(0, constants.TROPICAL_YEAR * 0.999999))
def test_earth_sun_magnitude_constant(dt):
    v = earth_sun_velocity(Epoch(datetime(2000, 1, 1), delta_t_equinox=dt))
    c = DEFAULT_CONSTANTS
    assert v.speed == pytest.approx(c.omega_y * c.D_earth_sun, rel=1e-12)


def test_spin_magnitude_geneva():
    # 43 deg is Geneva's colatitude; at the actual latitude the speed is ~0.32 km/s
    v = site_spin_velocity(math.radians(46.25), 0.7)
    assert v.speed / 1e3 == pytest.approx(0.31, abs=0.015)
    v43 = site_spin_velocity(math.radians(43), 0.7)
    expected = 2 * math.pi * constants.EARTH_RADIUS * math.cos(math.radians(43)) / constants.SIDEREAL_DAY
    assert v43.speed == pytest.approx(expected, rel=1e-12)


def test_spin_pole_and_equator():
    assert site_spin_velocity(math.pi / 2, 1.0).speed < 1e-9
    v = site_spin_velocity(0.0, 0.0)
    np.testing.assert_allclose(v.as_array() / v.speed, [0, 1, 0], atol=1e-15)


@given(st.floats(-math.pi / 2, math.pi / 2), st.floats(-10, 10))
def test_spin_has_no_polar_component(lat, phi):
    assert abs(site_spin_velocity(lat, phi).vz) < 1e-9


def test_compose_identity_and_guard():
    z = compose_galilean([FrameVelocity.zero()] * 3)
    assert (z.vx, z.vy, z.vz) == (0.0, 0.0, 0.0)
    with pytest.raises(GalileanRegimeError):
        compose_galilean([FrameVelocity(0.011 * constants.C, 0, 0)])


def test_compose_geneva_speed(golden):
    ep = Epoch(GENEVA_START)
    v = compose_galilean([site_spin_velocity(math.radians(46.25), golden["phi0"]),
                          earth_sun_velocity(ep), sun_cmb_velocity()])
    np.testing.assert_allclose(v.as_array(), golden["v_lab_cmb_t0"], rtol=1e-9)


@given(velocities, velocities)
def test_compose_commutative(a, b):
    ab, ba = compose_galilean([a, b]), compose_galilean([b, a])
    assert (ab.vx, ab.vy, ab.vz) == (ba.vx, ba.vy, ba.vz)


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
def test_compose_associative(x, y, z):
    # dyadic components make float addition exact, so grouping cannot matter
    a, b, c = (FrameVelocity(v / 8, -v / 4, v / 2) for v in (x, y, z))
    left = compose_galilean([compose_galilean([a, b]), c])
    right = compose_galilean([a, compose_galilean([b, c])])
    assert (left.vx, left.vy, left.vz) == (right.vx, right.vy, right.vz)


def test_frame_relative_to_lab():
    v = frame_relative_to_lab(FrameVelocity(1, 2, 3, "lab relative to CMB"))
    assert (v.vx, v.vy, v.vz) == (-1, -2, -3)
    assert v.label == "CMB relative to lab"
    z = frame_relative_to_lab(FrameVelocity.zero())
    assert z.speed == 0.0


@given(velocities)
def test_negation_involution(v):
    w = frame_relative_to_lab(frame_relative_to_lab(v))
    assert (w.vx, w.vy, w.vz) == (v.vx, v.vy, v.vz)


def test_frame_velocity_rejects_superluminal():
    with pytest.raises(InvalidSpeedError):
        FrameVelocity(constants.C, 0, 0)
    with pytest.raises(InvalidSpeedError):
        FrameVelocity(float("nan"), 0, 0)
