"""Physical constants and defaults (SI units throughout)."""

import math

C = 299_792_458.0  # m/s

DAY = 86_400.0
SIDEREAL_DAY = 86_164.1
TROPICAL_YEAR = 365.2422 * DAY

ECLIPTIC_INCLINATION = math.radians(23.5)
EARTH_SUN_DISTANCE = 1.495_978_707e11  # m, 1 au
EARTH_RADIUS = 6.371e6  # m, mean radius

# Sun relative to the CMB rest frame (dipole apex).
CMB_SPEED = 371e3
CMB_RA_HOURS = 11.20
CMB_DEC_DEG = -7.22

# Composition by plain vector addition is refused above this speed.
GALILEAN_LIMIT = 0.01 * C
