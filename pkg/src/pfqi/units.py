"""Parsing of quantities written with explicit unit suffixes ("371 km/s", "46d15m N").

Every parser returns SI (m, s, m/s, rad). Errors are plain ``ValueError``;
config loading wraps them with the offending field path.
"""

import math
import re

from pfqi.constants import C, DAY

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_QUANTITY = re.compile(rf"^\s*({_NUMBER})\s*([^\s\d].*?)?\s*$")

LENGTH = {"m": 1.0, "km": 1e3, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9,
          "au": 1.495_978_707e11}
TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15,
        "min": 60.0, "h": 3600.0, "d": DAY, "day": DAY, "days": DAY}
SPEED = {"m/s": 1.0, "km/s": 1e3, "c": C}
RATE = {"/s": 1.0, "1/s": 1.0, "hz": 1.0, "counts/s": 1.0}
ANGLE = {"rad": 1.0, "deg": math.pi / 180, "°": math.pi / 180, "h": math.pi / 12,
         "arcmin": math.pi / 10800, "'": math.pi / 10800}

_DMS = re.compile(
    r"^\s*([-+])?\s*(\d+(?:\.\d*)?)\s*[d°]\s*(?:(\d+(?:\.\d*)?)\s*[m'′]\s*)?"
    r"(?:(\d+(?:\.\d*)?)\s*(?:s|\"|″)\s*)?([NSEWnsew])?\s*$"
)
_DECIMAL_HEMI = re.compile(rf"^\s*({_NUMBER})\s*(deg|°)?\s*([NSEWnsew])\s*$")


def _split(text, table, kind, default=None):
    m = _QUANTITY.match(str(text))
    if not m:
        raise ValueError(f"cannot parse {kind} {text!r}")
    value, unit = float(m.group(1)), (m.group(2) or default)
    if unit is None:
        raise ValueError(f"{kind} {text!r} needs a unit")
    key = unit if unit in table else unit.lower()
    if key not in table:
        raise ValueError(f"unknown {kind} unit {unit!r} in {text!r}")
    return value * table[key]


def parse_length(text):
    return _split(text, LENGTH, "length")


def parse_time(text):
    return _split(text, TIME, "time")


def parse_speed(text):
    return _split(text, SPEED, "speed")


def parse_rate(text):
    return _split(text, RATE, "rate", default="/s")


def parse_tau(text):
    """Timing offset given either as a time or as the path length c*tau."""
    m = _QUANTITY.match(str(text))
    unit = (m.group(2) or "") if m else ""
    if unit in LENGTH or unit.lower() in LENGTH:
        return parse_length(text) / C
    return parse_time(text)


def parse_angle(text, hemispheres=""):
    """Angle in rad from "2.247 rad", "-7.22 deg", "11.20h", "43d45m", "46d15m N".

    ``hemispheres`` is a two-letter string (positive, negative), e.g. "NS"; a
    trailing hemisphere letter outside it is rejected.
    """
    text = str(text).strip()
    m = _DMS.match(text)
    if m:
        sign, d, mins, secs, hemi = m.groups()
        value = float(d) + float(mins or 0) / 60 + float(secs or 0) / 3600
        if sign == "-":
            value = -value
        return math.radians(value) * _hemisphere_sign(hemi, hemispheres, text)
    m = _DECIMAL_HEMI.match(text)
    if m:
        value = math.radians(float(m.group(1)))
        return value * _hemisphere_sign(m.group(3), hemispheres, text)
    return _split(text, ANGLE, "angle", default="deg")


def _hemisphere_sign(hemi, allowed, text):
    if not hemi:
        return 1.0
    hemi = hemi.upper()
    if hemi not in allowed:
        raise ValueError(f"hemisphere {hemi!r} not valid here: {text!r}")
    return 1.0 if hemi == allowed[0] else -1.0


def parse_latitude(text):
    value = parse_angle(text, "NS")
    if abs(value) > math.pi / 2 + 1e-15:
        raise ValueError(f"latitude {text!r} outside [-90 deg, 90 deg]")
    return value


def parse_longitude(text):
    return parse_angle(text, "EW")
