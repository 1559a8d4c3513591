"""Pure-Python haversine kernel.

Fallback for the compiled Cython module; same function signatures, same
results. Selected automatically by citeflow.geo when the extension is not
built.
"""
from __future__ import annotations

from math import asin, cos, radians, sin, sqrt

EARTH_RADIUS_KM = 6371.0088  # IUGG mean Earth radius

BACKEND = "python"


def haversine_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in km between two points given in degrees.

    Haversine form: numerically stable for small central angles, unlike
    the spherical law of cosines.
    """
    phi1 = radians(lat1)
    phi2 = radians(lat2)
    dphi = radians(lat2 - lat1)
    dlam = radians(lon2 - lon1)
    a = sin(dphi * 0.5) ** 2 + cos(phi1) * cos(phi2) * sin(dlam * 0.5) ** 2
    if a > 1.0:  # guard against rounding just past 1
        a = 1.0
    return 2.0 * EARTH_RADIUS_KM * asin(sqrt(a))


def haversine_batch(lat1, lon1, lat2, lon2, out) -> None:
    """Element-wise haversine over equal-length sequences, writing into out."""
    for i in range(len(out)):
        out[i] = haversine_km(lat1[i], lon1[i], lat2[i], lon2[i])
