"""citeflow.geo
~~~~~~~~~~~~~~~

Great-circle distances between territory coordinates.

Distances follow the haversine formulation on a sphere of mean radius
6371.0088 km. The hot kernel is compiled (Cython) when the extension was
built, with a pure-Python fallback selected at import time; both backends
agree to double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from . import _distkernel as _kernel  # type: ignore[attr-defined]
except ImportError:
    from . import _distkernel_py as _kernel  # type: ignore[no-redef]

from .model import TerritoryEntry, TerritoryKind

EARTH_RADIUS_KM = _kernel.EARTH_RADIUS_KM
BACKEND: str = _kernel.BACKEND

MAX_DISTANCE_KM = math.pi * EARTH_RADIUS_KM  # antipodal bound


class ScaleKindMismatch(ValueError):
    """Territory kind incompatible with the active analysis scale."""


@dataclass(frozen=True)
class GeoPoint:
    lat_deg: float
    lon_deg: float

    def __post_init__(self):
        if not (-90.0 <= self.lat_deg <= 90.0):
            raise ValueError(f"latitude {self.lat_deg} out of [-90, 90]")
        if not (-180.0 <= self.lon_deg <= 180.0):
            raise ValueError(f"longitude {self.lon_deg} out of [-180, 180]")


def geodesic_km(a: GeoPoint, b: GeoPoint) -> float:
    """Shortest distance on the sphere between two points, in km."""
    return _kernel.haversine_km(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg)


def geodesic_km_batch(lat1, lon1, lat2, lon2) -> np.ndarray:
    """Vector form of geodesic_km over equal-length coordinate arrays."""
    lat1 = np.ascontiguousarray(lat1, dtype=np.float64)
    lon1 = np.ascontiguousarray(lon1, dtype=np.float64)
    lat2 = np.ascontiguousarray(lat2, dtype=np.float64)
    lon2 = np.ascontiguousarray(lon2, dtype=np.float64)
    out = np.empty(lat1.shape[0], dtype=np.float64)
    _kernel.haversine_batch(lat1, lon1, lat2, lon2, out)
    return out


def pair_distance(cited: TerritoryEntry, citing: TerritoryEntry) -> float:
    """Distance between a cited LAU and a citing territory.

    The cited side must be a LAU; the citing side is a LAU for national
    analysis or a COUNTRY (capital coordinates) for international analysis.
    """
    if cited.kind is not TerritoryKind.LAU:
        raise ScaleKindMismatch(
            f"cited territory {cited.territory_id!r} must be LAU, got {cited.kind.value}"
        )
    if citing.kind not in (TerritoryKind.LAU, TerritoryKind.COUNTRY):
        raise ScaleKindMismatch(f"bad citing territory kind {citing.kind!r}")
    return _kernel.haversine_km(cited.lat, cited.lon, citing.lat, citing.lon)
