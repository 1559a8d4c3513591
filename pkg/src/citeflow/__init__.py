"""Gravity-model analysis of geographic proximity in citation knowledge flows.

Pipeline: parse bibliographic inputs, assign each publication a prevailing
territory, compute great-circle distances and cognitive-proximity-weighted
research masses, build citation events with delay and self-citation flags,
and estimate log-log gravity models across cumulative citation windows.
"""

from .geo import BACKEND, EARTH_RADIUS_KM, GeoPoint, geodesic_km, pair_distance
from .gravity import RegressionResult, fit_loglog_ols
from .model import Scale, TerritoryKind
from .synth import SynthConfig, generate_corpus

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EARTH_RADIUS_KM",
    "GeoPoint",
    "RegressionResult",
    "Scale",
    "SynthConfig",
    "TerritoryKind",
    "__version__",
    "fit_loglog_ols",
    "generate_corpus",
    "geodesic_km",
    "pair_distance",
]
