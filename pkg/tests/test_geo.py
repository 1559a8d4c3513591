"""Distance computations: anchor distances, metric properties, backend parity."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from citeflow import geo
from citeflow._distkernel_py import haversine_km as haversine_py
from citeflow.geo import GeoPoint, geodesic_km, geodesic_km_batch, pair_distance

from conftest import AOSTA, BEIJING, CATANIA, LONDON, MILAN, NEW_YORK, ROME, TOKYO, TURIN, country, lau

coords = st.tuples(
    st.floats(min_value=-90, max_value=90),
    st.floats(min_value=-180, max_value=180),
)


def point(latlon):
    return GeoPoint(latlon[0], latlon[1])


class TestAnchors:
    @pytest.mark.parametrize(
        "a,b,expected_km,tol",
        [
            (ROME, LONDON, 1434.0, 0.01),
            (ROME, NEW_YORK, 6891.0, 0.01),
            (ROME, TOKYO, 9874.0, 0.01),
            (ROME, BEIJING, 8139.0, 0.01),
            (CATANIA, AOSTA, 1119.0, 0.015),
        ],
    )
    def test_reference_distances(self, a, b, expected_km, tol):
        d = geodesic_km(point(a), point(b))
        assert abs(d - expected_km) / expected_km <= tol

    def test_identical_points_zero(self):
        assert geodesic_km(point(ROME), point(ROME)) == 0.0


class TestMetricProperties:
    @given(coords, coords)
    def test_symmetry_exact(self, a, b):
        assert geodesic_km(point(a), point(b)) == geodesic_km(point(b), point(a))

    @given(coords, coords)
    def test_nonnegative_and_bounded(self, a, b):
        d = geodesic_km(point(a), point(b))
        assert 0.0 <= d <= geo.MAX_DISTANCE_KM + 1e-9
        assert not math.isnan(d)

    @given(coords, coords, coords)
    def test_triangle_inequality(self, a, b, c):
        dab = geodesic_km(point(a), point(b))
        dbc = geodesic_km(point(b), point(c))
        dac = geodesic_km(point(a), point(c))
        assert dac <= dab + dbc + 1e-6

    def test_small_angle_stability(self):
        a = GeoPoint(45.0, 7.0)
        b = GeoPoint(45.0000001, 7.0000001)
        d = geodesic_km(a, b)
        assert d >= 0.0 and not math.isnan(d)
        assert d < 0.001  # well under a kilometer, not underflowed

    def test_coordinate_validation(self):
        with pytest.raises(ValueError):
            GeoPoint(91.0, 0.0)
        with pytest.raises(ValueError):
            GeoPoint(0.0, 181.0)


class TestBackends:
    @given(coords, coords)
    def test_active_backend_matches_pure_python(self, a, b):
        active = geodesic_km(point(a), point(b))
        pure = haversine_py(a[0], a[1], b[0], b[1])
        assert active == pytest.approx(pure, abs=1e-9)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(7)
        lat1 = rng.uniform(-90, 90, 100)
        lon1 = rng.uniform(-180, 180, 100)
        lat2 = rng.uniform(-90, 90, 100)
        lon2 = rng.uniform(-180, 180, 100)
        batch = geodesic_km_batch(lat1, lon1, lat2, lon2)
        for i in range(100):
            scalar = geodesic_km(GeoPoint(lat1[i], lon1[i]), GeoPoint(lat2[i], lon2[i]))
            assert batch[i] == pytest.approx(scalar, abs=1e-9)

    def test_backend_reports_name(self):
        assert geo.BACKEND in ("cython", "python")


class TestPairDistance:
    def test_same_lau_zero(self):
        rome = lau("IT_ROME", "rome", ROME)
        assert pair_distance(rome, rome) == 0.0

    def test_lau_to_country_uses_capital(self):
        rome = lau("IT_ROME", "rome", ROME)
        gb = country("GB", "london", LONDON)
        expected = geodesic_km(point(ROME), point(LONDON))
        assert pair_distance(rome, gb) == expected

    def test_lau_to_lau_law_of_cosines_oracle(self):
        # independent spherical law of cosines on the same coordinates
        milan, turin = lau("IT_MILAN", "milan", MILAN), lau("IT_TURIN", "turin", TURIN)
        phi1, lam1 = map(math.radians, MILAN)
        phi2, lam2 = map(math.radians, TURIN)
        central = math.acos(
            math.sin(phi1) * math.sin(phi2)
            + math.cos(phi1) * math.cos(phi2) * math.cos(lam2 - lam1)
        )
        expected = geo.EARTH_RADIUS_KM * central
        assert pair_distance(milan, turin) == pytest.approx(expected, abs=1e-6)

    def test_country_as_cited_rejected(self):
        gb = country("GB", "london", LONDON)
        rome = lau("IT_ROME", "rome", ROME)
        with pytest.raises(geo.ScaleKindMismatch):
            pair_distance(gb, rome)
