# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled haversine kernel: hot loop for per-link distance computation.

Mirrors _distkernel_py exactly; citeflow.geo picks whichever imports.
"""

from libc.math cimport asin, cos, sin, sqrt, M_PI

DEF R_EARTH = 6371.0088

EARTH_RADIUS_KM = R_EARTH

BACKEND = "cython"


cdef inline double _hav(double lat1, double lon1, double lat2, double lon2) nogil:
    cdef double d2r = M_PI / 180.0
    cdef double phi1 = lat1 * d2r
    cdef double phi2 = lat2 * d2r
    cdef double dphi = (lat2 - lat1) * d2r
    cdef double dlam = (lon2 - lon1) * d2r
    cdef double sp = sin(dphi * 0.5)
    cdef double sl = sin(dlam * 0.5)
    cdef double a = sp * sp + cos(phi1) * cos(phi2) * sl * sl
    if a > 1.0:
        a = 1.0
    return 2.0 * R_EARTH * asin(sqrt(a))


def haversine_km(double lat1, double lon1, double lat2, double lon2):
    """Great-circle distance in km between two points given in degrees."""
    return _hav(lat1, lon1, lat2, lon2)


def haversine_batch(double[::1] lat1, double[::1] lon1,
                    double[::1] lat2, double[::1] lon2,
                    double[::1] out):
    """Element-wise haversine over equal-length arrays, writing into out."""
    cdef Py_ssize_t i, n = out.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _hav(lat1[i], lon1[i], lat2[i], lon2[i])
