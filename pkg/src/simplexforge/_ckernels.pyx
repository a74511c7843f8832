# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tower-gauge kernel; mirrors ``_kernels_py.tower_gauge``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt, hypot, isinf

cnp.import_array()

DEF CAP = 200


cdef inline double interp(double t, const double[::1] ts, const double[::1] rs,
                          Py_ssize_t a, Py_ssize_t n) nogil:
    cdef Py_ssize_t lo = a, hi = a + n - 1, mid
    if t <= ts[lo]:
        return rs[lo]
    if t >= ts[hi]:
        return rs[hi]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ts[mid] <= t:
            lo = mid
        else:
            hi = mid
    return rs[lo] + (rs[hi] - rs[lo]) * (t - ts[lo]) / (ts[hi] - ts[lo])


cdef inline int table_combine(double g, double z, const double[::1] ts,
                              const double[::1] rs, Py_ssize_t a, Py_ssize_t n,
                              double tol, double* out) nogil:
    cdef double tm = ts[a + n - 1]
    cdef double zs = z / tm
    cdef double lo, hi, mid, s
    cdef int it
    if z == 0:
        out[0] = g
        return 0
    if g == 0:
        out[0] = zs
        return 0
    lo = g if g > zs else zs
    hi = g + zs
    for it in range(CAP):
        mid = 0.5 * (lo + hi)
        # stop once the bracket is relatively narrow or has no interior float left
        if hi - lo <= tol * hi or mid <= lo or mid >= hi:
            out[0] = mid
            return 0
        s = z / mid
        if s > tm:
            s = tm
        if mid * interp(s, ts, rs, a, n) >= g:
            hi = mid
        else:
            lo = mid
    mid = 0.5 * (lo + hi)
    out[0] = mid
    if hi - lo <= tol * hi or mid <= lo or mid >= hi:
        return 0
    return 1


def tower_gauge(const double[:, ::1] pts, const int[::1] kinds,
                const double[::1] params, const double[::1] tmax,
                const double[::1] tab_t, const double[::1] tab_r,
                const int[::1] tab_off, const int[::1] tab_len, double root_tol):
    cdef Py_ssize_t m = pts.shape[0]
    cdef Py_ssize_t levels = kinds.shape[0]
    cdef cnp.ndarray[cnp.double_t, ndim=1] res = np.empty(m)
    cdef double[::1] out = res
    cdef Py_ssize_t i, l
    cdef double g, z, p, mx, mn, val
    cdef int failed = 0
    with nogil:
        for i in range(m):
            g = fabs(pts[i, 0])
            for l in range(levels):
                z = fabs(pts[i, l + 1]) / tmax[l]
                if kinds[l] == 0:
                    p = params[l]
                    if isinf(p):
                        g = g if g > z else z
                    elif p == 1.0:
                        g = g + z
                    elif p == 2.0:
                        g = hypot(g, z)
                    else:
                        mx = g if g > z else z
                        mn = z if g > z else g
                        if mx > 0:
                            g = mx * pow(1.0 + pow(mn / mx, p), 1.0 / p)
                elif kinds[l] == 1:
                    g = g + z
                elif kinds[l] == 2:
                    g = g if g > z else z
                else:
                    if table_combine(g, fabs(pts[i, l + 1]), tab_t, tab_r,
                                     tab_off[l], tab_len[l], root_tol, &val):
                        failed = 1
                    g = val
            out[i] = g
    if failed:
        raise RuntimeError("table gauge bisection exceeded its iteration cap")
    return res
