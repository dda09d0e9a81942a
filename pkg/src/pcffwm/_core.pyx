# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; see ``pcffwm._core_py`` for the contract."""

import numpy as np

cimport cython
from libc.math cimport exp, sqrt, M_PI, NAN

cdef double _SQRT3 = sqrt(3.0)


cdef inline double _sell(double lam, double[::1] sb, double[::1] sc) nogil:
    cdef double l2 = lam * lam
    cdef double n2 = 1.0
    cdef int i
    for i in range(3):
        n2 += sb[i] * l2 / (l2 - sc[i])
    return sqrt(n2)


cdef inline double _neff1(double lam, double pitch, double[::1] av,
                          double[::1] cw, double[::1] sb, double[::1] sc) nogil:
    cdef double x = lam / pitch
    cdef double v = av[0] + av[1] / (1.0 + av[2] * exp(av[3] * x))
    cdef double w = cw[0] + cw[1] / (1.0 + cw[2] * exp(cw[3] * x))
    cdef double u = lam * _SQRT3 / (2.0 * M_PI * pitch)
    cdef double nco = _sell(lam, sb, sc)
    cdef double ne2 = nco * nco - (v * v - w * w) * u * u
    if ne2 <= 0.0:
        return NAN
    return sqrt(ne2)


def sellmeier_n(lam, sb, sc):
    cdef double[::1] b = np.ascontiguousarray(sb, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(sc, dtype=np.float64)
    cdef double[::1] lv
    cdef double[::1] out
    cdef Py_ssize_t i, n
    if np.isscalar(lam):
        return _sell(<double> lam, b, c)
    arr = np.ascontiguousarray(lam, dtype=np.float64)
    if arr.ndim == 0:
        return _sell(<double> arr, b, c)
    res = np.empty(arr.shape[0], dtype=np.float64)
    lv, out, n = arr, res, arr.shape[0]
    for i in range(n):
        out[i] = _sell(lv[i], b, c)
    return res


def neff(lam, pitch, av, cw, sb, sc):
    cdef double[::1] a = np.ascontiguousarray(av, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(cw, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(sb, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(sc, dtype=np.float64)
    cdef double p = pitch
    cdef double[::1] lv
    cdef double[::1] out
    cdef Py_ssize_t i, n
    if np.isscalar(lam):
        return _neff1(<double> lam, p, a, w, b, c)
    arr = np.ascontiguousarray(lam, dtype=np.float64)
    if arr.ndim == 0:
        return _neff1(<double> arr, p, a, w, b, c)
    res = np.empty(arr.shape[0], dtype=np.float64)
    lv, out, n = arr, res, arr.shape[0]
    for i in range(n):
        out[i] = _neff1(lv[i], p, a, w, b, c)
    return res
