# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors ``_fallback`` operation-for-operation."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def em_cartesian(double y1, double y2, double beta, double tpo,
                 double sigma, double dt, double[:, ::1] dw):
    cdef Py_ssize_t n = dw.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n + 1, 2))
    cdef double[:, ::1] o = out
    cdef double one_m_beta = 1.0 - beta
    cdef double r2, f1, f2
    cdef Py_ssize_t t
    o[0, 0] = y1
    o[0, 1] = y2
    for t in range(n):
        r2 = y1 * y1 + y2 * y2
        f1 = beta * y1 - tpo * y2 + one_m_beta * y1 * r2 - y1 * r2 * r2
        f2 = tpo * y1 + beta * y2 + one_m_beta * y2 * r2 - y2 * r2 * r2
        y1 = y1 + f1 * dt + sigma * dw[t, 0]
        y2 = y2 + f2 * dt + sigma * dw[t, 1]
        o[t + 1, 0] = y1
        o[t + 1, 1] = y2
    return out


def em_polar(double R, double theta, double beta, double tpo,
             double sigma, double dt, double[:, ::1] dw, double r_floor):
    cdef Py_ssize_t n = dw.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n + 1, 2))
    cdef double[:, ::1] o = out
    cdef double one_m_beta = 1.0 - beta
    cdef double sig2h = 0.5 * sigma * sigma
    cdef double r3, fR
    cdef Py_ssize_t t
    o[0, 0] = R
    o[0, 1] = theta
    for t in range(n):
        r3 = R * R * R
        fR = beta * R + one_m_beta * r3 - r3 * R * R + sig2h / R
        theta = theta + tpo * dt + (sigma / R) * dw[t, 1]
        R = R + fR * dt + sigma * dw[t, 0]
        if R < r_floor:
            R = r_floor + (r_floor - R)
            if R < r_floor:
                R = r_floor
        o[t + 1, 0] = R
        o[t + 1, 1] = theta
    return out


def em_cartesian_escape(double y1, double y2, double beta, double tpo,
                        double sigma, double dt, double[:, ::1] dw,
                        double r_escape):
    cdef Py_ssize_t n = dw.shape[0]
    cdef double one_m_beta = 1.0 - beta
    cdef double r_esc2 = r_escape * r_escape
    cdef double r2, f1, f2
    cdef Py_ssize_t t
    for t in range(n):
        r2 = y1 * y1 + y2 * y2
        f1 = beta * y1 - tpo * y2 + one_m_beta * y1 * r2 - y1 * r2 * r2
        f2 = tpo * y1 + beta * y2 + one_m_beta * y2 * r2 - y2 * r2 * r2
        y1 = y1 + f1 * dt + sigma * dw[t, 0]
        y2 = y2 + f2 * dt + sigma * dw[t, 1]
        if y1 * y1 + y2 * y2 < r_esc2:
            return t + 1, y1, y2
    return -1, y1, y2


def surrogate_walk(double[:, ::1] cum, Py_ssize_t start, double[::1] u):
    cdef Py_ssize_t steps = u.shape[0]
    cdef Py_ssize_t m = cum.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(steps + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t i = start
    cdef Py_ssize_t t, j
    o[0] = start
    for t in range(steps):
        j = 0
        while j < m - 1 and cum[i, j] <= u[t]:
            j += 1
        # linear scan matches searchsorted(side="right") capped at m-1
        i = j
        o[t + 1] = i
    return out


def backend_name():
    return "native"
