# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`hankelcast._fallback`."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def simulate(const double[:, ::1] A, const double[:, ::1] B,
             const double[:, ::1] C, const double[:, ::1] D,
             const double[::1] x0, const double[:, ::1] u):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t m = B.shape[1]
    cdef Py_ssize_t p = C.shape[0]
    cdef Py_ssize_t T = u.shape[0]
    cdef Py_ssize_t t, i, j
    cdef double acc
    y_arr = np.zeros((T, p), dtype=np.float64)
    x_arr = np.array(x0, dtype=np.float64, copy=True)
    xn_arr = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] y = y_arr
    cdef double[::1] x = x_arr
    cdef double[::1] xn = xn_arr
    for t in range(T):
        for i in range(p):
            acc = 0.0
            for j in range(n):
                acc += C[i, j] * x[j]
            for j in range(m):
                acc += D[i, j] * u[t, j]
            y[t, i] = acc
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * x[j]
            for j in range(m):
                acc += B[i, j] * u[t, j]
            xn[i] = acc
        for i in range(n):
            x[i] = xn[i]
    return y_arr


def hankel(const double[:, ::1] w, Py_ssize_t depth):
    cdef Py_ssize_t T = w.shape[0]
    cdef Py_ssize_t q = w.shape[1]
    cdef Py_ssize_t cols = T - depth + 1 if T >= depth else 0
    cdef Py_ssize_t i, j, r
    H_arr = np.zeros((q * depth, cols), dtype=np.float64)
    cdef double[:, ::1] H = H_arr
    for i in range(depth):
        for r in range(q):
            for j in range(cols):
                H[i * q + r, j] = w[i + j, r]
    return H_arr


def roll_recursion(const double[:, :, ::1] out_lags,
                   const double[:, :, ::1] in_taps,
                   double[:, ::1] y, const double[:, ::1] u, Py_ssize_t start):
    cdef Py_ssize_t na = out_lags.shape[0]
    cdef Py_ssize_t nb = in_taps.shape[0]
    cdef Py_ssize_t p = y.shape[1]
    cdef Py_ssize_t m = u.shape[1]
    cdef Py_ssize_t T = y.shape[0]
    cdef Py_ssize_t t, k, i, j
    cdef double acc
    for t in range(start, T):
        for i in range(p):
            acc = 0.0
            for k in range(na):
                for j in range(p):
                    acc += out_lags[k, i, j] * y[t - 1 - k, j]
            for k in range(nb):
                for j in range(m):
                    acc += in_taps[k, i, j] * u[t - k, j]
            y[t, i] = acc
