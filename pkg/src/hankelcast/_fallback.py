"""Pure-Python versions of the compiled inner loops.

Every function takes C-contiguous float64 arrays and returns results with the
same shapes as the compiled module, so the two are interchangeable.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def simulate(A, B, C, D, x0, u):
    T = u.shape[0]
    y = np.zeros((T, C.shape[0]))
    x = np.array(x0, dtype=float)
    for t in range(T):
        y[t] = C @ x + D @ u[t]
        x = A @ x + B @ u[t]
    return y


def hankel(w, depth):
    T, q = w.shape
    if T < depth:
        return np.zeros((q * depth, 0))
    if depth == 0 or q == 0:
        return np.zeros((q * depth, T - depth + 1))
    # windows has shape (cols, q, depth); block i of column j is w[i + j]
    windows = sliding_window_view(w, depth, axis=0)
    return np.ascontiguousarray(windows.transpose(2, 1, 0).reshape(q * depth, -1))


def roll_recursion(out_lags, in_taps, y, u, start):
    na = out_lags.shape[0]
    nb = in_taps.shape[0]
    for t in range(start, y.shape[0]):
        acc = np.zeros(y.shape[1])
        for k in range(na):
            acc += out_lags[k] @ y[t - 1 - k]
        for k in range(nb):
            acc += in_taps[k] @ u[t - k]
        y[t] = acc
