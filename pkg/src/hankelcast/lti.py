"""Discrete-time state-space systems and their finite-horizon maps.

Signals are stored as 2-D arrays with one row per time step, so an input
sequence of length ``T`` for a system with ``m`` inputs has shape ``(T, m)``.
Stacked vectors (as used by the observability and Toeplitz maps) are
time-major: ``(w(0), w(1), ..., w(T-1))``.

Void matrices (zero rows or zero columns) are ordinary numpy arrays whose
shape keeps both logical dimensions, so ``np.zeros((4, 0))`` and
``np.zeros((0, 4))`` stay distinguishable and multiply as expected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from . import _kernels

DEFAULT_RANK_TOL = 1e-10
DEFAULT_TRAJECTORY_TOL = 1e-8


class DimensionError(ValueError):
    """Raised when array widths or lengths do not fit together."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, order="C")
    a.setflags(write=False)
    return a


def as_signal(w, width: int | None = None) -> np.ndarray:
    """Coerce ``w`` to a float array of shape ``(T, width)``.

    A 1-D sequence is read as a scalar signal when ``width`` is 1 or None,
    and as a flat stacked vector otherwise.
    """
    a = np.asarray(w, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        if width is None or width == 1:
            a = a.reshape(-1, 1)
        elif width == 0:
            if a.size:
                raise DimensionError("non-empty data given for a zero-width signal")
            a = a.reshape(0, 0)
        else:
            if a.size % width:
                raise DimensionError(f"{a.size} values cannot be split into rows of width {width}")
            a = a.reshape(-1, width)
    elif a.ndim != 2:
        raise DimensionError(f"signal must be 1-D or 2-D, got {a.ndim}-D")
    if width is not None and a.shape[1] != width:
        if a.shape[0] == 0:
            return np.zeros((0, width))
        raise DimensionError(f"signal has width {a.shape[1]}, expected {width}")
    return np.ascontiguousarray(a)


@dataclass(frozen=True)
class StateSpace:
    """``x(t+1) = A x(t) + B u(t)``, ``y(t) = C x(t) + D u(t)``.

    Scalars and nested lists are accepted and promoted to 2-D arrays. A
    static gain ``y = D u`` is written with ``n = 0``::

        StateSpace(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((p, 0)), D)
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        mats = {}
        for name in "ABCD":
            a = np.asarray(getattr(self, name), dtype=float)
            if a.ndim < 2:
                a = np.atleast_2d(a)
            if a.ndim != 2:
                raise DimensionError(f"{name} must be a matrix")
            mats[name] = a
        A, B, C, D = mats["A"], mats["B"], mats["C"], mats["D"]
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got {A.shape}")
        m, p = B.shape[1], C.shape[0]
        if B.shape[0] != n:
            raise DimensionError(f"B has {B.shape[0]} rows, expected n={n}")
        if C.shape[1] != n:
            raise DimensionError(f"C has {C.shape[1]} columns, expected n={n}")
        if D.shape != (p, m):
            raise DimensionError(f"D has shape {D.shape}, expected ({p}, {m})")
        for name, a in mats.items():
            object.__setattr__(self, name, _frozen(a))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class Trajectory:
    """Paired input/output samples of equal length."""

    u: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        y = np.asarray(self.y, dtype=float)
        u = as_signal(u) if u.ndim < 2 else u
        y = as_signal(y) if y.ndim < 2 else y
        if u.ndim != 2 or y.ndim != 2:
            raise DimensionError("trajectory signals must be 2-D")
        if u.shape[0] != y.shape[0]:
            raise DimensionError(f"input has {u.shape[0]} samples, output has {y.shape[0]}")
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "y", _frozen(y))

    @classmethod
    def empty(cls, m: int, p: int) -> "Trajectory":
        return cls(np.zeros((0, m)), np.zeros((0, p)))

    @property
    def T(self) -> int:
        return self.u.shape[0]

    @property
    def m(self) -> int:
        return self.u.shape[1]

    @property
    def p(self) -> int:
        return self.y.shape[1]

    def __len__(self) -> int:
        return self.T

    def window(self, start: int, stop: int) -> "Trajectory":
        return Trajectory(self.u[start:stop], self.y[start:stop])

    def tail(self, k: int) -> "Trajectory":
        return self.window(self.T - k, self.T)

    def stacked(self) -> np.ndarray:
        """Column vector ``(u(0), ..., u(T-1), y(0), ..., y(T-1))``."""
        return np.concatenate([self.u.ravel(), self.y.ravel()])


@dataclass(frozen=True)
class LagReport:
    lag: int
    observability_ranks: tuple[int, ...] = field(default_factory=tuple)


def numerical_rank(M, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``rank_tol * max(M.shape) * sigma_max``.

    Void matrices have rank 0.
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tol * max(M.shape) * s[0]))


def kernel_basis(M, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical null space of ``M``."""
    M = np.asarray(M, dtype=float)
    cols = M.shape[1]
    if M.shape[0] == 0 or cols == 0:
        return np.eye(cols) if M.shape[0] == 0 else np.zeros((0, 0))
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    r = 0 if s[0] == 0.0 else int(np.count_nonzero(s > rank_tol * max(M.shape) * s[0]))
    return Vt[r:].T.copy()


def simulate(sys: StateSpace, x0, u) -> np.ndarray:
    """Output sequence of ``sys`` started at ``x0`` and driven by ``u``.

    Returns an array of shape ``(T, p)``.
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != sys.n:
        raise DimensionError(f"x0 has width {x0.shape[0]}, expected n={sys.n}")
    u = as_signal(u, sys.m)
    return _kernels.simulate(sys.A, sys.B, sys.C, sys.D, np.ascontiguousarray(x0), u)


def observability_matrix(sys: StateSpace, k: int) -> np.ndarray:
    """``(C; CA; ...; CA^{k-1})``, or the ``0 x n`` void matrix for ``k = 0``."""
    O = np.zeros((sys.p * k, sys.n))
    row = sys.C
    for i in range(k):
        O[i * sys.p:(i + 1) * sys.p] = row
        row = row @ sys.A
    return O


def markov_parameters(sys: StateSpace, k: int) -> list[np.ndarray]:
    """``[D, CB, CAB, ..., CA^{k-2}B]`` (``k`` entries)."""
    out = []
    if k == 0:
        return out
    out.append(sys.D.copy())
    CAi = sys.C
    for _ in range(1, k):
        out.append(CAi @ sys.B)
        CAi = CAi @ sys.A
    return out


def toeplitz_matrix(sys: StateSpace, k: int) -> np.ndarray:
    """Block lower-triangular map from stacked inputs to forced outputs.

    Block ``(i, j)`` is ``D`` on the diagonal and ``C A^{i-j-1} B`` below it.
    """
    p, m = sys.p, sys.m
    T = np.zeros((p * k, m * k))
    h = markov_parameters(sys, k)
    for i in range(k):
        for j in range(i + 1):
            T[i * p:(i + 1) * p, j * m:(j + 1) * m] = h[i - j]
    return T


def lag(sys: StateSpace, rank_tol: float = DEFAULT_RANK_TOL) -> LagReport:
    """Smallest ``k`` with ``rank O_k == rank O_{k+1}`` for this realization.

    The ranks come from the realization as given. Lag is defined on a
    minimal realization; pass one when the distinction matters.
    """
    ranks = [0]
    k = 0
    while True:
        ranks.append(numerical_rank(observability_matrix(sys, k + 1), rank_tol))
        if ranks[k + 1] == ranks[k] or k >= sys.n:
            break
        k += 1
    return LagReport(lag=k, observability_ranks=tuple(ranks))


def unique_continuation(sys: StateSpace, T_ini: int, T_f: int,
                        rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """Whether a past window of length ``T_ini`` pins down the next ``T_f`` outputs."""
    return T_f == 0 or T_ini >= lag(sys, rank_tol).lag


def initial_state(sys: StateSpace, traj: Trajectory) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares state explaining ``traj`` and its relative residual."""
    if traj.m != sys.m or traj.p != sys.p:
        raise DimensionError(
            f"trajectory widths (m={traj.m}, p={traj.p}) do not match system (m={sys.m}, p={sys.p})")
    T = traj.T
    y = traj.y.ravel()
    rhs = y - toeplitz_matrix(sys, T) @ traj.u.ravel()
    O = observability_matrix(sys, T)
    if O.size:
        x0 = np.linalg.lstsq(O, rhs, rcond=None)[0]
        r = rhs - O @ x0
    else:
        x0 = np.zeros(sys.n)
        r = rhs
    return x0, float(np.linalg.norm(r) / max(1.0, np.linalg.norm(y)))


def is_trajectory(sys: StateSpace, traj: Trajectory, tol: float = DEFAULT_TRAJECTORY_TOL) -> bool:
    """Whether some initial state reproduces ``traj`` up to relative residual ``tol``."""
    if traj.T == 0:
        if traj.m != sys.m or traj.p != sys.p:
            raise DimensionError("trajectory widths do not match system")
        return True
    return initial_state(sys, traj)[1] <= tol


def continue_trajectory(sys: StateSpace, ini: Trajectory, u_f) -> np.ndarray:
    """Outputs after ``ini`` for the future input ``u_f``.

    The state at the start of ``ini`` is the minimum-norm consistent one;
    the continuation does not depend on that choice once ``len(ini)`` is at
    least the lag.
    """
    x0, _ = initial_state(sys, ini)
    u = np.vstack([ini.u, as_signal(u_f, sys.m)])
    return simulate(sys, x0, u)[ini.T:]


def random_system(rng: np.random.Generator, n: int, m: int, p: int,
                  radius: float | None = None) -> StateSpace:
    """Gaussian random system; ``radius`` rescales A to that spectral radius."""
    A = rng.standard_normal((n, n))
    if radius is not None and n:
        rho = max(abs(np.linalg.eigvals(A)))
        if rho > 0:
            A *= radius / rho
    return StateSpace(A, rng.standard_normal((n, m)), rng.standard_normal((p, n)),
                      rng.standard_normal((p, m)))


def is_minimal(sys: StateSpace, rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    n = sys.n
    if n == 0:
        return True
    ctrb = np.hstack([np.linalg.matrix_power(sys.A, i) @ sys.B for i in range(n)])
    return (numerical_rank(ctrb, rank_tol) == n
            and numerical_rank(observability_matrix(sys, n), rank_tol) == n)

