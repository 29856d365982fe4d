"""Independent checks for the predictor, built from explicit models.

These routines know the systems involved, so they can answer questions the
data-driven code has to infer: whether a past window determines the
future, and whether a whole family of candidate models agrees on a
continuation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .lti import (
    DEFAULT_RANK_TOL,
    DEFAULT_TRAJECTORY_TOL,
    DimensionError,
    StateSpace,
    Trajectory,
    as_signal,
    continue_trajectory,
    is_trajectory,
    kernel_basis,
    lag,
    observability_matrix,
)

ORACLE_TOL = 1e-9


@dataclass(frozen=True)
class IoRecursion:
    """``y(t) = sum_k a_k y(t-1-k) + sum_k b_k u(t-k)``.

    ``output_lags[k]`` is the ``p x p`` coefficient of ``y(t-1-k)`` and
    ``input_taps[k]`` the ``p x m`` coefficient of ``u(t-k)``.
    """

    output_lags: np.ndarray
    input_taps: np.ndarray
    m: int
    p: int

    def __post_init__(self):
        a = np.asarray(self.output_lags, dtype=float).reshape(-1, self.p, self.p)
        b = np.asarray(self.input_taps, dtype=float).reshape(-1, self.p, self.m)
        if a.shape[0] == 0 and b.shape[0] == 0:
            raise ValueError("recursion needs at least one coefficient")
        for name, arr in (("output_lags", a), ("input_taps", b)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def history(self) -> int:
        """Samples of past needed to start the recursion."""
        return max(self.output_lags.shape[0], self.input_taps.shape[0] - 1)


def simulate_recursion(rec: IoRecursion, ini: Trajectory, u) -> np.ndarray:
    """Roll ``rec`` forward over ``u``, seeded with the tail of ``ini``."""
    if ini.m != rec.m or ini.p != rec.p:
        raise DimensionError("initial trajectory widths do not match the recursion")
    H = rec.history
    if ini.T < H:
        raise ValueError(f"recursion needs {H} samples of history, initial trajectory has {ini.T}")
    u = as_signal(u, rec.m)
    T = u.shape[0]
    seed = ini.tail(H)
    y = np.zeros((H + T, rec.p))
    y[:H] = seed.y
    u_all = np.ascontiguousarray(np.vstack([seed.u, u]))
    _kernels.roll_recursion(rec.output_lags, rec.input_taps, y, u_all, H)
    return y[H:]


def example1_family(r: float) -> StateSpace:
    """Realization of ``y(t+1) - y(t) = r u(t+1) + (r+1) u(t)``."""
    return StateSpace(1.0, 2.0 * r + 1.0, 1.0, float(r))


def example1_recursion(r: float) -> IoRecursion:
    return IoRecursion(output_lags=[[[1.0]]], input_taps=[[[r]], [[r + 1.0]]], m=1, p=1)


def kernel_uniqueness_oracle(sys: StateSpace, T_ini: int, T_f: int,
                             rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """Brute-force test that ``T_ini`` past samples fix the next ``T_f`` outputs.

    Two initial states that explain the same past differ by a vector in the
    kernel of the depth-``T_ini`` observability matrix. The future is unique
    exactly when every such difference, advanced ``T_ini`` steps, is
    invisible to the next ``T_f`` outputs.
    """
    if T_f < 1:
        raise ValueError("the oracle needs a future horizon of at least one step")
    K = kernel_basis(observability_matrix(sys, T_ini), rank_tol)
    if K.size == 0:
        return True
    M = observability_matrix(sys, T_f) @ np.linalg.matrix_power(sys.A, T_ini)
    return bool(np.linalg.norm(M @ K) <= ORACLE_TOL * max(1.0, np.linalg.norm(M)))


@dataclass(frozen=True)
class FamilyAgreement:
    agree: bool
    outputs: tuple[np.ndarray, ...]
    non_unique: tuple[int, ...]
    max_spread: float


def family_agreement_check(family: Sequence[StateSpace], ini: Trajectory, u_f,
                           tol: float = 1e-8,
                           trajectory_tol: float = DEFAULT_TRAJECTORY_TOL,
                           rank_tol: float = DEFAULT_RANK_TOL) -> FamilyAgreement:
    """Continue ``ini`` under ``u_f`` with every member and compare outputs.

    Members whose lag exceeds ``len(ini)`` have no single continuation; their
    indices are listed in ``non_unique`` and agreement is then reported as
    False, since the shared answer is not determined.
    """
    if not family:
        raise ValueError("empty family")
    outputs = []
    non_unique = []
    for i, sys in enumerate(family):
        if not is_trajectory(sys, ini, trajectory_tol):
            raise ValueError(f"initial trajectory is not a trajectory of family member {i}")
        if lag(sys, rank_tol).lag > ini.T:
            non_unique.append(i)
        outputs.append(continue_trajectory(sys, ini, u_f))
    # largest pairwise difference, entry by entry
    spread = float(np.max(np.ptp(np.stack(outputs), axis=0), initial=0.0))
    return FamilyAgreement(
        agree=not non_unique and spread <= tol,
        outputs=tuple(outputs),
        non_unique=tuple(non_unique),
        max_spread=spread,
    )
