"""Output prediction straight from data matrices, with step-by-step weaving.

The predictor never fits a model. It searches the column space of the data
matrices (plus the columns that the initial trajectory itself contributes)
for a combination that matches the recent past and the future input, and
reads the future output off that combination.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hankel import hankel, stack_partition
from .lti import DEFAULT_RANK_TOL, DimensionError, Trajectory, as_signal

DEFAULT_RESIDUAL_TOL = 1e-8
CERTIFICATE_TOL = 1e-9
WEAVE_ATOL = 1e-9


@dataclass(frozen=True)
class PredictionProblem:
    """Data, initial trajectory, future input and the past depth ``lag``.

    ``lag`` is the caller's upper bound on the lag of every system that
    explains the data. ``lag > len(ini)`` is representable (so that the
    condition report can flag it) but cannot be predicted from.
    """

    data: Trajectory
    ini: Trajectory
    u_f: np.ndarray
    lag: int
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if self.ini.m != self.data.m or self.ini.p != self.data.p:
            raise DimensionError(
                f"initial trajectory widths (m={self.ini.m}, p={self.ini.p}) differ from "
                f"data widths (m={self.data.m}, p={self.data.p})")
        u_f = as_signal(self.u_f, self.data.m)
        u_f.setflags(write=False)
        object.__setattr__(self, "u_f", u_f)
        if self.lag < 0:
            raise ValueError(f"lag must be nonnegative, got {self.lag}")

    @property
    def T_f(self) -> int:
        return self.u_f.shape[0]

    @property
    def T_ini(self) -> int:
        return self.ini.T


@dataclass(frozen=True)
class StepDiagnostics:
    step: int
    feasible: bool
    residual: float
    unique_certificate: bool
    g_norm: float
    columns: int


@dataclass(frozen=True)
class PredictionOutcome:
    y_f: np.ndarray | None
    residual: float
    unique_certificate: bool
    g_norm: float
    per_step: tuple[StepDiagnostics, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.y_f is not None

    @property
    def failed_step(self) -> int | None:
        if self.per_step is None or self.feasible:
            return None
        return self.per_step[-1].step


@dataclass(frozen=True)
class InformativityReport:
    lag_condition: bool
    prediction_produced: bool
    unique_certificate: bool
    T_ini: int
    lag: int

    @property
    def sufficient(self) -> bool:
        return self.lag_condition and self.prediction_produced

    @property
    def status(self) -> str:
        return "established" if self.sufficient else "not established"

    def lines(self) -> list[str]:
        rel = ">=" if self.lag_condition else "<"
        return [
            f"lag condition: T_ini={self.T_ini} {rel} lag={self.lag}",
            f"prediction produced: {self.prediction_produced}",
            f"uniqueness certificate: {self.unique_certificate}",
            f"informativity for unique prediction (under the supplied lag bound): {self.status}",
        ]


@dataclass
class _Solution:
    g: np.ndarray
    residual: float
    kernel: np.ndarray = field(repr=False)


def solve_min_norm(M: np.ndarray, b: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> _Solution:
    """Minimum-norm least-squares ``g`` for ``M g = b`` and a kernel basis of ``M``."""
    rows, cols = M.shape
    bnorm = np.linalg.norm(b)
    if cols == 0:
        return _Solution(np.zeros(0), float(bnorm / max(1.0, bnorm)), np.zeros((0, 0)))
    if rows == 0:
        return _Solution(np.zeros(cols), 0.0, np.eye(cols))
    U, s, Vt = np.linalg.svd(M, full_matrices=True)
    r = 0 if s[0] == 0.0 else int(np.count_nonzero(s > rank_tol * max(rows, cols) * s[0]))
    g = Vt[:r].T @ ((U[:, :r].T @ b) / s[:r])
    res = np.linalg.norm(M @ g - b)
    return _Solution(g, float(res / max(1.0, bnorm)), Vt[r:].T)


def _certify(Y_f: np.ndarray, kernel: np.ndarray) -> bool:
    if kernel.size == 0 or Y_f.size == 0:
        return True
    return bool(np.linalg.norm(Y_f @ kernel) <= CERTIFICATE_TOL * max(1.0, np.linalg.norm(Y_f)))


def prediction_matrices(prob: PredictionProblem):
    """``(U_p, U_f, Y_p, Y_f)`` and right-hand side ``(u_ini_tail, u_f, y_ini_tail)``.

    The matrices are the mosaic of the depth ``lag + T_f`` Hankel matrices
    of the data and of the initial trajectory.
    """
    if prob.lag > prob.T_ini:
        raise ValueError(f"lag={prob.lag} exceeds the initial trajectory length T_ini={prob.T_ini}")
    parts = stack_partition(prob.data.u, prob.data.y, prob.lag, prob.T_f,
                            extra=[(prob.ini.u, prob.ini.y)])
    tail = prob.ini.tail(prob.lag)
    b = np.concatenate([tail.u.ravel(), prob.u_f.ravel(), tail.y.ravel()])
    return parts, b


def predict(prob: PredictionProblem) -> PredictionOutcome:
    """Full-horizon data-driven prediction.

    Returns an outcome whose ``y_f`` (shape ``(T_f, p)``) is None when no
    combination of data columns matches the past and future input to within
    ``prob.residual_tol``.
    """
    (U_p, U_f, Y_p, Y_f), b = prediction_matrices(prob)
    M = np.vstack([U_p, U_f, Y_p])
    sol = solve_min_norm(M, b, prob.rank_tol)
    cert = _certify(Y_f, sol.kernel)
    g_norm = float(np.linalg.norm(sol.g))
    if sol.residual > prob.residual_tol:
        return PredictionOutcome(None, sol.residual, cert, g_norm)
    y_f = (Y_f @ sol.g).reshape(prob.T_f, prob.data.p)
    return PredictionOutcome(y_f, sol.residual, cert, g_norm)


def weave(first: Trajectory, second: Trajectory, overlap: int, atol: float = WEAVE_ATOL) -> Trajectory:
    """Join two trajectories that coincide on ``overlap`` samples.

    The result has length ``len(first) + len(second) - overlap``. It is a
    trajectory of any system whose lag is at most ``overlap`` and which has
    both pieces as trajectories.
    """
    if first.m != second.m or first.p != second.p:
        raise DimensionError("trajectories to weave have different widths")
    if overlap < 0 or overlap > first.T or overlap > second.T:
        raise ValueError(f"overlap {overlap} is longer than one of the trajectories "
                         f"({first.T}, {second.T})")
    a, b = first.tail(overlap), second.window(0, overlap)
    du = np.max(np.abs(a.u - b.u), initial=0.0)
    dy = np.max(np.abs(a.y - b.y), initial=0.0)
    if du > atol or dy > atol:
        raise ValueError(f"trajectories differ on the overlap (input by {du:g}, output by {dy:g})")
    return Trajectory(np.vstack([first.u, second.u[overlap:]]),
                      np.vstack([first.y, second.y[overlap:]]))


def predict_and_weave(prob: PredictionProblem) -> PredictionOutcome:
    """Predict one step at a time, appending each prediction to the past.

    Each step is a one-step ``predict`` from the running trajectory. The
    data part of the one-step matrices is built once; the running
    trajectory's own Hankel columns grow by one per step. On failure the
    outcome carries diagnostics up to and including the failing step.
    """
    if prob.lag > prob.T_ini:
        raise ValueError(f"lag={prob.lag} exceeds the initial trajectory length T_ini={prob.T_ini}")
    ell, m, p = prob.lag, prob.data.m, prob.data.p
    depth = ell + 1
    Hu_d = hankel(prob.data.u, depth, m).data
    Hy_d = hankel(prob.data.y, depth, p).data
    u_run = [row for row in prob.ini.u]
    y_run = [row for row in prob.ini.y]
    run_u_cols = list(hankel(prob.ini.u, depth, m).data.T)
    run_y_cols = list(hankel(prob.ini.y, depth, p).data.T)

    steps: list[StepDiagnostics] = []
    y_f = np.zeros((prob.T_f, p))
    for t in range(prob.T_f):
        Hu = np.column_stack([Hu_d, *run_u_cols]) if run_u_cols else Hu_d
        Hy = np.column_stack([Hy_d, *run_y_cols]) if run_y_cols else Hy_d
        U_p, U_f = Hu[:m * ell], Hu[m * ell:]
        Y_p, Y_f = Hy[:p * ell], Hy[p * ell:]
        M = np.vstack([U_p, U_f, Y_p])
        past_u = np.asarray(u_run[len(u_run) - ell:]).reshape(-1)
        past_y = np.asarray(y_run[len(y_run) - ell:]).reshape(-1)
        b = np.concatenate([past_u, prob.u_f[t], past_y])
        sol = solve_min_norm(M, b, prob.rank_tol)
        feasible = sol.residual <= prob.residual_tol
        steps.append(StepDiagnostics(t, feasible, sol.residual, _certify(Y_f, sol.kernel),
                                     float(np.linalg.norm(sol.g)), M.shape[1]))
        if not feasible:
            return _weave_outcome(None, steps)
        y_t = Y_f @ sol.g
        y_f[t] = y_t
        u_run.append(prob.u_f[t].copy())
        y_run.append(y_t)
        if len(u_run) >= depth:
            run_u_cols.append(np.concatenate(u_run[-depth:]))
            run_y_cols.append(np.concatenate(y_run[-depth:]))
    return _weave_outcome(y_f, steps)


def _weave_outcome(y_f, steps: list[StepDiagnostics]) -> PredictionOutcome:
    if not steps:
        return PredictionOutcome(y_f, 0.0, True, 0.0, ())
    return PredictionOutcome(
        y_f,
        max(s.residual for s in steps),
        all(s.unique_certificate for s in steps),
        max(s.g_norm for s in steps),
        tuple(steps),
    )


def check_informativity_conditions(prob: PredictionProblem,
                                   outcome: PredictionOutcome | None) -> InformativityReport:
    """Which of the sufficient conditions for a unique prediction are met.

    ``outcome`` may be None when no prediction was attempted. A negative
    report means "not established", never "not informative": the
    conditions are sufficient only.
    """
    produced = outcome is not None and outcome.feasible
    return InformativityReport(
        lag_condition=prob.T_ini >= prob.lag,
        prediction_produced=produced,
        unique_certificate=bool(produced and outcome.unique_certificate),
        T_ini=prob.T_ini,
        lag=prob.lag,
    )

