import numpy as np
import pytest

from hankelcast import (
    DimensionError,
    PredictionProblem,
    Trajectory,
    check_informativity_conditions,
    is_persistently_exciting,
    is_trajectory,
    lag,
    observability_matrix,
    predict,
    predict_and_weave,
    simulate,
    toeplitz_matrix,
    weave,
)
from hankelcast.lti import continue_trajectory, random_system
from hankelcast.predictor import prediction_matrices, solve_min_norm

DATA = Trajectory([1.0, -1.0, 1.0], [0.0, 1.0, 0.0])
INI = Trajectory([-2.0], [1.0])


def alternating(T_f):
    t = np.arange(T_f)
    return 2.0 * (-1.0) ** t, (-1.0) ** (t + 1)


def random_problem(rng, n, m, p, T=40, T_f=3, extra_ini=0):
    """Data and exact ini from a random stable system, ell = lag."""
    sys = random_system(rng, n, m, p, radius=0.9)
    ell = lag(sys).lag
    u_d = rng.uniform(-1, 1, size=(T, m))
    data = Trajectory(u_d, simulate(sys, rng.standard_normal(n), u_d))
    T_ini = ell + extra_ini
    u_i = rng.uniform(-1, 1, size=(T_ini, m))
    ini = Trajectory(u_i, simulate(sys, rng.standard_normal(n), u_i))
    u_f = rng.uniform(-1, 1, size=(T_f, m))
    return sys, PredictionProblem(data, ini, u_f, lag=ell)


class TestPredict:
    def test_example_single_step(self):
        out = predict(PredictionProblem(DATA, INI, [2.0], lag=1))
        assert out.feasible
        np.testing.assert_allclose(out.y_f, [[-1.0]], atol=1e-12)
        assert out.unique_certificate
        assert out.residual <= 1e-12
        assert out.per_step is None

    def test_example_full_horizon_is_null(self):
        out = predict(PredictionProblem(DATA, INI, [2.0, -2.0], lag=1))
        assert not out.feasible and out.y_f is None
        assert out.residual > 1e-8

    def test_all_zero(self):
        zero = Trajectory(np.zeros((4, 1)), np.zeros((4, 1)))
        out = predict(PredictionProblem(zero, zero.tail(1), np.zeros(3), lag=1))
        assert out.residual == 0.0
        np.testing.assert_array_equal(out.y_f, np.zeros((3, 1)))

    def test_empty_future(self):
        out = predict(PredictionProblem(DATA, INI, np.zeros((0, 1)), lag=1))
        assert out.feasible and out.y_f.shape == (0, 1)

    def test_lag_exceeding_ini(self):
        prob = PredictionProblem(DATA, INI, [2.0], lag=2)
        with pytest.raises(ValueError, match="exceeds"):
            predict(prob)
        with pytest.raises(ValueError, match="exceeds"):
            predict_and_weave(prob)

    def test_width_mismatch(self):
        with pytest.raises(DimensionError):
            PredictionProblem(DATA, Trajectory(np.zeros((1, 2)), [[1.0]]), [2.0], lag=1)

    def test_negative_lag(self):
        with pytest.raises(ValueError):
            PredictionProblem(DATA, INI, [2.0], lag=-1)

    def test_consistency_with_full_stack(self, rng):
        for _ in range(20):
            _, prob = random_problem(rng, 2, 1, 1)
            out = predict(prob)
            assert out.feasible
            (U_p, U_f, Y_p, Y_f), _ = prediction_matrices(prob)
            tail = prob.ini.tail(prob.lag)
            full = np.concatenate([tail.u.ravel(), prob.u_f.ravel(), tail.y.ravel(), out.y_f.ravel()])
            sol = solve_min_norm(np.vstack([U_p, U_f, Y_p, Y_f]), full)
            assert sol.residual <= prob.residual_tol

    def test_solution_independence(self, rng):
        checked = 0
        for _ in range(30):
            _, prob = random_problem(rng, int(rng.integers(1, 4)), 1, 2)
            (U_p, U_f, Y_p, Y_f), b = prediction_matrices(prob)
            sol = solve_min_norm(np.vstack([U_p, U_f, Y_p]), b)
            assert sol.kernel.shape[1] > 0
            out = predict(prob)
            assert out.unique_certificate
            for _ in range(3):
                g2 = sol.g + sol.kernel @ rng.standard_normal(sol.kernel.shape[1])
                np.testing.assert_allclose(Y_f @ g2, out.y_f.ravel(), atol=1e-9)
                checked += 1
        assert checked == 90

    def test_ground_truth(self, rng):
        for _ in range(40):
            n, m, p = int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(1, 3))
            sys, prob = random_problem(rng, n, m, p, T_f=int(rng.integers(1, 5)),
                                       extra_ini=int(rng.integers(0, 2)))
            truth = continue_trajectory(sys, prob.ini, prob.u_f)
            scale = max(1.0, np.max(np.abs(truth)))
            for out in (predict(prob), predict_and_weave(prob)):
                assert out.feasible
                assert np.max(np.abs(out.y_f - truth)) <= 1e-6 * scale

    def test_pe_sufficiency(self, rng):
        trials = 0
        while trials < 30:
            n, m, p = int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(1, 3))
            T_f = int(rng.integers(1, 4))
            sys, prob = random_problem(rng, n, m, p, T_f=T_f)
            if not is_persistently_exciting(prob.data.u, prob.lag + T_f + n):
                continue
            out = predict(prob)
            assert out.feasible and out.unique_certificate
            trials += 1


class TestWeave:
    def test_zero_overlap_concatenates(self):
        w = weave(DATA, INI, 0)
        assert w.u.ravel().tolist() == [1.0, -1.0, 1.0, -2.0]
        assert w.y.ravel().tolist() == [0.0, 1.0, 0.0, 1.0]

    def test_alternating_pieces(self):
        w = weave(Trajectory([-2.0, 2.0], [1.0, -1.0]), Trajectory([2.0, -2.0], [-1.0, 1.0]), 1)
        assert w.u.ravel().tolist() == [-2.0, 2.0, -2.0]
        assert w.y.ravel().tolist() == [1.0, -1.0, 1.0]

    def test_mismatch(self):
        with pytest.raises(ValueError, match="differ on the overlap"):
            weave(Trajectory([-2.0, 2.0], [1.0, -1.0]), Trajectory([2.0, -2.0], [0.0, 1.0]), 1)

    def test_overlap_too_long(self):
        with pytest.raises(ValueError):
            weave(INI, DATA, 2)

    def test_tolerance(self):
        a = Trajectory([0.0, 1.0], [0.0, 1.0])
        b = Trajectory([1.0 + 1e-12, 2.0], [1.0, 2.0])
        assert weave(a, b, 1).T == 3

    def test_closure_at_lag(self, rng):
        for _ in range(30):
            sys = random_system(rng, int(rng.integers(1, 4)), 1, int(rng.integers(1, 3)), radius=0.9)
            ell = lag(sys).lag
            u1 = rng.standard_normal((ell + 3, 1))
            first = Trajectory(u1, simulate(sys, rng.standard_normal(sys.n), u1))
            # second piece restarts from a state consistent with the tail of first
            x_tail = np.linalg.lstsq(observability_matrix(sys, ell), (first.tail(ell).y.ravel()
                                     - toeplitz_matrix(sys, ell) @ first.tail(ell).u.ravel()), rcond=None)[0]
            u2 = np.vstack([first.tail(ell).u, rng.standard_normal((4, 1))])
            second = Trajectory(u2, simulate(sys, x_tail, u2))
            assert is_trajectory(sys, weave(first, second, ell))

    def test_overlap_below_lag_can_fail(self, ex2_system):
        zero_u = np.zeros((2, 1))
        first = Trajectory(zero_u, simulate(ex2_system, [0.0, 0.0], zero_u))
        second = Trajectory(zero_u, simulate(ex2_system, [1.0, 0.0], zero_u))
        assert is_trajectory(ex2_system, first) and is_trajectory(ex2_system, second)
        woven = weave(first, second, 1)
        assert woven.y.ravel().tolist() == [0.0, 0.0, 1.0]
        assert not is_trajectory(ex2_system, woven)


class TestPredictAndWeave:
    def test_two_steps(self):
        out = predict_and_weave(PredictionProblem(DATA, INI, [2.0, -2.0], lag=1))
        np.testing.assert_allclose(out.y_f.ravel(), [-1.0, 1.0], atol=1e-9)
        assert len(out.per_step) == 2 and out.failed_step is None

    def test_long_alternating_input(self):
        u_f, y_f = alternating(6)
        out = predict_and_weave(PredictionProblem(DATA, INI, u_f, lag=1))
        np.testing.assert_allclose(out.y_f.ravel(), y_f, atol=1e-9)
        assert out.unique_certificate

    def test_column_growth(self):
        u_f, _ = alternating(4)
        out = predict_and_weave(PredictionProblem(DATA, INI, u_f, lag=1))
        # two data columns; the running trajectory adds one column per sample beyond the first
        assert [s.columns for s in out.per_step] == [2, 3, 4, 5]

    def test_null_at_first_step(self):
        zero = Trajectory(np.zeros((3, 1)), np.zeros((3, 1)))
        out = predict_and_weave(PredictionProblem(zero, zero.tail(1), [1.0, 0.0], lag=1))
        assert not out.feasible and out.failed_step == 0
        assert len(out.per_step) == 1 and not out.per_step[0].feasible

    def test_empty_future(self):
        out = predict_and_weave(PredictionProblem(DATA, INI, np.zeros((0, 1)), lag=1))
        assert out.feasible and out.per_step == ()

    def test_agrees_with_direct_prediction(self, rng):
        compared = 0
        for _ in range(30):
            _, prob = random_problem(rng, int(rng.integers(1, 4)), 1, 1, T_f=4)
            a, b = predict(prob), predict_and_weave(prob)
            if a.feasible and b.feasible and a.unique_certificate and b.unique_certificate:
                np.testing.assert_allclose(a.y_f, b.y_f, atol=1e-8)
                compared += 1
        assert compared >= 25


class TestInformativityReport:
    def test_example_conditions_met(self):
        prob = PredictionProblem(DATA, INI, [2.0, -2.0], lag=1)
        rep = check_informativity_conditions(prob, predict_and_weave(prob))
        assert rep.lag_condition and rep.prediction_produced and rep.unique_certificate
        assert rep.sufficient and rep.status == "established"

    def test_short_initial_trajectory(self):
        zero = Trajectory(np.zeros((2, 1)), np.zeros((2, 1)))
        prob = PredictionProblem(zero, zero.tail(1), [0.0], lag=2)
        rep = check_informativity_conditions(prob, None)
        assert not rep.lag_condition and not rep.sufficient
        assert rep.status == "not established"
        assert "T_ini=1 < lag=2" in rep.lines()[0]

    def test_null_outcome(self):
        prob = PredictionProblem(DATA, INI, [2.0, -2.0], lag=1)
        rep = check_informativity_conditions(prob, predict(prob))
        assert rep.lag_condition and not rep.prediction_produced and not rep.unique_certificate
        assert "not informative" not in " ".join(rep.lines())
