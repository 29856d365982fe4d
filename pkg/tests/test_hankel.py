import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hankelcast import (
    DimensionError,
    HankelBlock,
    hankel,
    is_persistently_exciting,
    mosaic,
    numerical_rank,
    stack_partition,
)

U1 = [1.0, -1.0, 1.0]
Y1 = [0.0, 1.0, 0.0]


class TestHankel:
    def test_depth_two(self):
        np.testing.assert_array_equal(hankel(U1, 2).data, [[1.0, -1.0], [-1.0, 1.0]])

    def test_depth_three_single_column(self):
        np.testing.assert_array_equal(hankel(U1, 3).data, [[1.0], [-1.0], [1.0]])

    def test_too_short_is_void(self):
        H = hankel(U1, 4)
        assert H.data.shape == (4, 0) and H.is_void and H.columns == 0

    def test_depth_zero(self):
        assert hankel(U1, 0).data.shape == (0, 4)

    def test_vector_signal_blocks(self):
        w = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        H = hankel(w, 2)
        np.testing.assert_array_equal(H.data, [[1, 3], [2, 4], [3, 5], [4, 6]])
        np.testing.assert_array_equal(H.block(1, 0), [3.0, 4.0])

    def test_negative_depth(self):
        with pytest.raises(ValueError):
            hankel(U1, -1)

    def test_data_is_read_only(self):
        with pytest.raises(ValueError):
            hankel(U1, 2).data[0, 0] = 7.0

    def test_block_shape_validated(self):
        with pytest.raises(DimensionError):
            HankelBlock(np.zeros((3, 2)), depth=2, signal_width=1)

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(0, 12), st.integers(1, 3)),
                  elements=st.floats(-1e6, 1e6)),
           st.integers(0, 6))
    def test_shift_structure(self, w, k):
        H = hankel(w, k, w.shape[1])
        q, T = w.shape[1], w.shape[0]
        assert H.data.shape == (q * k, max(0, T - k + 1) if T >= k else 0)
        for j in range(H.columns):
            for i in range(k):
                np.testing.assert_array_equal(H.block(i, j), w[i + j])
        # block (i+1, j) equals block (i, j+1)
        for j in range(H.columns - 1):
            for i in range(k - 1):
                np.testing.assert_array_equal(H.block(i + 1, j), H.block(i, j + 1))


class TestMosaic:
    def test_single_block(self):
        H = hankel(U1, 2)
        np.testing.assert_array_equal(mosaic([H]).data, H.data)

    def test_void_is_identity(self):
        H = hankel(U1, 2)
        np.testing.assert_array_equal(mosaic([H, hankel([5.0], 2)]).data, H.data)

    def test_column_counts_add(self):
        out = mosaic([hankel(U1, 2), hankel(Y1, 2)])
        assert out.data.shape == (2, 4)

    def test_associative(self, rng):
        a, b, c = (hankel(rng.standard_normal((int(rng.integers(0, 6)), 2)), 2, 2) for _ in range(3))
        left = mosaic([mosaic([a, b]), c]).data
        right = mosaic([a, mosaic([b, c])]).data
        np.testing.assert_array_equal(left, right)

    @pytest.mark.parametrize("other", [lambda: hankel(U1, 3), lambda: hankel(np.ones((3, 2)), 2)])
    def test_mismatch(self, other):
        with pytest.raises(DimensionError):
            mosaic([hankel(U1, 2), other()])

    def test_empty_list(self):
        with pytest.raises(ValueError):
            mosaic([])


class TestStackPartition:
    def test_one_one(self):
        U_p, U_f, Y_p, Y_f = stack_partition(U1, Y1, 1, 1)
        np.testing.assert_array_equal(U_p, [[1.0, -1.0]])
        np.testing.assert_array_equal(U_f, [[-1.0, 1.0]])
        np.testing.assert_array_equal(Y_p, [[0.0, 1.0]])
        np.testing.assert_array_equal(Y_f, [[1.0, 0.0]])

    def test_one_two(self):
        U_p, U_f, Y_p, Y_f = stack_partition(U1, Y1, 1, 2)
        np.testing.assert_array_equal(U_p, [[1.0]])
        np.testing.assert_array_equal(U_f, [[-1.0], [1.0]])
        np.testing.assert_array_equal(Y_p, [[0.0]])
        np.testing.assert_array_equal(Y_f, [[1.0], [0.0]])

    def test_void_past(self):
        U_p, U_f, Y_p, Y_f = stack_partition(U1, Y1, 0, 1)
        assert U_p.shape == (0, 3) and Y_p.shape == (0, 3)
        np.testing.assert_array_equal(U_f, [U1])
        np.testing.assert_array_equal(Y_f, [Y1])

    def test_row_counts(self, rng):
        for _ in range(30):
            m, p = rng.integers(1, 3, size=2)
            T, ell, T_f = int(rng.integers(0, 10)), int(rng.integers(0, 4)), int(rng.integers(0, 4))
            parts = stack_partition(rng.standard_normal((T, m)), rng.standard_normal((T, p)), ell, T_f)
            rows = [m * ell, m * T_f, p * ell, p * T_f]
            assert [P.shape[0] for P in parts] == rows
            assert len({P.shape[1] for P in parts}) == 1

    def test_extra_columns(self):
        parts = stack_partition(U1, Y1, 1, 1, extra=[([-2.0], [1.0]), ([2.0, 3.0], [0.0, 1.0])])
        assert parts[0].shape == (1, 3)
        np.testing.assert_array_equal(parts[0][:, 2], [2.0])

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            stack_partition(U1, [0.0, 1.0], 1, 1)


class TestRank:
    def test_void(self):
        assert numerical_rank(np.zeros((0, 5))) == 0
        assert numerical_rank(np.zeros((3, 0))) == 0

    def test_identity(self):
        assert numerical_rank(np.eye(3)) == 3

    def test_rank_one(self):
        assert numerical_rank(np.array([[1.0, -1.0], [-1.0, 1.0]])) == 1

    def test_zero(self):
        assert numerical_rank(np.zeros((2, 2))) == 0

    def test_tolerance_is_relative(self):
        M = np.diag([1e8, 1e-5])
        assert numerical_rank(M) == 1
        assert numerical_rank(M, rank_tol=1e-16) == 2


class TestPersistentExcitation:
    def test_order_one(self):
        assert is_persistently_exciting(U1, 1)

    def test_order_two(self):
        assert not is_persistently_exciting(U1, 2)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_zero_input(self, k):
        assert not is_persistently_exciting(np.zeros(10), k)

    def test_random_input(self, rng):
        assert is_persistently_exciting(rng.uniform(-1, 1, size=(20, 2)), 4)

    def test_too_short(self):
        assert not is_persistently_exciting(U1, 4)
