"""Block-Hankel data matrices, mosaics of them, and rank checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .lti import DEFAULT_RANK_TOL, DimensionError, as_signal, numerical_rank

__all__ = [
    "HankelBlock",
    "hankel",
    "mosaic",
    "stack_partition",
    "numerical_rank",
    "is_persistently_exciting",
]


@dataclass(frozen=True)
class HankelBlock:
    """A depth-``k`` block-Hankel matrix (or a mosaic of several).

    ``data`` always has shape ``(signal_width * depth, columns)``, including
    when ``columns`` is zero.
    """

    data: np.ndarray
    depth: int
    signal_width: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] != self.signal_width * self.depth:
            raise DimensionError(
                f"data of shape {data.shape} does not fit depth {self.depth} "
                f"and signal width {self.signal_width}")
        data = np.array(data, order="C")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def columns(self) -> int:
        return self.data.shape[1]

    @property
    def is_void(self) -> bool:
        return self.data.size == 0

    def block(self, i: int, j: int) -> np.ndarray:
        q = self.signal_width
        return self.data[i * q:(i + 1) * q, j]


def hankel(w, k: int, width: int | None = None) -> HankelBlock:
    """Depth-``k`` Hankel matrix of the signal ``w``.

    Column ``j`` stacks ``w(j), ..., w(j+k-1)``. With fewer than ``k``
    samples the result is the ``qk x 0`` void matrix.

    >>> hankel([1, -1, 1], 2).data
    array([[ 1., -1.],
           [-1.,  1.]])
    """
    if k < 0:
        raise ValueError(f"depth must be nonnegative, got {k}")
    w = as_signal(w, width)
    return HankelBlock(_kernels.hankel(w, int(k)), depth=int(k), signal_width=w.shape[1])


def mosaic(blocks: Iterable[HankelBlock]) -> HankelBlock:
    """Side-by-side concatenation of Hankel blocks with equal depth and width."""
    blocks = list(blocks)
    if not blocks:
        raise ValueError("mosaic needs at least one block")
    depth, q = blocks[0].depth, blocks[0].signal_width
    for b in blocks[1:]:
        if b.depth != depth or b.signal_width != q:
            raise DimensionError(
                f"cannot join depth {b.depth}/width {b.signal_width} block to "
                f"depth {depth}/width {q}")
    return HankelBlock(np.hstack([b.data for b in blocks]), depth, q)


def stack_partition(u, y, past: int, future: int, *, m: int | None = None,
                    p: int | None = None,
                    extra: Iterable[tuple] = ()) -> tuple[np.ndarray, ...]:
    """Past/future row split of the depth ``past + future`` data matrices.

    Returns ``(U_p, U_f, Y_p, Y_f)`` with ``m*past``, ``m*future``,
    ``p*past`` and ``p*future`` rows. ``extra`` holds further ``(u, y)``
    trajectories whose Hankel matrices are appended as mosaic columns.
    """
    depth = past + future
    u = as_signal(u, m)
    y = as_signal(y, p)
    if u.shape[0] != y.shape[0]:
        raise DimensionError(f"input has {u.shape[0]} samples, output has {y.shape[0]}")
    m, p = u.shape[1], y.shape[1]
    Hu = [hankel(u, depth)]
    Hy = [hankel(y, depth)]
    for eu, ey in extra:
        Hu.append(hankel(eu, depth, m))
        Hy.append(hankel(ey, depth, p))
    Hu = mosaic(Hu).data
    Hy = mosaic(Hy).data
    return Hu[:m * past], Hu[m * past:], Hy[:p * past], Hy[p * past:]


def is_persistently_exciting(u, k: int, rank_tol: float = DEFAULT_RANK_TOL,
                             width: int | None = None) -> bool:
    """Whether the depth-``k`` Hankel matrix of ``u`` has full row rank ``m*k``."""
    H = hankel(u, k, width)
    return numerical_rank(H.data, rank_tol) == H.data.shape[0]
