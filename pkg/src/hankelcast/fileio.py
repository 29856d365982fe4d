"""Trajectory CSV files and JSON system files.

Trajectory files have a header ``t,u1,...,um,y1,...,yp`` (output columns may
be absent for input-only files) and one row per sample with ``t`` equal to
the row index. System files are JSON objects::

    {"n": 1, "m": 1, "p": 1, "A": [1], "B": [1], "C": [1], "D": [0]}

with matrices listed row-major (nested lists are also accepted).
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from .lti import StateSpace, Trajectory


class FileFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TrajectoryFile:
    """Parsed trajectory file. ``y`` is None for input-only files."""

    u: np.ndarray
    y: np.ndarray | None

    @property
    def T(self) -> int:
        return self.u.shape[0]

    def trajectory(self) -> Trajectory:
        if self.y is None:
            raise FileFormatError("file has no output columns")
        return Trajectory(self.u, self.y)


_COL = re.compile(r"^([uy])(\d+)$")


def _parse_header(header: list[str]) -> tuple[int, int]:
    header = [h.strip() for h in header]
    if not header or header[0] != "t":
        raise FileFormatError("first column must be 't'")
    names = header[1:]
    m = p = 0
    for i, name in enumerate(names):
        match = _COL.match(name)
        if not match:
            raise FileFormatError(f"unexpected column name {name!r}")
        kind, idx = match.group(1), int(match.group(2))
        if kind == "u":
            if p or idx != m + 1:
                raise FileFormatError(f"column {name!r} out of order")
            m += 1
        else:
            if idx != p + 1:
                raise FileFormatError(f"column {name!r} out of order")
            p += 1
    return m, p


def parse_trajectory(text: str) -> TrajectoryFile:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        return TrajectoryFile(np.zeros((0, 0)), None)
    m, p = _parse_header(rows[0])
    width = 1 + m + p
    values = np.zeros((len(rows) - 1, m + p))
    for k, row in enumerate(rows[1:]):
        if len(row) != width:
            raise FileFormatError(f"row {k + 1} has {len(row)} cells, expected {width}")
        try:
            cells = [float(c) for c in row]
        except ValueError as exc:
            raise FileFormatError(f"row {k + 1}: {exc}") from None
        if cells[0] != k:
            raise FileFormatError(f"row {k + 1}: time {row[0]!r} should be {k}")
        values[k] = cells[1:]
    return TrajectoryFile(values[:, :m].copy(), values[:, m:].copy() if p else None)


def read_trajectory(path) -> TrajectoryFile:
    try:
        return parse_trajectory(Path(path).read_text())
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None


def _cell(v: float) -> str:
    return repr(float(v))


def format_trajectory(u: np.ndarray, y: np.ndarray | None = None) -> str:
    u = np.asarray(u, dtype=float)
    m = u.shape[1]
    p = 0 if y is None else y.shape[1]
    header = ["t"] + [f"u{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(p)]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for t in range(u.shape[0]):
        row = [str(t)] + [_cell(v) for v in u[t]]
        if y is not None:
            row += [_cell(v) for v in y[t]]
        writer.writerow(row)
    return out.getvalue()


def write_trajectory(traj: Trajectory, stream: TextIO) -> None:
    stream.write(format_trajectory(traj.u, traj.y))


def parse_system(text: str) -> StateSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"system file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FileFormatError("system file must hold a JSON object")
    try:
        n, m, p = (int(doc[k]) for k in ("n", "m", "p"))
    except (KeyError, TypeError, ValueError):
        raise FileFormatError("system file needs integer fields n, m, p") from None
    if min(n, m, p) < 0:
        raise FileFormatError("dimensions must be nonnegative")
    mats = {}
    for key, shape in (("A", (n, n)), ("B", (n, m)), ("C", (p, n)), ("D", (p, m))):
        try:
            flat = np.asarray(doc.get(key, []), dtype=float).ravel()
        except (TypeError, ValueError):
            raise FileFormatError(f"{key} must be a numeric array") from None
        if flat.size != shape[0] * shape[1]:
            raise FileFormatError(
                f"{key} has {flat.size} entries, expected {shape[0]}x{shape[1]}={shape[0] * shape[1]}")
        mats[key] = flat.reshape(shape)
    return StateSpace(mats["A"], mats["B"], mats["C"], mats["D"])


def read_system(path) -> StateSpace:
    try:
        return parse_system(Path(path).read_text())
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None


def format_system(sys: StateSpace) -> str:
    doc = {"n": sys.n, "m": sys.m, "p": sys.p,
           "A": sys.A.ravel().tolist(), "B": sys.B.ravel().tolist(),
           "C": sys.C.ravel().tolist(), "D": sys.D.ravel().tolist()}
    return json.dumps(doc) + "\n"


def looks_like_system(text: str) -> bool:
    return text.lstrip().startswith("{")
