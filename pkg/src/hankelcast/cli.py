"""Command-line front end.

Exit status is 0 on success or a positive verdict, 1 on a negative verdict
(prediction not established, a check that fails, a failed reproduction) and
2 on usage, parse or dimension errors.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .fileio import (
    FileFormatError,
    format_trajectory,
    looks_like_system,
    parse_system,
    parse_trajectory,
    read_system,
    read_trajectory,
)
from .hankel import hankel, is_persistently_exciting
from .lti import DEFAULT_RANK_TOL, as_signal, lag, numerical_rank, simulate, unique_continuation
from .predictor import DEFAULT_RESIDUAL_TOL, PredictionProblem, predict, predict_and_weave
from .scenarios import SCENARIOS
from .verification import kernel_uniqueness_oracle

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _tolerance(flag: float | None, env: str, default: float) -> float:
    if flag is not None:
        return flag
    raw = os.environ.get(env)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{env}={raw!r} is not a number") from None


def _bool(v: bool) -> str:
    return "true" if v else "false"


def cmd_simulate(args, out) -> int:
    sys_ = read_system(args.system)
    tf = read_trajectory(args.input)
    u = as_signal(tf.u, sys_.m)
    if args.x0:
        try:
            x0 = np.array([float(v) for v in args.x0.split(",")])
        except ValueError:
            raise UsageError(f"cannot parse x0 {args.x0!r}") from None
    else:
        x0 = np.zeros(sys_.n)
    if x0.shape[0] != sys_.n:
        raise UsageError(f"x0 has width {x0.shape[0]}, expected n={sys_.n}")
    y = simulate(sys_, x0, u)
    out.write(format_trajectory(u, y))
    return EXIT_OK


def cmd_predict(args, out) -> int:
    data = read_trajectory(args.data).trajectory()
    ini = read_trajectory(args.ini).trajectory()
    u_f = read_trajectory(args.future).u
    if args.lag > ini.T:
        raise UsageError(f"--lag {args.lag} exceeds the initial trajectory length T_ini={ini.T}")
    prob = PredictionProblem(
        data, ini, as_signal(u_f, data.m), lag=args.lag,
        residual_tol=_tolerance(args.residual_tol, "HANKELCAST_RESIDUAL_TOL", DEFAULT_RESIDUAL_TOL),
        rank_tol=_tolerance(args.rank_tol, "HANKELCAST_RANK_TOL", DEFAULT_RANK_TOL),
    )
    outcome = predict_and_weave(prob) if args.weave else predict(prob)
    diag = [
        f"mode={'weave' if args.weave else 'direct'}",
        f"residual={outcome.residual:.6e}",
        f"unique_certificate={_bool(outcome.unique_certificate)}",
        f"g_norm={outcome.g_norm:.6e}",
    ]
    for s in outcome.per_step or ():
        diag.append(f"step={s.step} feasible={_bool(s.feasible)} residual={s.residual:.6e} "
                    f"unique_certificate={_bool(s.unique_certificate)} columns={s.columns}")
    if not outcome.feasible:
        out.write("PREDICTION NOT ESTABLISHED\n")
        if outcome.failed_step is not None:
            out.write(f"failed_step={outcome.failed_step}\n")
        for line in diag:
            out.write(line + "\n")
        return EXIT_NEGATIVE
    out.write(format_trajectory(prob.u_f, outcome.y_f))
    for line in diag:
        out.write(f"# {line}\n")
    return EXIT_OK


def cmd_check(args, out) -> int:
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as exc:
        raise FileFormatError(f"cannot read {args.file}: {exc.strerror}") from None
    rank_tol = _tolerance(args.rank_tol, "HANKELCAST_RANK_TOL", DEFAULT_RANK_TOL)
    is_system = looks_like_system(text)

    if args.pe_order is not None:
        if is_system:
            raise UsageError("--pe-order needs a trajectory file")
        u = parse_trajectory(text).u
        H = hankel(u, args.pe_order)
        holds = is_persistently_exciting(u, args.pe_order, rank_tol)
        verdict = "holds" if holds else "fails"
        out.write(f"persistency of excitation of order {args.pe_order}: {verdict}\n")
        out.write(f"pe_order={args.pe_order}\nrank={numerical_rank(H.data, rank_tol)}\n"
                  f"required_rank={H.data.shape[0]}\nholds={_bool(holds)}\n")
        return EXIT_OK if holds else EXIT_NEGATIVE

    if not is_system:
        raise UsageError("--lag and --unique-continuation need a system file")
    sys_ = parse_system(text)
    report = lag(sys_, rank_tol)
    if args.lag:
        out.write(f"lag of the system is {report.lag}\n")
        out.write(f"lag={report.lag}\n")
        out.write("observability_ranks=" + ",".join(map(str, report.observability_ranks)) + "\n")
        return EXIT_OK
    T_ini, T_f = args.unique_continuation
    if T_ini < 0 or T_f < 0:
        raise UsageError("T_ini and T_f must be nonnegative")
    holds = unique_continuation(sys_, T_ini, T_f, rank_tol)
    verdict = "holds" if holds else "fails"
    out.write(f"unique continuation from {T_ini} past samples over {T_f} steps: {verdict}\n")
    out.write(f"lag={report.lag}\nT_ini={T_ini}\nT_f={T_f}\nunique={_bool(holds)}\n")
    if T_f >= 1:
        out.write(f"kernel_oracle={_bool(kernel_uniqueness_oracle(sys_, T_ini, T_f, rank_tol))}\n")
    return EXIT_OK if holds else EXIT_NEGATIVE


def cmd_hankel(args, out) -> int:
    tf = read_trajectory(args.file)
    if args.signal == "u":
        w = tf.u
    elif tf.y is None:
        raise UsageError("file has no output columns")
    elif args.signal == "y":
        w = tf.y
    else:
        w = np.hstack([tf.u, tf.y])
    H = hankel(w, args.depth).data
    out.write(f"# signal={args.signal} depth={args.depth} rows={H.shape[0]} cols={H.shape[1]}\n")
    if H.shape[1]:
        for row in H:
            out.write(",".join(repr(float(v)) for v in row) + "\n")
    return EXIT_OK


def cmd_reproduce(args, out) -> int:
    run = SCENARIOS[args.example]
    rep = run(args.seed) if args.example == "sec5" else run()
    out.write(rep.render())
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hankelcast",
        description="Predict outputs of an unknown LTI system directly from measured data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a state-space system on an input file")
    p.add_argument("system", help="system file (JSON)")
    p.add_argument("input", help="trajectory CSV; only the u columns are used")
    p.add_argument("--x0", default=None, help="initial state, comma separated (default zeros)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="predict future outputs from data")
    p.add_argument("data", help="data trajectory CSV")
    p.add_argument("ini", help="initial trajectory CSV")
    p.add_argument("future", help="future input CSV")
    p.add_argument("--lag", type=_nonneg_int, required=True, help="upper bound on the lag")
    p.add_argument("--weave", action="store_true", help="predict one step at a time and weave")
    p.add_argument("--residual-tol", type=float, default=None)
    p.add_argument("--rank-tol", type=float, default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("check", help="lag, unique continuation or persistency of excitation")
    p.add_argument("file", help="system file (JSON) or trajectory CSV")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pe-order", type=_nonneg_int, metavar="K")
    g.add_argument("--lag", action="store_true")
    g.add_argument("--unique-continuation", type=int, nargs=2, metavar=("T_INI", "T_F"))
    p.add_argument("--rank-tol", type=float, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hankel", help="print a depth-k Hankel matrix as CSV")
    p.add_argument("file", help="trajectory CSV")
    p.add_argument("--depth", type=_nonneg_int, required=True)
    p.add_argument("--signal", choices=("u", "y", "w"), default="u",
                   help="input, output, or both stacked per sample")
    p.set_defaults(func=cmd_hankel)

    p = sub.add_parser("reproduce", help="run one of the worked examples")
    p.add_argument("example", choices=sorted(SCENARIOS))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        # FileFormatError and DimensionError are ValueErrors
        print(f"hankelcast {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
