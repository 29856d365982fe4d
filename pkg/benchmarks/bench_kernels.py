"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 2000]

Prints one line per kernel with the best time of each backend and the
speed-up. The compiled column reads "n/a" when the extension is not built.
"""
import argparse
import timeit

import numpy as np

from hankelcast import _fallback

try:
    from hankelcast import _ckernels
except ImportError:
    _ckernels = None


def cases(T, rng):
    n, m, p = 4, 2, 2
    A = rng.standard_normal((n, n))
    A *= 0.9 / max(abs(np.linalg.eigvals(A)))
    B, C, D = rng.standard_normal((n, m)), rng.standard_normal((p, n)), rng.standard_normal((p, m))
    x0, u = rng.standard_normal(n), rng.standard_normal((T, m))
    w = rng.standard_normal((T, m + p))
    lags, taps = 0.2 * rng.standard_normal((3, p, p)), rng.standard_normal((4, p, m))
    y_rec = np.zeros((T + 3, p))
    u_rec = rng.standard_normal((T + 3, m))

    def roll(mod):
        y = y_rec.copy()
        mod.roll_recursion(lags, taps, y, u_rec, 3)

    return {
        f"simulate (T={T}, n=4, m=2, p=2)": lambda mod: mod.simulate(A, B, C, D, x0, u),
        f"hankel (T={T}, q=4, depth=20)": lambda mod: mod.hankel(w, 20),
        f"roll_recursion (T={T}, 3 lags, 4 taps)": roll,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=2000, help="signal length")
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':45s} {'python':>12s} {'compiled':>12s} {'speed-up':>9s}")
    for name, fn in cases(args.size, rng).items():
        t_py = min(timeit.repeat(lambda: fn(_fallback), number=10, repeat=args.repeat)) / 10
        if _ckernels is None:
            print(f"{name:45s} {t_py * 1e3:10.3f}ms {'n/a':>12s} {'':>9s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=10, repeat=args.repeat)) / 10
        print(f"{name:45s} {t_py * 1e3:10.3f}ms {t_c * 1e3:10.3f}ms {t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
