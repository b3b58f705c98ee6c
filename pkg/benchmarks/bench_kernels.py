"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]
"""

import argparse
import timeit

import numpy as np

from orlicz_lab import _fallback

try:
    from orlicz_lab import _core
except ImportError:  # pragma: no cover
    _core = None


def cases(rng):
    for N, Nt in ((32, 33), (64, 65), (128, 129)):
        g, v, tw = rng.normal(size=N), rng.normal(size=(N, Nt)), rng.normal(size=Nt)
        yield f"increment_kernel_sum N={N} Nt={Nt}", "increment_kernel_sum", (g, v, tw)
    for N in (1024, 16384, 262144):
        yield f"ball_max_1d N={N}", "ball_max_1d", (np.abs(rng.normal(size=N)),)


def best_time(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'case':38s} {'fallback':>11s} {'cython':>11s} {'speedup':>8s} {'max diff':>9s}")
    for label, name, data in cases(rng):
        t_py = best_time(getattr(_fallback, name), data, args.repeat)
        if _core is None:
            print(f"{label:38s} {t_py * 1e3:9.3f}ms {'n/a':>11s}")
            continue
        t_c = best_time(getattr(_core, name), data, args.repeat)
        diff = float(np.max(np.abs(getattr(_core, name)(*data) - getattr(_fallback, name)(*data))))
        print(f"{label:38s} {t_py * 1e3:9.3f}ms {t_c * 1e3:9.3f}ms {t_py / t_c:7.2f}x {diff:9.1e}")


if __name__ == "__main__":
    main()
