"""Time the compiled and pure-Python ascent kernels on the same duality problems.

    python3 bench/bench_kernels.py [--levels 2 4 6] [--repeat 3]
"""

import argparse
import statistics
import time

from varsel import golden, kernels
from varsel.duality import estimate_bv_sup, estimate_Ih_conjugate

CASES = {
    "shrink/continuous": ("shrinkDom", "dirac05", "lebesgue", estimate_Ih_conjugate),
    "mixed/continuous": ("mixedPLQ", "mixed", "twoDensities", estimate_Ih_conjugate),
    "mixed/bv": ("mixedPLQ", "mixed", "twoDensities", estimate_bv_sup),
}


def timed(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, nargs="+", default=[2, 4, 6])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if kernels.BACKEND != "compiled":
        raise SystemExit("compiled extension not available; build with `pip install -e . --no-build-isolation`")
    hs, ths, mus = golden.integrands(), golden.signed_measures(), golden.measures()
    print(f"{'case':20s} {'level':>5s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s} {'|diff|':>9s}")
    for name, (h, th, mu, fn) in CASES.items():
        for lev in args.levels:
            run = lambda b: fn(hs[h], ths[th], mus[mu], levels=lev, backend=b)
            tp, ep = timed(lambda: run("python"), args.repeat)
            tc, ec = timed(lambda: run("compiled"), args.repeat)
            print(f"{name:20s} {lev:5d} {tp:10.4f} {tc:11.4f} {tp / tc:8.1f} {abs(ep[-1] - ec[-1]):9.1e}")


if __name__ == "__main__":
    main()
