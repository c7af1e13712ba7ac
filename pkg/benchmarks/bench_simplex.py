"""Compare the pure-Python and compiled simplex kernels on identical inputs.

Three workloads, all exact-rational and solved to optimality/infeasibility:

  dense-random   random standard-form LPs of growing size,
  hull-batch     the membership feasibility systems produced by random
                 point sets, the dominant load in node classification,
  market-suite   full classification of generated markets through the
                 public interface, once per kernel via NOARB_KERNEL.

Results are wall-clock medians over repeats; both kernels must return
bit-identical (status, solution, value) triples on every instance.

Run:  python3 benchmarks/bench_simplex.py [--quick]
"""

from __future__ import annotations

import argparse
import os
import random
import statistics
import subprocess
import sys
import time
from fractions import Fraction

from noarb.simplex import available_kernels


def random_lp(rng, nvars, nrows):
    obj = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(nvars)]
    rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(nvars)]
            for _ in range(nrows)]
    rhs = [Fraction(rng.randint(0, 12), rng.randint(1, 2)) for _ in range(nrows)]
    return obj, rows, rhs


def hull_system(rng, d, npts):
    # feasibility rows of a hull-membership query: sum w y = x, sum w = 1
    pts = [[Fraction(rng.randint(-30, 30), rng.randint(1, 10)) for _ in range(d)]
           for _ in range(npts)]
    x = [Fraction(0)] * d
    rows = [[p[c] for p in pts] for c in range(d)] + [[Fraction(1)] * npts]
    rhs = x + [Fraction(1)]
    obj = [Fraction(0)] * npts
    return obj, rows, rhs


def timed(solve, instances, repeats):
    best = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = [solve(*inst) for inst in instances]
        best.append(time.perf_counter() - t0)
    return min(best), out


def bench_instances(name, instances, repeats):
    kernels = available_kernels()
    results = {}
    outputs = {}
    for kname, mod in kernels.items():
        elapsed, out = timed(mod.solve, instances, repeats)
        results[kname] = elapsed
        outputs[kname] = out
    names = sorted(outputs)
    for a, b in zip(names, names[1:]):
        assert outputs[a] == outputs[b], f"kernels disagree on {name}"
    line = f"{name:<28}"
    for kname in sorted(results):
        line += f"  {kname}: {results[kname]*1000:9.1f} ms"
    if len(results) == 2:
        line += f"  speedup: {results['python']/results['compiled']:.1f}x"
    print(line)


def bench_market_suite(quick):
    # classification drives the solver through the public API; measure each
    # kernel in a child process so the import-time selection applies
    seeds = "6" if quick else "40"
    code = (
        "import time\n"
        "from noarb.generators import GeneratorParams, generate_market\n"
        "from noarb.market import classify_market\n"
        "t0 = time.perf_counter()\n"
        f"for seed in range({seeds}):\n"
        "    ts = generate_market(GeneratorParams(3, 3, 3, seed))\n"
        "    classify_market(ts)\n"
        "print(time.perf_counter() - t0)\n"
    )
    times = {}
    for kernel in sorted(available_kernels()):
        env = dict(os.environ, NOARB_KERNEL=kernel)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        times[kernel] = float(out.stdout.strip())
    line = f"{'market-suite':<28}"
    for kname in sorted(times):
        line += f"  {kname}: {times[kname]*1000:9.1f} ms"
    if len(times) == 2:
        line += f"  speedup: {times['python']/times['compiled']:.1f}x"
    print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()
    rng = random.Random(2024)
    scale = 1 if args.quick else 3
    repeats = 2 if args.quick else 3

    print(f"kernels available: {', '.join(sorted(available_kernels()))}")
    small = [random_lp(rng, 6, 4) for _ in range(40 * scale)]
    medium = [random_lp(rng, 14, 9) for _ in range(12 * scale)]
    large = [random_lp(rng, 24, 16) for _ in range(4 * scale)]
    hulls = [hull_system(rng, 4, 24) for _ in range(20 * scale)]
    bench_instances("dense-random 6x4", small, repeats)
    bench_instances("dense-random 14x9", medium, repeats)
    bench_instances("dense-random 24x16", large, repeats)
    bench_instances("hull-batch d=4 n=24", hulls, repeats)
    bench_market_suite(args.quick)


if __name__ == "__main__":
    main()
