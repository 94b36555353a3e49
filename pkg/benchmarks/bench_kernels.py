#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel backends.

Times LLL reduction, short-vector enumeration via the systole pipeline, the
full retraction flow, and a block of the product-family scan, each against
both backends.  Run from the repository root:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from latgeo import actions, core, flow, kernels  # noqa: E402
from latgeo.rng import random_conjugated_gram, stream  # noqa: E402
from latgeo.siegel import UpperHalfPoint  # noqa: E402


def workload_lll(grams):
    for q in grams:
        kernels.lll_reduce_gram(q)


def workload_systole(grams):
    for q in grams:
        core.systole_data(core.as_gram(q))


def workload_retract(grams):
    for q in grams:
        flow.well_rounded_retract(q)


def workload_scan():
    actions.product_grid((-0.5, 0.5, 0.78, 2.0), (24, 16))


def bench(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = stream(0, "bench")
    lll_in = [random_conjugated_gram(rng, 5) for _ in range(50)]
    sys_in = [
        actions._product_with_hex(UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0)))
        for _ in range(100)
    ]
    ret_in = [random_conjugated_gram(rng, 4) for _ in range(10)]

    workloads = [
        ("lll 5x5 x50", lambda: workload_lll(lll_in)),
        ("systole 4x4 x100", lambda: workload_systole(sys_in)),
        ("retract 4x4 x10", lambda: workload_retract(ret_in)),
        ("scan 24x16 grid", workload_scan),
    ]

    backends = ["pure"]
    try:
        kernels._select("compiled")
        backends.append("compiled")
    except ImportError:
        print("compiled backend unavailable; timing pure only")

    results = {}
    for backend in backends:
        kernels._select(backend)
        for name, fn in workloads:
            results[(backend, name)] = bench(fn, args.repeat)

    width = max(len(name) for name, _ in workloads)
    header = "%-*s %12s %12s %9s" % (width, "workload", "pure [s]", "compiled [s]", "speedup")
    print(header)
    print("-" * len(header))
    for name, _ in workloads:
        pure_t = results[("pure", name)]
        if ("compiled", name) in results:
            comp_t = results[("compiled", name)]
            print(
                "%-*s %12.4f %12.4f %8.1fx" % (width, name, pure_t, comp_t, pure_t / comp_t)
            )
        else:
            print("%-*s %12.4f %12s %9s" % (width, name, pure_t, "-", "-"))


if __name__ == "__main__":
    main()
