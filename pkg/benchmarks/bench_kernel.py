#!/usr/bin/env python3
"""Benchmark the compiled closure kernel against the pure-Python one.

Times the three hot operations (polar, biclosure, closed-set enumeration)
on product carriers of increasing width and prints a speedup table.

    python3 benchmarks/bench_kernel.py [--repeat N] [--seed S]
"""

import argparse
import random
import time

from platlab import make_mo, sharp
from platlab._kernel import pykernel

try:
    from platlab._kernel import ckernel
except ImportError:
    ckernel = None


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(repeat, seed):
    rng = random.Random(seed)
    carriers = [("mo2 x mo2 (16)", sharp(make_mo(2), make_mo(2))),
                ("mo3 x mo3 (36)", sharp(make_mo(3), make_mo(3))),
                ("mo4 x mo4 (64)", sharp(make_mo(4), make_mo(4)))]
    kernels = [("python", pykernel)]
    if ckernel is not None:
        kernels.append(("c", ckernel))
    else:
        print("compiled kernel unavailable; timing the pure kernel only\n")

    header = f"{'carrier':<16} {'operation':<22}" + \
        "".join(f"{name:>12}" for name, _ in kernels)
    if len(kernels) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for label, prod in carriers:
        masks = [rng.randrange(1 << prod.size) for _ in range(2000)]
        ops = [
            ("polar x2000", lambda k: [k.polar(prod.rows, m, prod.full)
                                       for m in masks]),
            ("biclosure x2000", lambda k: [k.biclosure(prod.rows, m,
                                                       prod.full)
                                           for m in masks]),
            ("enumerate closed", lambda k: k.intersection_closure(
                prod.rows, prod.full)),
        ]
        for opname, op in ops:
            times = [bench(lambda k=kern: op(k), repeat)
                     for _, kern in kernels]
            row = f"{label:<16} {opname:<22}" + \
                "".join(f"{t * 1e3:>10.2f}ms" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)
        print()


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="best-of-N timing (default 3)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(args.repeat, args.seed)
