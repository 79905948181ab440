#!/usr/bin/env python3
"""Benchmark the mask-walk kernel: compiled extension vs pure Python.

The walk enumerates all 2^r subexpression masks of a reduced word, which is
the exponential hot loop behind cell catalogs and the point-count route.
Words ending at the longest elements of a few groups give realistic table
shapes; D4's longest word has 2^12 masks.

Usage: python benchmarks/bench_backends.py [--repeat N] [--types A3,B3,D4]
"""

import argparse
import time

import numpy as np

from klpoly import cellwalk
from klpoly.coxeter import CartanDatum, WeylGroup


def bench_word(group, word, repeat):
    mult, sign = group.kernel_tables()
    word0 = np.asarray([i - 1 for i in word], dtype=np.int32)
    results = {}
    for name in cellwalk.available_backends():
        walker = cellwalk.get_walker(name)
        walker(word0, mult, sign, 0)  # warm up, and fault in the tables
        best = min(
            _timed(walker, word0, mult, sign) for _ in range(repeat)
        )
        results[name] = best
    return results


def _timed(walker, word0, mult, sign):
    t0 = time.perf_counter()
    walker(word0, mult, sign, 0)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--types", default="A3,B3,D4")
    args = parser.parse_args()

    if not cellwalk.has_compiled():
        print("note: compiled kernel not built, timing the fallback only")

    print(f"{'type':<6} {'word len':>8} {'masks':>8} "
          f"{'python':>12} {'cython':>12} {'speedup':>8}")
    for label in args.types.split(","):
        group = WeylGroup(CartanDatum.from_label(label.strip()))
        w0 = group.longest_element()
        word = group.reduced_word(w0)
        results = bench_word(group, word, args.repeat)
        py = results.get("python")
        cy = results.get("cython")
        speedup = f"{py / cy:7.1f}x" if py and cy else "     n/a"
        print(
            f"{label:<6} {len(word):>8} {1 << len(word):>8} "
            f"{py * 1e3:>10.3f}ms {(cy * 1e3 if cy else float('nan')):>10.3f}ms {speedup}"
        )


if __name__ == "__main__":
    main()
