"""Compare the compiled and pure-Python lattice point kernels.

    python3 benchmarks/bench_kernel.py [--repeat N]

Each workload is projected once; only the enumeration itself is timed.
"""

from __future__ import annotations

import argparse
import math
import timeit

from mcop import kernel
from mcop.document import load_fixture
from mcop.marked import all_chain, all_order
from mcop.polyhedron import dilate


def workloads():
    chain4 = load_fixture("chain4").marked_poset
    bad = load_fixture("ranked_bad_marking").marked_poset
    t3 = load_fixture("unranked_t3").marked_poset
    yield "4-chain order, m=2000", chain4, all_order(chain4), 2000
    yield "4-chain chain, m=2000", chain4, all_chain(chain4), 2000
    yield "5-dim counter-example, m=8", bad, all_order(bad), 8
    yield "5-dim counter-example chain, m=8", bad, all_chain(bad), 8
    yield "unranked t=3, m=150", t3, all_order(t3), 150


def levels_of(mp, part, m):
    h = dilate(mp, part, m)
    proj = h._projection
    return len(h.coords), [[(a, math.floor(b)) for a, b in rows] for rows in proj.levels]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["python"] + (["cython"] if kernel.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the Python backend only")
    header = f"{'workload':<34} {'points':>12}" + "".join(f" {b + ' (s)':>13}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>8}"
    print(header)
    for name, mp, part, m in workloads():
        n, levels = levels_of(mp, part, m)
        count = kernel.enumerate_levels(n, levels, True, backend="python")
        times = []
        for b in backends:
            t = timeit.Timer(lambda b=b: kernel.enumerate_levels(n, levels, True, backend=b))
            times.append(min(t.repeat(args.repeat, 1)))
        row = f"{name:<34} {count:>12}" + "".join(f" {t:>13.4f}" for t in times)
        if len(times) == 2:
            row += f" {times[0] / times[1]:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
