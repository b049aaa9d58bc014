"""Compare the compiled and numpy witness kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the point-following mask on the order-3^9 group (degree 27, no Cayley
table) and the table walk on a few small groups, for every available backend.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from jgroups import construct, kernels, witness


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_mask(G, k: int, impl, repeat: int) -> float:
    n = int(G.orders[k])
    kp = witness._kpow_rows(G, k)
    exps = np.arange(n - 1, -1, -1)
    xs = G.perms
    return best_of(lambda: kernels.product_mask(xs, kp, exps, True, impl=impl), repeat)


def bench_table(G, impl, repeat: int) -> float:
    xs = np.arange(G.order)

    def run():
        for k in range(G.order):
            n = int(G.orders[k])
            kernels.table_product_ids(G.table, xs, G.powers(k), np.arange(n - 1, -1, -1), True, impl=impl)

    G.table
    for k in range(G.order):
        G.powers(k)
    return best_of(run, repeat)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    impls = kernels.implementations()
    print(f"backends: {', '.join(sorted(impls))} (default {kernels.BACKEND})")

    G = construct.paper_3_9_group()
    k = G.handles["k"]
    print(f"\nmask over all x, {G.name} (order {G.order}, degree {G.degree})")
    base = None
    for name in sorted(impls, reverse=True):
        t = bench_mask(G, k, impls[name], args.repeat)
        base = base or t
        print(f"  {name:<7} {t * 1e3:9.2f} ms   x{t / base:6.2f}")

    for G in (construct.cyclic(199), construct.direct_product(construct.metacyclic(3, 7, 2), construct.cyclic(9)),
              construct.heisenberg(5)):
        print(f"\ntable walk, every k and every x, {G.name} (order {G.order})")
        base = None
        for name in sorted(impls, reverse=True):
            t = bench_table(G, impls[name], args.repeat)
            base = base or t
            print(f"  {name:<7} {t * 1e3:9.2f} ms   x{t / base:6.2f}")


if __name__ == "__main__":
    main()
