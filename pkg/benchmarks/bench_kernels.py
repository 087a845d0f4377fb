"""Compare the compiled and pure-Python portrait kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import time

from treeverb._backend import KERNELS
from treeverb.quotient import QuotientGroup, closure_raw, enumerate_raw, word_values_raw


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads(G: QuotientGroup, rng: random.Random):
    d, n = G.d, G.n
    elems = [G.encode([rng.choice(G.perms) for _ in range(G.size)]) for _ in range(2000)]
    k = G.kernel

    def products():
        for a, b in zip(elems, elems[1:]):
            k.mul(a, b)

    def inverses():
        for a in elems:
            k.inv(a)

    yield f"mul x2000 (d={d}, n={n})", products
    yield f"inv x2000 (d={d}, n={n})", inverses


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "cython" not in KERNELS:
        print("compiled kernel not built; only the Python fallback is available")
    rows = []
    for d, n in ((3, 4), (5, 3)):
        groups = {name: QuotientGroup(d, n, backend=name) for name in KERNELS}
        for name, G in groups.items():
            for label, fn in workloads(G, random.Random(0)):
                rows.append((label, name, _time(fn, args.repeat)))
    for name in KERNELS:
        G = QuotientGroup(3, 2, backend=name)
        elems = enumerate_raw(G)

        def chain(G=G, elems=elems):
            closure_raw(G, word_values_raw(G, elems, "commutator", whole_group=True))

        rows.append(("commutator closure in G_2 (d=3)", name, _time(chain, args.repeat)))
    base = {label: t for label, name, t in rows if name == "python"}
    print(f"{'workload':36} {'backend':8} {'seconds':>10} {'speedup':>8}")
    for label, name, t in rows:
        print(f"{label:36} {name:8} {t:10.4f} {base[label] / t:8.1f}x")


if __name__ == "__main__":
    main()
