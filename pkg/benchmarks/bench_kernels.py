#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled extension.

Measures the two hot primitives (reachability closure, canonical labeling)
and one composite workload (exhaustive butterfly-minor search).  Run after an
editable install; the compiled backend is skipped if the extension did not
build.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import time

from strata._kernels import pure

try:
    from strata._kernels import _ckern
except ImportError:
    _ckern = None


def random_instances(seed, count, n_range=(5, 8), multi=False):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(*n_range)
        counts = bytearray(n * n)
        adj = [0] * n
        for i in range(n):
            for j in range(n):
                if i != j and rng.random() < 0.35:
                    counts[i * n + j] = rng.randint(1, 3) if multi else 1
                    adj[i] |= 1 << j
        out.append((n, bytes(counts), adj))
    return out


def bench(label, fn, repeat):
    best = min(timeit(fn) for _ in range(repeat))
    print(f"  {label:<28} {best * 1000:8.1f} ms")
    return best


def timeit(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    insts = random_instances(1, 400)
    multis = random_instances(2, 400, multi=True)

    backends = [("pure", pure)]
    if _ckern is not None:
        backends.append(("compiled", _ckern))
    else:
        print("compiled kernel unavailable; benchmarking the pure backend only")

    print(f"closure: {len(insts)} graphs, 5-8 vertices")
    times = {}
    for name, mod in backends:
        times[name] = bench(name, lambda m=mod: [m.closure(n, adj) for n, _, adj in insts],
                            args.repeat)
    _speedup(times)

    print(f"canonical_key: {len(multis)} multigraphs, 5-8 vertices")
    times = {}
    for name, mod in backends:
        times[name] = bench(
            name, lambda m=mod: [m.canonical_key(n, c) for n, c, _ in multis],
            args.repeat)
    _speedup(times)

    print("butterfly-minor oracle: 4 containment queries on 7-vertex hosts")
    from strata.families import directed_cycle, random_sc_digraph
    from strata import oracle

    hosts = [random_sc_digraph(7, seed=s, p=0.25) for s in range(4)]
    target = directed_cycle(4)
    saved = oracle.canonical_key
    times = {}
    try:
        for name, mod in backends:
            oracle.canonical_key = mod.canonical_key  # swap the kernel in place
            times[name] = bench(
                name,
                lambda: [oracle.is_butterfly_minor_bruteforce(
                    target, h, oracle.SearchBudget(max_steps=2_000_000)) for h in hosts],
                args.repeat)
    finally:
        oracle.canonical_key = saved
    _speedup(times)


def _speedup(times):
    if "compiled" in times and "pure" in times and times["compiled"] > 0:
        print(f"  speedup: {times['pure'] / times['compiled']:.1f}x\n")
    else:
        print()


if __name__ == "__main__":
    main()
