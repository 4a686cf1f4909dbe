"""Seeded instance generators: test families and CLI `gen` backends."""
from __future__ import annotations

import random

from .digraph import Digraph, StrataError, is_strongly_connected


def directed_cycle(n: int) -> Digraph:
    if n < 2:
        raise StrataError("cycle length must be >= 2")
    return Digraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def doubled_tree(edges: list[tuple[int, int]], n: int | None = None) -> Digraph:
    """D(T) for the undirected tree given by its edge list."""
    if n is None:
        n = max((max(e) for e in edges), default=0) + 1
    g = Digraph()
    for _ in range(n):
        g.add_vertex()
    for u, v in edges:
        g.add_edge(u, v)
        g.add_edge(v, u)
    return g


def star_tree_edges(k: int) -> list[tuple[int, int]]:
    """K_{1,k} with centre 0 and leaves 1..k."""
    return [(0, i) for i in range(1, k + 1)]


def path_tree_edges(k: int) -> list[tuple[int, int]]:
    """Path on k vertices 0..k-1."""
    return [(i, i + 1) for i in range(k - 1)]


def random_tree_edges(n: int, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(i), i) for i in range(1, n)]


def random_sc_digraph(n: int, seed: int, p: float = 0.3) -> Digraph:
    """Random simple strongly connected digraph by seeded rejection sampling."""
    if n < 1:
        raise StrataError("need at least one vertex")
    rng = random.Random(seed)
    for _ in range(10000):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
        d = Digraph.from_edges(n, pairs)
        if is_strongly_connected(d):
            return d
    raise StrataError(f"no strongly connected sample found for n={n}, p={p}")


def chain_of_cycles(p: int, seed: int, min_arc: int = 1, max_arc: int = 2,
                    min_shared: int = 1, max_shared: int = 2) -> tuple[Digraph, list[list[int]]]:
    """A chain of ``p`` directed cycles where consecutive cycles share a
    directed path of ``min_shared..max_shared`` vertices.

    Returns the graph and the cycle vertex sequences (each in cycle order).
    """
    if p < 1:
        raise StrataError("need at least one cycle")
    rng = random.Random(seed)
    g = Digraph()

    def fresh(k: int) -> list[int]:
        return [g.add_vertex() for _ in range(k)]

    cycles: list[list[int]] = []
    shared_prev: list[int] = []
    for j in range(p):
        shared_next = fresh(rng.randint(min_shared, max_shared)) if j < p - 1 else []
        fwd = fresh(rng.randint(min_arc, max_arc))
        back = fresh(rng.randint(min_arc, max_arc))
        seq = shared_prev + fwd + shared_next + back
        if len(seq) < 2:
            seq += fresh(2 - len(seq))
        for a, b in zip(seq, seq[1:] + seq[:1]):
            if not g.edges_between(a, b):
                g.add_edge(a, b)
        cycles.append(seq)
        shared_prev = shared_next
    return g, cycles


def attach_pendant_lobe(g: Digraph, at: int, length: int) -> int:
    """Attach a doubled path of ``length`` fresh vertices at ``at``; returns the tip."""
    prev = at
    tip = at
    for _ in range(length):
        v = g.add_vertex()
        g.add_edge(prev, v)
        g.add_edge(v, prev)
        prev = v
        tip = v
    return tip


def chain_with_pendant_lobes(p: int, seed: int, lobe_every: int = 3,
                             lobe_len: int = 1) -> tuple[Digraph, set[int]]:
    """Chain of cycles with doubled pendant paths on cycles spaced >= 3 apart.

    Returns the graph and the set U of lobe tips.
    """
    g, cycles = chain_of_cycles(p, seed)
    rng = random.Random(seed + 1)
    u: set[int] = set()
    for j in range(0, p, lobe_every):
        seq = cycles[j]
        others = set()
        if j > 0:
            others |= set(cycles[j - 1])
        if j + 1 < p:
            others |= set(cycles[j + 1])
        anchors = [v for v in seq if v not in others]
        if not anchors:
            continue
        at = anchors[rng.randrange(len(anchors))]
        u.add(attach_pendant_lobe(g, at, lobe_len))
    return g, u
