"""Laced pairs of directed paths.

Two directed paths P and Q are laced when they are disjoint or the weakly
connected components of their intersection are shared segments appearing in
opposite orders along the two paths, with connector segments that stay off P.
Lacedness is the workhorse witness for two-way connectivity: any returning
path can be rerouted into a laced one without leaving P union Q, and a laced
out-and-back pair contracts to a double path, or decomposes into a chain of
directed cycles.
"""
from __future__ import annotations

from dataclasses import dataclass

from .butterfly import MinorTrace, TraceBuilder
from .digraph import (
    CycleChain,
    DiCycle,
    Digraph,
    DiPath,
    StrataError,
    path_segment,
)


@dataclass(frozen=True)
class LacedWitness:
    """The vertices x_1,y_1,...,x_l,y_l certifying that two paths are laced.

    ``pairs`` is empty exactly when the paths are disjoint.  The witness is
    canonical: pair i spans the i-th weak component of the path intersection
    in the order the components appear on P.
    """

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def validate(self, p: DiPath, q: DiPath) -> bool:
        """Check the five defining conditions directly against P and Q."""
        if not self.pairs:
            return not (p.vertex_set() & q.vertex_set())
        xs = [x for x, _ in self.pairs]
        ys = [y for _, y in self.pairs]
        shared = p.vertex_set() & q.vertex_set()
        if any(v not in shared for v in xs + ys):
            return False
        # (1) x_1 <=_P y_1 <_P x_2 <=_P y_2 <_P ...
        seq_p = []
        for x, y in self.pairs:
            seq_p += [p.index_of(x), p.index_of(y)]
        if any(b < a for a, b in zip(seq_p, seq_p[1:])):
            return False
        if any(seq_p[i + 1] >= seq_p[i + 2] for i in range(0, len(seq_p) - 2, 2)):
            return False
        # (2) x_l <=_Q y_l <_Q ... <_Q x_1 <=_Q y_1
        seq_q = []
        for x, y in reversed(self.pairs):
            seq_q += [q.index_of(x), q.index_of(y)]
        if any(b < a for a, b in zip(seq_q, seq_q[1:])):
            return False
        if any(seq_q[i + 1] >= seq_q[i + 2] for i in range(0, len(seq_q) - 2, 2)):
            return False
        # (3) x_i P y_i = x_i Q y_i, as vertex and edge sequences
        for x, y in self.pairs:
            sp = path_segment(p, x, y)
            sq = path_segment(q, x, y)
            if sp.vertices != sq.vertices or sp.edges != sq.edges:
                return False
        # (4) connectors y_{i+1} Q x_i are internally disjoint from P
        for (x_lo, _), (_, y_hi) in zip(self.pairs, self.pairs[1:]):
            conn = path_segment(q, y_hi, x_lo)
            if any(v in p for v in conn.internal_vertices()):
                return False
        # (5) Q x_l meets P only in x_l; y_1 Q meets P only in y_1
        x_last = self.pairs[-1][0]
        head_seg = path_segment(q, q.startvertex, x_last)
        if any(v in p for v in head_seg.vertices[:-1]):
            return False
        y_first = self.pairs[0][1]
        tail = path_segment(q, y_first, q.endvertex)
        if any(v in p for v in tail.vertices[1:]):
            return False
        return True


def _components_along(p: DiPath, q: DiPath) -> list[tuple[int, int]]:
    """Weak components of the path intersection as (x_i, y_i) spans on P."""
    shared_v = p.vertex_set() & q.vertex_set()
    shared_e = p.edge_set() & q.edge_set()
    comps: list[tuple[int, int]] = []
    i = 0
    n = len(p.vertices)
    while i < n:
        v = p.vertices[i]
        if v not in shared_v:
            i += 1
            continue
        j = i
        while j + 1 < n and p.edges[j] in shared_e and p.vertices[j + 1] in shared_v:
            j += 1
        comps.append((p.vertices[i], p.vertices[j]))
        i = j + 1
    return comps


def check_laced(p: DiPath, q: DiPath) -> LacedWitness | None:
    """The canonical witness when P and Q are laced, else None."""
    if p.host is not q.host:
        raise StrataError("paths live in different hosts")
    witness = LacedWitness(tuple(_components_along(p, q)))
    return witness if witness.validate(p, q) else None


def lace(p: DiPath, q: DiPath) -> DiPath:
    """Reroute Q inside P union Q into a path laced with P.

    Keeps Q's endpoints, never adds edges outside P union Q, and never
    increases the number of edges outside E(P).  This is the local-improvement
    procedure: while some shared component ends on Q before the next one
    starts, splice in the P-segment between them, which strictly decreases the
    edge count outside E(P).
    """
    cur = q
    guard = len(q.edges) + len(p.edges) + 1
    for _ in range(guard):
        comps = _components_along(p, cur)
        witness = LacedWitness(tuple(comps))
        if witness.validate(p, cur):
            return cur
        spliced = False
        for (x_i, y_i), (x_n, _) in zip(comps, comps[1:]):
            if cur.index_of(y_i) < cur.index_of(x_n):
                mid = path_segment(p, y_i, x_n)
                left = path_segment(cur, cur.startvertex, y_i)
                right = path_segment(cur, x_n, cur.endvertex)
                verts = left.vertices + mid.vertices[1:-1] + right.vertices
                edges = left.edges + mid.edges + right.edges
                nxt = DiPath(cur.host, verts, edges)
                out_before = len(set(cur.edges) - set(p.edges))
                out_after = len(set(nxt.edges) - set(p.edges))
                if out_after >= out_before:
                    raise StrataError("lace splice failed to make progress")
                cur = nxt
                spliced = True
                break
        if not spliced:
            raise StrataError("path not laced but no improvement step applies")
    raise StrataError("lace did not terminate")


def union_subgraph(p: DiPath, q: DiPath) -> Digraph:
    """The subgraph P union Q of the common host."""
    return p.host.edge_subgraph(
        set(p.edges) | set(q.edges), extra_verts=p.vertex_set() | q.vertex_set())


def emit_double_path(tb: TraceBuilder, p: DiPath, q: DiPath, w: LacedWitness,
                     block_reps: dict[int, int] | None = None) -> list[int]:
    """Record the contraction of a laced out-and-back pair to a double path.

    ``p`` runs a->b and ``q`` runs b->a; the contraction happens inside
    ``tb.graph``, which must contain P union Q with the degree profile of the
    standalone union (no foreign edges at its interior vertices).  Each shared
    component collapses to one representative (overridable per component index
    through ``block_reps``), P-only interiors merge forward, Q-only connector
    interiors merge backward.  Returns the double path's vertices in order.
    """
    if q.startvertex != p.endvertex or q.endvertex != p.startvertex:
        raise StrataError("need a directed a-b path and a directed b-a path")
    if not w.validate(p, q):
        raise StrataError("witness invalid")
    a, b = p.startvertex, p.endvertex
    if a == b:
        return [a]
    pairs = w.pairs
    if pairs[0] != (a, a) or pairs[-1] != (b, b):
        raise StrataError("end components of an out-and-back pair must be trivial")
    # snapshot every vertex run by index before any contraction re-attaches
    # edges; the contraction helpers look up current edges per vertex
    blocks: list[list[int]] = []
    reps: list[int] = []
    for i, (x, y) in enumerate(pairs):
        run = list(p.vertices[p.index_of(x): p.index_of(y) + 1])
        r = (block_reps or {}).get(i, x)
        if r not in run:
            raise StrataError(f"block representative {r} not on component {i}")
        blocks.append(run)
        reps.append(r)
    fwd_runs = [list(p.vertices[p.index_of(pairs[i][1]) + 1: p.index_of(pairs[i + 1][0])])
                for i in range(len(pairs) - 1)]
    conn_runs = [list(q.vertices[q.index_of(pairs[i + 1][1]) + 1: q.index_of(pairs[i][0])])
                 for i in range(len(pairs) - 1)]
    for run, r in zip(blocks, reps):
        k = run.index(r)
        if k > 0:
            tb.contract_path_into_root(run[: k + 1])
        if k < len(run) - 1:
            tb.contract_path_from_root(run[k:])
    for i in range(len(pairs) - 1):
        if fwd_runs[i]:
            tb.contract_path_into_root(fwd_runs[i] + [reps[i + 1]])
        if conn_runs[i]:
            tb.contract_path_into_root(conn_runs[i] + [reps[i]])
    return reps


def double_path_of(p: DiPath, q: DiPath, w: LacedWitness) -> tuple[Digraph, MinorTrace]:
    """Contract a laced a->b / b->a pair to a double path from a to b.

    The trace's host is the subgraph P union Q; every vertex of the result is
    a vertex of P.
    """
    host = union_subgraph(p, q)
    tb = TraceBuilder(host)
    reps = emit_double_path(tb, p, q, w)
    result, trace = tb.finish()
    k = len(reps)
    if result.num_edges() != 2 * (k - 1) or set(result.vertices()) != set(reps):
        raise StrataError("double path contraction produced an unexpected graph")
    return result, trace


def cycle_chain_of(p: DiPath, q: DiPath, w: LacedWitness) -> CycleChain:
    """Decompose a laced a->b / b->a pair into its chain of directed cycles.

    Cycle j follows P from component j to component j+1 and returns along the
    Q-connector; the union of the cycles is exactly P union Q.
    """
    if q.startvertex != p.endvertex or q.endvertex != p.startvertex:
        raise StrataError("need a directed a-b path and a directed b-a path")
    if not w.validate(p, q):
        raise StrataError("witness invalid")
    if p.startvertex == p.endvertex:
        raise StrataError("trivial out-and-back pair has no cycles")
    cycles = []
    pairs = w.pairs
    for i in range(len(pairs) - 1):
        x_i = pairs[i][0]
        y_n = pairs[i + 1][1]
        fwd = path_segment(p, x_i, y_n)
        conn = path_segment(q, y_n, x_i)
        verts = fwd.vertices + conn.vertices[1:-1]
        edges = fwd.edges + conn.edges
        cycles.append(DiCycle(p.host, verts, edges))
    chain = CycleChain(tuple(cycles))
    chain.validate()
    return chain
