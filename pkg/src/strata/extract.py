"""The endgame: Ramsey homogenization, in/out arborescences on cycle chains,
three-vertex frames, and the full case analysis that turns a centre structure
into a star- or comb-shaped butterfly minor with teeth in U.

Counts degrade gracefully: every Ramsey or pigeonhole step runs on whatever
index set is available and the pipeline reports the bottleneck stage instead
of demanding astronomically large inputs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .butterfly import MinorTrace, TraceBuilder, compose, verify_trace
from .centre import Attachment, CentreStructure, centre_minor
from .digraph import (
    CycleChain,
    DiCycle,
    Digraph,
    DiPath,
    StrataError,
    common_subpath,
    is_strongly_connected,
    spanning_in_arborescence,
    spanning_out_arborescence,
    strong_components,
)
from .shapes import (
    ShapeCertificate,
    comb_decompose,
    double_path_order,
    recognize,
    star_decompose,
    verify_certificate,
    _asym_cycles,
    _split_edges,
    _underlying,
)
from .starcomb import Comb, Insufficient


# -- Ramsey ------------------------------------------------------------------


class EdgeColoring:
    """A total symmetric colouring of the unordered pairs of range(n)."""

    def __init__(self, n: int, colors: dict[tuple[int, int], int]):
        self.n = n
        self.colors: dict[tuple[int, int], int] = {}
        for i in range(n):
            for j in range(i + 1, n):
                key = (i, j)
                if key in colors:
                    self.colors[key] = colors[key]
                elif (j, i) in colors:
                    self.colors[key] = colors[(j, i)]
                else:
                    raise StrataError(f"pair {key} is uncoloured")

    @classmethod
    def from_function(cls, n: int, fn) -> "EdgeColoring":
        return cls(n, {(i, j): fn(i, j) for i in range(n) for j in range(i + 1, n)})

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise StrataError("pairs are unordered and irreflexive")
        return self.colors[(min(i, j), max(i, j))]

    def palette(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.colors.values()))) if self.colors else ()


def _max_clique_in_color(c: EdgeColoring, color: int) -> tuple[int, ...]:
    """Lexicographically smallest maximum clique of one colour class."""
    n = c.n
    adj = [set() for _ in range(n)]
    for (i, j), col in c.colors.items():
        if col == color:
            adj[i].add(j)
            adj[j].add(i)
    best: list[tuple[int, ...]] = [()]

    def extend(cur: list[int], cands: list[int]) -> None:
        if len(cur) > len(best[0]):
            best[0] = tuple(cur)
        if len(cur) + len(cands) <= len(best[0]):
            return
        for k, v in enumerate(cands):
            extend(cur + [v], [w for w in cands[k + 1:] if w in adj[v]])

    extend([], list(range(n)))
    return best[0]


def max_mono_clique(c: EdgeColoring) -> tuple[int | None, tuple[int, ...]]:
    """(colour, indices) of the largest monochromatic clique; singletons count."""
    if c.n == 0:
        return None, ()
    best_color, best = None, (0,) if c.n else ()
    for color in c.palette():
        clique = _max_clique_in_color(c, color)
        if len(clique) > len(best):
            best_color, best = color, clique
    return best_color, best


def ramsey_clique(c: EdgeColoring, n: int):
    """A monochromatic clique of size ``n`` (exact brute force), else
    Insufficient carrying the maximum size found."""
    color, clique = max_mono_clique(c)
    if len(clique) >= n:
        if len(clique) > n:
            clique = clique[:n]
        return color, clique
    return Insufficient(len(clique), "ramsey")


def monochromatic(c: EdgeColoring, indices) -> bool:
    idx = sorted(indices)
    cols = {c.color(i, j) for i, j in itertools.combinations(idx, 2)}
    return len(cols) <= 1


# -- Prop-style in/out arborescences on a cycle chain --------------------------


def in_out_arborescences(chain: CycleChain, k: int):
    """For a chain C_1..C_p and 1 <= k <= p-1: an in-arborescence spanning the
    cycles after k and an out-arborescence spanning the cycles up to k minus
    C_{k+1}, meeting exactly in their shared root, the last vertex of the
    C_k/C_{k+1} intersection path."""
    p = len(chain)
    if not 1 <= k <= p - 1:
        raise StrataError(f"k must be in [1, {p - 1}]")
    shared = common_subpath(chain[k - 1], chain[k])
    if shared is None:
        raise StrataError("consecutive cycles do not meet in a path")
    v = shared.endvertex
    host = chain[0].host
    in_verts = set().union(*(c.vertex_set() for c in chain.cycles[k:]))
    in_edges = set().union(*(c.edge_set() for c in chain.cycles[k:]))
    sub_in = host.edge_subgraph(in_edges, extra_verts=in_verts)
    t_in = spanning_in_arborescence(sub_in, v, in_verts)

    out_verts = set().union(*(c.vertex_set() for c in chain.cycles[:k]))
    out_edges = set().union(*(c.edge_set() for c in chain.cycles[:k]))
    banned = shared.vertex_set() - {v}
    sub_out = host.edge_subgraph(out_edges, extra_verts=out_verts)
    for x in banned:
        if sub_out.has_vertex(x):
            sub_out.delete_vertex(x)
    want = (out_verts - chain[k].vertex_set()) | {v}
    t_out = spanning_out_arborescence(sub_out, v, want)
    if set(t_in.vertices()) & set(t_out.vertices()) != {v}:
        raise StrataError("arborescences intersect beyond their root")
    return t_in, t_out


# -- three-vertex frames --------------------------------------------------------


@dataclass(frozen=True)
class FrameResult:
    """Prop-style frame connecting three protected vertices.

    kind 1: a double path containing all three (``spine`` in order).
    kind 2: three non-trivial double paths from a common ``centre``; ``legs``
    maps each protected vertex to its leg's vertices from the centre outward.
    kind 3: a directed 3-cycle (``cycle``) plus three disjoint possibly
    trivial double paths; ``legs`` runs from the cycle vertex outward.
    """

    kind: int
    graph: Digraph
    trace: MinorTrace
    spine: tuple[int, ...] = ()
    centre: int | None = None
    cycle: tuple[int, ...] = ()
    legs: tuple[tuple[int, tuple[int, ...]], ...] = ()


def _frame_minimize(tb: TraceBuilder, us: set[int]) -> None:
    """Reduce to a fixpoint: no protected-preserving contraction applies and
    deleting any edge separates the protected vertices."""
    while True:
        g = tb.graph
        changed = False
        for x in g.vertices():
            if x in us:
                continue
            if g.out_degree(x) == 1:
                (eid,) = g.out_edges(x)
                tb.contract(eid, rep=g.head(eid))
                changed = True
                break
            if g.in_degree(x) == 1:
                (eid,) = g.in_edges(x)
                tb.contract(eid, rep=g.tail(eid))
                changed = True
                break
        if changed:
            continue
        for eid in g.edge_ids():
            probe = g.copy()
            probe.delete_edge(eid)
            comp = None
            for scc in strong_components(probe):
                if us <= scc:
                    comp = scc
                    break
            if comp is not None:
                tb.delete_edge(eid)
                for v in list(tb.graph.vertices()):
                    if v not in comp:
                        tb.delete_vertex(v)
                changed = True
                break
        if not changed:
            return


def _walk_from(g: Digraph, start: int, first: int, stop_at: set[int]):
    """Follow the doubled path from ``start`` through ``first`` until a stop
    vertex or a dead end; returns the visited vertices after ``start``."""
    out = [first]
    prev = start
    while out[-1] not in stop_at:
        nxts = [x for x in g.successors(out[-1])
                if x != prev and g.edges_between(x, out[-1])]
        if not nxts:
            break
        prev = out[-1]
        out.append(nxts[0])
    return out


def _classify_frame(h: Digraph, us: tuple[int, int, int]):
    spine = double_path_order(h)
    if spine is not None:
        if not set(us) <= set(spine):
            raise StrataError("frame lost a protected vertex")
        return FrameResult(1, h, None, spine=spine)
    sym, asym = _split_edges(h)
    if not asym:
        g = _underlying(h)
        star = star_decompose(g)
        if star is None or len(star.branches) != 3:
            raise StrataError("frame is symmetric but not a three-star")
        if star.teeth != frozenset(us):
            raise StrataError("three-star teeth differ from the protected set")
        legs = tuple((br[-1], (star.centre,) + br) for br in star.branches)
        return FrameResult(2, h, None, centre=star.centre, legs=legs)
    cycles = _asym_cycles(h, asym)
    if cycles is None or len(cycles) != 1 or len(cycles[0]) != 3:
        raise StrataError("frame is not one of the three kinds")
    cyc = cycles[0]
    legs = []
    used = set(cyc)
    for c in cyc:
        partners = [x for x in h.successors(c) if h.edges_between(x, c)]
        if len(partners) > 1:
            raise StrataError("gadget vertex with two attachments")
        if partners:
            walk = [c] + _walk_from(h, c, partners[0], set())
            legs.append((walk[-1], tuple(walk)))
            used.update(walk)
        elif c in us:
            legs.append((c, (c,)))
    if used != set(h.vertices()):
        raise StrataError("frame has stray vertices")
    if {t for t, _ in legs} != set(us):
        raise StrataError("frame legs do not end in the protected vertices")
    i = cyc.index(min(cyc))
    return FrameResult(3, h, None, cycle=cyc[i:] + cyc[:i], legs=tuple(legs))


def three_vertex_frame(d: Digraph, u1: int, u2: int, u3: int) -> FrameResult:
    """A minimal butterfly minor connecting three vertices: a double path
    through them, a three-star of double paths, or a 3-cycle with three
    double-path legs; with a verified trace."""
    us = (u1, u2, u3)
    if len(set(us)) != 3:
        raise StrataError("the three vertices must be distinct")
    for v in us:
        d._check_vertex(v)
    if not is_strongly_connected(d):
        raise StrataError("host must be strongly connected")
    tb = TraceBuilder(d)
    _frame_minimize(tb, set(us))
    result, trace = tb.finish()
    shaped = _classify_frame(result, us)
    return FrameResult(shaped.kind, result, trace, spine=shaped.spine,
                       centre=shaped.centre, cycle=shaped.cycle, legs=shaped.legs)


# -- certificates for assembled combs ------------------------------------------


def comb_a_certificate(g: Digraph, extra_teeth=frozenset()) -> ShapeCertificate:
    """Certificate for a doubled comb with extra trivial teeth declared on the
    spine (canonical recognition only sees leaves, so pipeline teeth that sit
    on spine vertices must be declared explicitly)."""
    comb0 = comb_decompose(_underlying(g))
    if comb0 is None:
        raise StrataError("graph is not a doubled comb")
    tooth = dict(comb0.tooth_paths)
    ends = {p[-1] for _, p in comb0.tooth_paths if p}
    for v in extra_teeth:
        if v in comb0.spine:
            if tooth.get(v):
                raise StrataError(f"spine vertex {v} already attaches a tooth path")
            tooth.setdefault(v, ())
        elif v not in ends:
            raise StrataError(f"tooth {v} is neither on the spine nor a path end")
    comb = Comb(comb0.spine, tuple(sorted(tooth.items())))
    cert = ShapeCertificate("comb-a", comb.teeth, comb=comb)
    if not verify_certificate(g, cert):
        raise StrataError("assembled comb certificate failed")
    return cert


def _certify(g: Digraph, pipeline_teeth) -> ShapeCertificate:
    """The certificate for a finished shape: canonical recognition, widened
    to a declared-teeth comb certificate when pipeline teeth sit mid-spine."""
    cert = recognize(g)
    if cert is None:
        raise StrataError("extraction produced an unrecognized shape")
    missing = set(pipeline_teeth) - set(cert.teeth)
    if missing:
        if cert.kind != "comb-a":
            raise StrataError("pipeline teeth missing from a gadget-bearing shape")
        cert = comb_a_certificate(g, extra_teeth=set(pipeline_teeth))
    return cert


# -- handlers for the centre kinds ---------------------------------------------


@dataclass
class ExtractResult:
    graph: Digraph
    certificate: ShapeCertificate
    trace: MinorTrace
    stages: tuple[str, ...]

    def teeth_in(self, u) -> int:
        return len(set(self.certificate.teeth) & set(u))


def _contract_cycle_to(tb: TraceBuilder, keep: set[int]) -> None:
    """On a graph that is a bare directed cycle, contract every vertex outside
    ``keep`` into its successor."""
    while True:
        extra = [v for v in tb.graph.vertices() if v not in keep]
        if not extra:
            return
        v = extra[0]
        (eid,) = tb.graph.out_edges(v)
        tb.contract(eid, rep=tb.graph.head(eid))


def _handle_centre_i_cycle(tb: TraceBuilder, cyc: DiCycle, u_sel) -> tuple[frozenset, list[str]]:
    w = set(u_sel)
    keep = set(w)
    if len(keep) < 2:
        others = sorted(set(tb.graph.vertices()) - keep)
        keep |= set(others[: 2 - len(keep)])
    _contract_cycle_to(tb, keep)
    return frozenset(w), ["contract:cycle"]


def _cycle_positions(cyc: DiCycle) -> dict[int, int]:
    base = min(cyc.vertices)
    i = cyc.vertices.index(base)
    order = cyc.vertices[i:] + cyc.vertices[:i]
    return {v: k for k, v in enumerate(order)}


def _chain_blocks(chain: CycleChain) -> list[DiPath]:
    blocks = []
    for j in range(len(chain) - 1):
        b = common_subpath(chain[j], chain[j + 1])
        if b is None:
            raise StrataError("chain cycles do not meet in a path")
        blocks.append(b)
    return blocks


def _cycle_arcs(cyc: DiCycle, left: DiPath | None, right: DiPath | None):
    """Split a chain cycle into its forward arc (after the left block, before
    the right block) and backward arc (after the right block, before the left
    block); either block may be absent for end cycles."""
    seq = list(cyc.vertices)
    n = len(seq)

    def run_after(block_end, block_start_other):
        out = []
        i = (seq.index(block_end) + 1) % n
        while seq[i] != block_start_other:
            out.append(seq[i])
            i = (i + 1) % n
        return out

    if left is not None and right is not None:
        fwd = run_after(left.endvertex, right.startvertex)
        back = run_after(right.endvertex, left.startvertex)
        return fwd, back
    block = left if left is not None else right
    whole = run_after(block.endvertex, block.startvertex)
    return whole, None


def _contract_block(tb: TraceBuilder, block: DiPath, rep: int) -> None:
    verts = list(block.vertices)
    i = verts.index(rep)
    left, right = verts[: i + 1], verts[i:]
    if len(left) > 1:
        tb.contract_path_into_root(left)
    if len(right) > 1:
        tb.contract_path_from_root(right)


def _emit_chain_comb(tb: TraceBuilder, chain: CycleChain, teeth_at: dict[int, int],
                     block_reps: dict[int, int] | None = None) -> frozenset:
    """Contract a standalone cycle chain to a comb shape.

    ``teeth_at`` maps a cycle index to a tooth vertex on that cycle (not in
    its boundary blocks); selected cycles become 3-cycle gadgets, the chain's
    outermost tooth cycles absorb everything beyond them so the tooth ends the
    spine, and block representatives can be forced through ``block_reps`` (for
    teeth lying in the intersections).  Returns the surviving teeth.
    """
    p = len(chain)
    if p == 1:
        cyc = chain[0]
        keep = set(teeth_at.values())
        if len(keep) < 2:
            keep |= set(sorted(set(cyc.vertices) - keep)[: 2 - len(keep)])
        _contract_cycle_to(tb, keep)
        return frozenset(teeth_at.values())
    blocks = _chain_blocks(chain)
    reps = {}
    for j, b in enumerate(blocks):
        want = (block_reps or {}).get(j)
        reps[j] = want if want is not None else b.endvertex
        _contract_block(tb, b, reps[j])
    tooth_cycles = sorted(teeth_at)
    leftmost = tooth_cycles[0] if tooth_cycles else None
    rightmost = tooth_cycles[-1] if tooth_cycles else None

    for j in range(p):
        left = blocks[j - 1] if j > 0 else None
        right = blocks[j] if j < p - 1 else None
        rep_l = reps[j - 1] if j > 0 else None
        rep_r = reps[j] if j < p - 1 else None
        fwd, back = _cycle_arcs(chain[j], left, right)
        tooth = teeth_at.get(j)
        if tooth is None:
            if left is None:       # first cycle collapses into its right rep
                if fwd:
                    tb.contract_path_into_root(fwd + [rep_r])
            elif right is None:    # last cycle collapses into its left rep
                if fwd:
                    tb.contract_path_into_root(fwd + [rep_l])
            else:
                if fwd:
                    tb.contract_path_into_root(fwd + [rep_r])
                if back:
                    tb.contract_path_into_root(back + [rep_l])
            continue
        # tooth-bearing cycle
        if left is None or right is None:
            arc = fwd
            anchor = rep_r if left is None else rep_l
            k = arc.index(tooth)
            pre, post = arc[: k + 1], arc[k:]
            if len(pre) > 1:
                tb.contract_path_into_root(pre)
            if len(post) > 1 or post[0] != anchor:
                tb.contract_path_into_root(post[1:] + [anchor])
            continue
        on_fwd = tooth in fwd
        arc_t = fwd if on_fwd else back
        other = back if on_fwd else fwd
        near, far = (rep_r, rep_l) if on_fwd else (rep_l, rep_r)
        k = arc_t.index(tooth)
        if k > 0:
            tb.contract_path_into_root(arc_t[: k + 1])
        if arc_t[k + 1:]:
            tb.contract_path_into_root(arc_t[k + 1:] + [near])
        if other:
            tb.contract_path_into_root(other + [far])

    # a gadget at the second or second-to-last cycle would leave the adjacent
    # end rep as a bare triangle vertex; squash it so the tooth ends the spine
    def squash(rep: int) -> None:
        g = tb.graph
        if g.has_vertex(rep) and g.out_degree(rep) == 1 and g.in_degree(rep) == 1:
            (eid,) = g.out_edges(rep)
            tb.contract(eid, rep=g.head(eid))

    if leftmost == 1 and p >= 3:
        squash(reps[0])
    if rightmost == p - 2 and p >= 3:
        squash(reps[p - 2])
    return frozenset(teeth_at.values())


# -- interval analysis on the centre cycle --------------------------------------


class IntervalProfile:
    """Cyclic intervals [b_i, a_i] on the centre cycle and their pairwise
    relations: 1 = disjoint, 2 = nested, 3 = crossing.  Exactly one relation
    holds per pair; positions are measured from the lowest-id cycle vertex."""

    def __init__(self, cycle: DiCycle, items):
        self.cycle = cycle
        self.items = tuple(items)  # (a_i, b_i)
        self.pos = _cycle_positions(cycle)

    def interval(self, i: int) -> frozenset[int]:
        a, b = self.items[i]
        return frozenset(self.cycle.segment(b, a).vertices)

    def relation(self, i: int, j: int) -> int:
        si, sj = self.interval(i), self.interval(j)
        if not si & sj:
            return 1
        if si <= sj or sj <= si:
            return 2
        return 3

    def runs(self, i: int, j: int) -> int:
        """Number of maximal cyclic runs of the pairwise intersection."""
        inter = self.interval(i) & self.interval(j)
        seq = self.cycle.vertices
        n = len(seq)
        if len(inter) == n:
            return 1
        runs = 0
        for k in range(n):
            if seq[k] in inter and seq[k - 1] not in inter:
                runs += 1
        return runs


def _delete_cycle_segment_edges(tb: TraceBuilder, cyc: DiCycle, x: int, y: int) -> None:
    """Delete the edges of the cycle segment from x to y (vertices stay)."""
    for eid in cyc.segment(x, y).edges:
        tb.delete_edge(eid)


def _drop_attachments(tb: TraceBuilder, atts, keep_idx) -> list[Attachment]:
    kept = []
    for i, att in enumerate(atts):
        if i in keep_idx:
            kept.append(att)
        else:
            for v in att.spine:
                if tb.graph.has_vertex(v):
                    tb.delete_vertex(v)
    return kept


def _handle_centre_ii_b(cs: CentreStructure, n: int):
    tb = TraceBuilder(cs.graph)
    atts = list(cs.attachments)
    cyc = cs.cycle
    stages = []
    profile = IntervalProfile(cyc, [(att.a, att.b) for att in atts])
    if len(atts) == 1:
        selected = [0]
        case = 2
        stages.append("pigeonhole:single-interval")
    else:
        coloring = EdgeColoring.from_function(len(atts),
                                              lambda i, j: profile.relation(i, j))
        case, subset = max_mono_clique(coloring)
        stages.append(f"ramsey:interval-relation={case}")
        for i, j in itertools.combinations(subset, 2):
            if profile.relation(i, j) != case:
                raise StrataError("Ramsey subset is not homogeneous")
        selected = sorted(subset, key=lambda i: profile.pos[atts[i].a])
    _drop_attachments(tb, atts, set(selected))
    sel = list(selected)

    if case == 1:
        teeth = _ii_b_disjoint(tb, cyc, atts, sel, profile)
    elif case == 2:
        teeth = _ii_b_nested(tb, cyc, atts, sel, profile, stages)
    else:
        teeth = _ii_b_crossing(tb, cyc, atts, sel, profile, stages)
    return tb, teeth, stages


def _ii_b_disjoint(tb, cyc, atts, sel, profile):
    """Pairwise-disjoint intervals: each collapses to its a-vertex and the
    gaps become single edges, leaving a centre cycle with one branch per
    blob."""
    k = len(sel)
    for i in sel:
        att = atts[i]
        seg = cyc.segment(att.b, att.a)
        if len(seg.vertices) > 1:
            tb.contract_path_into_root(list(seg.vertices))
    for t, i in enumerate(sel):
        nxt = atts[sel[(t + 1) % k]]
        att = atts[i]
        gap = cyc.segment(att.a, nxt.b)
        interior = list(gap.vertices[1:-1])
        if interior:
            tb.contract_path_into_root(interior + [nxt.a])
    return frozenset(atts[i].tooth for i in sel)


def _ii_b_nested(tb, cyc, atts, sel, profile, stages):
    """A nested chain of intervals: cut the complement of the outermost, then
    fold everything into the innermost a-vertex, the hub."""
    full = len(cyc.vertices)
    non_whole = [i for i in sel if len(profile.interval(i)) < full]
    if not non_whole:
        # whole-cycle intervals wrap through any cut; keep a single one
        dropped = sel[1:]
        sel = sel[:1]
    else:
        dropped = [i for i in sel if i not in set(non_whole)]
        sel = non_whole
    for i in dropped:
        for v in atts[i].spine:
            if tb.graph.has_vertex(v):
                tb.delete_vertex(v)
    sel = sorted(sel, key=lambda i: len(profile.interval(i)))
    for lo, hi in zip(sel, sel[1:]):
        if not profile.interval(lo) <= profile.interval(hi):
            raise StrataError("nested intervals fail containment")
    inner, outer = atts[sel[0]], atts[sel[-1]]
    if outer.a == outer.b:
        # the complement arc wraps the entire cycle; only the hub survives
        for eid in cyc.edges:
            if tb.graph.has_edge(eid):
                tb.delete_edge(eid)
        return frozenset(atts[i].tooth for i in sel)
    _delete_cycle_segment_edges(tb, cyc, outer.a, outer.b)
    left = cyc.segment(outer.b, inner.a)
    if len(left.vertices) > 1:
        tb.contract_path_into_root(list(left.vertices))
    right = cyc.segment(inner.a, outer.a)
    if len(right.vertices) > 1:
        tb.contract_path_from_root(list(right.vertices))
    return frozenset(atts[i].tooth for i in sel)


def _ii_b_crossing(tb, cyc, atts, sel, profile, stages):
    """Pairwise-crossing intervals: homogenize the intersection run count,
    then either fold into a hub (one run) or thread a centre cycle through
    the z-vertices (two runs)."""
    if len(sel) == 1:
        return _ii_b_nested(tb, cyc, atts, sel, profile, stages)
    coloring = EdgeColoring.from_function(
        len(sel), lambda i, j: profile.runs(sel[i], sel[j]))
    runs, subset = max_mono_clique(coloring)
    stages.append(f"ramsey:crossing-runs={runs}")
    for i, j in itertools.combinations(subset, 2):
        if profile.runs(sel[i], sel[j]) != runs:
            raise StrataError("crossing sub-Ramsey subset is not homogeneous")
    chosen = [sel[t] for t in sorted(subset)]
    dropped = [i for i in sel if i not in set(chosen)]
    for i in dropped:
        for v in atts[i].spine:
            if tb.graph.has_vertex(v):
                tb.delete_vertex(v)
    sel = sorted(chosen, key=lambda i: profile.pos[atts[i].a])
    if runs == 1:
        return _ii_b_one_run(tb, cyc, atts, sel, profile, stages)
    return _ii_b_two_runs(tb, cyc, atts, sel, profile, stages)


def _ii_b_one_run(tb, cyc, atts, sel, profile, stages):
    lead = sel[0]
    with_a = [i for i in sel[1:] if atts[lead].a in profile.interval(i)]
    with_b = [i for i in sel[1:] if atts[lead].b in profile.interval(i)]
    if set(with_a) & set(with_b) or set(with_a) | set(with_b) != set(sel[1:]):
        raise StrataError("one-run crossing intervals must split on the lead endpoints")
    former = len(with_a) >= len(with_b)
    stages.append(f"pigeonhole:lead-endpoint={'a' if former else 'b'}")
    group = [lead] + (with_a if former else with_b)
    for i in sel:
        if i not in group:
            for v in atts[i].spine:
                if tb.graph.has_vertex(v):
                    tb.delete_vertex(v)
    lead_a, lead_b = atts[lead].a, atts[lead].b

    def lin(v):  # linear position measured from the lead's a-vertex
        return (profile.pos[v] - profile.pos[lead_a]) % len(cyc.vertices)

    group = sorted(group, key=lambda i: lin(atts[i].a))
    if former:
        a_last = atts[group[-1]].a
        _delete_cycle_segment_edges(tb, cyc, a_last, lead_b)
        left = cyc.segment(lead_b, lead_a)
        if len(left.vertices) > 1:
            tb.contract_path_into_root(list(left.vertices))
        right = cyc.segment(lead_a, a_last)
        if len(right.vertices) > 1:
            tb.contract_path_from_root(list(right.vertices))
    else:
        b_first = min((atts[i].b for i in group if i != lead), key=lin)
        _delete_cycle_segment_edges(tb, cyc, lead_a, b_first)
        left = cyc.segment(b_first, lead_b)
        if len(left.vertices) > 1:
            tb.contract_path_into_root(list(left.vertices))
        right = cyc.segment(lead_b, lead_a)
        if len(right.vertices) > 1:
            tb.contract_path_from_root(list(right.vertices))
    return frozenset(atts[i].tooth for i in group)


def _ii_b_two_runs(tb, cyc, atts, sel, profile, stages):
    nontrivial = [i for i in sel if len(atts[i].spine) > 1]
    stages.append("filter:nontrivial-attachments")
    if len(nontrivial) <= 1:
        # a tooth on the centre cycle cannot serve a star branch; fold a
        # single attachment into a hub instead
        keep = nontrivial or sel[:1]
        for i in sel:
            if i not in keep:
                for v in atts[i].spine:
                    if tb.graph.has_vertex(v):
                        tb.delete_vertex(v)
        return _ii_b_nested(tb, cyc, atts, keep, profile, stages)
    sel = nontrivial
    k = len(sel)
    base = profile.pos[atts[sel[0]].a]
    size = len(cyc.vertices)

    def lin(v):
        return (profile.pos[v] - base) % size

    # the alternating layout a_1 < b_1 <= a_2 < ... <= a_k < b_k <= a_1 must
    # hold cyclically; the last return anchor wraps past the basepoint
    for t, i in enumerate(sel):
        if t + 1 < k:
            if not lin(atts[i].a) < lin(atts[i].b) <= lin(atts[sel[t + 1]].a):
                raise StrataError("two-run intervals fail the alternating layout")
        elif not (lin(atts[i].b) > lin(atts[i].a) or lin(atts[i].b) == 0):
            raise StrataError("two-run intervals fail the alternating layout")
    for i in sel:
        _delete_cycle_segment_edges(tb, cyc, atts[i].a, atts[i].b)
    for t, i in enumerate(sel):
        j = sel[(t + 1) % k]
        seg = cyc.segment(atts[i].b, atts[j].a)
        tb.contract_path_into_root(list(seg.vertices) + [atts[j].z])
    return frozenset(atts[i].tooth for i in sel)


# -- the chain case: gamma dichotomy, frames, arborescences ---------------------


def _gammas(chain: CycleChain, atts):
    return [(chain.min_index_of(a.a), chain.min_index_of(a.b)) for a in atts]


def _replay_frame(tb: TraceBuilder, sub: Digraph, us) -> FrameResult:
    fr = three_vertex_frame(sub, *us)
    for step in fr.trace.steps:
        if step.kind == "DV":
            tb.delete_vertex(step.ident)
        elif step.kind == "DE":
            tb.delete_edge(step.ident)
        else:
            tb.contract(step.ident, rep=step.rep)
    return fr


def _trim_kind1(tb: TraceBuilder, fr: FrameResult, w_lo: int, w_hi: int,
                tooth: int | None) -> None:
    """Trim a double-path frame to the span of its two boundary vertices,
    keeping the tooth (possibly as an overhang ending in it)."""
    pos = {v: i for i, v in enumerate(fr.spine)}
    lo, hi = sorted((pos[w_lo], pos[w_hi]))
    keep_lo, keep_hi = lo, hi
    if tooth is not None:
        keep_lo = min(keep_lo, pos[tooth])
        keep_hi = max(keep_hi, pos[tooth])
    for i, v in enumerate(fr.spine):
        if not keep_lo <= i <= keep_hi:
            tb.delete_vertex(v)


def _reduce_kind2(tb: TraceBuilder, fr: FrameResult, drop_tooth: int) -> None:
    for t, leg in fr.legs:
        if t == drop_tooth:
            for v in leg[1:]:
                tb.delete_vertex(v)


def _reduce_kind3(tb: TraceBuilder, fr: FrameResult, drop_tooth: int) -> None:
    for t, leg in fr.legs:
        if t == drop_tooth:
            for v in leg[1:]:
                tb.delete_vertex(v)
            free = leg[0]
            g = tb.graph
            if g.out_degree(free) == 1 and g.in_degree(free) == 1:
                (eid,) = g.out_edges(free)
                tb.contract(eid, rep=g.head(eid))


def _handle_centre_ii_c(cs: CentreStructure, n: int):
    tb = TraceBuilder(cs.graph)
    stages = []
    atts = list(cs.attachments)
    chain = cs.chain
    gam = _gammas(chain, atts)
    good = [i for i in range(len(atts)) if gam[i][0] <= gam[i][1]]
    if len(good) < len(atts) - len(good):
        chain = CycleChain(tuple(reversed(chain.cycles)))
        gam = _gammas(chain, atts)
        good = [i for i in range(len(atts)) if gam[i][0] <= gam[i][1]]
        stages.append("pigeonhole:gamma-orientation=reversed")
    else:
        stages.append("pigeonhole:gamma-orientation=kept")
    atts = [atts[i] for i in good]
    gam = [gam[i] for i in good]
    order = sorted(range(len(atts)), key=lambda i: gam[i][0])
    atts = [atts[i] for i in order]
    gam = [gam[i] for i in order]
    if len({ga for ga, _ in gam}) != len(gam):
        raise StrataError("a-anchors must sit on distinct chain cycles")
    if not atts:
        return None, Insufficient(0, "pigeonhole"), stages

    if len(atts) == 1:
        former, subset = True, (0,)
        stages.append("pigeonhole:gamma-interleave=former")
    else:
        coloring = EdgeColoring.from_function(
            len(atts), lambda i, j: 0 if gam[min(i, j)][1] < gam[max(i, j)][0] else 1)
        color, subset = max_mono_clique(coloring)
        former = color == 0
        stages.append(f"ramsey:gamma-interleave={'former' if former else 'latter'}")
        for i, j in itertools.combinations(sorted(subset), 2):
            if (0 if gam[i][1] < gam[j][0] else 1) != color:
                raise StrataError("gamma subset is not homogeneous")
    sel = sorted(subset)

    if former:
        return _ii_c_former(tb, chain, atts, gam, sel, stages)
    return _ii_c_latter(tb, chain, atts, gam, sel, stages)


def _ii_c_former(tb, chain, atts, gam, sel, stages):
    """Interleaved anchors: cut the chain into segments between boundary
    blocks, frame each segment through its tooth, and join the frames."""
    atts = [atts[i] for i in sel]
    gam = [gam[i] for i in sel]
    blocks = _chain_blocks(chain)
    # an anchor sitting inside a later boundary block would be merged away;
    # drop such attachments (a rare corner of the chain geometry)
    changed = True
    while changed and len(atts) > 1:
        changed = False
        for k in range(1, len(atts)):
            body = set(blocks[gam[k][0] - 1].vertices)
            for m in range(k):
                if atts[m].a in body:
                    atts.pop(m)
                    gam.pop(m)
                    stages.append("filter:anchor-in-boundary-block")
                    changed = True
                    break
            if changed:
                break
    # delete the attachments that were not selected
    keep_spines = {v for att in atts for v in att.spine}
    for v in list(tb.graph.vertices()):
        if v in keep_spines:
            continue
        if v not in chain.vertex_set():
            tb.delete_vertex(v)
    # boundary blocks: before each selected anchor cycle except the first
    t = len(atts)
    ws = [atts[0].a]
    for k in range(1, t):
        b = blocks[gam[k][0] - 1]
        _contract_block(tb, b, b.endvertex)
        ws.append(b.endvertex)
    ws.append(atts[-1].b)
    if len(set(ws)) != len(ws) or any(not tb.graph.has_vertex(w) for w in ws):
        raise StrataError("degenerate frame boundaries")
    # delete chain cycles outside the working range
    lo_cycle, hi_cycle = gam[0][0], gam[-1][1]
    keep_chain = set()
    for j in range(lo_cycle, hi_cycle + 1):
        keep_chain |= chain[j].vertex_set()
    for v in list(tb.graph.vertices()):
        if v in keep_spines or v in {w for w in ws}:
            continue
        if v in chain.vertex_set() and v not in keep_chain:
            tb.delete_vertex(v)
    # frame each segment
    frames = []
    for k in range(t):
        first = gam[k][0]
        last = gam[k + 1][0] - 1 if k + 1 < t else hi_cycle
        seg_verts = set()
        for j in range(first, last + 1):
            seg_verts |= chain[j].vertex_set()
        seg_verts &= set(tb.graph.vertices())
        seg_verts |= set(atts[k].spine) | {ws[k], ws[k + 1]}
        sub = tb.graph.induced_subgraph(seg_verts)
        fr = _replay_frame(tb, sub, (ws[k], ws[k + 1], atts[k].tooth))
        frames.append(fr)
    kinds = [fr.kind for fr in frames]
    # gadget-free frames (double paths and three-stars) assemble into one comb
    # together, so they pool against the gadget-bearing kind
    flat = {k for k in range(t) if kinds[k] in (1, 2)}
    gadget = {k for k in range(t) if kinds[k] == 3}
    j_set = flat if len(flat) >= len(gadget) else gadget
    stages.append(
        f"pigeonhole:frame-kind={'flat' if j_set is flat else 'gadget'}")
    teeth = set()
    for k, fr in enumerate(frames):
        tooth = atts[k].tooth
        if k in j_set:
            if fr.kind == 1:
                _trim_kind1(tb, fr, ws[k], ws[k + 1], tooth)
            teeth.add(tooth)
        else:
            if fr.kind == 1:
                _trim_kind1(tb, fr, ws[k], ws[k + 1], None)
            elif fr.kind == 2:
                _reduce_kind2(tb, fr, tooth)
            else:
                _reduce_kind3(tb, fr, tooth)

    def bare_corner(w: int) -> bool:
        g = tb.graph
        return g.has_vertex(w) and \
            not any(g.edges_between(x, w) for x in g.successors(w))

    # a gadget corner with no symmetric attachment cannot carry the spine: at
    # the outer ends contract it away, at shared middles demote one frame
    for k in range(1, t):
        w = ws[k]
        if bare_corner(w) and k in j_set and frames[k].kind == 3:
            _reduce_kind3(tb, frames[k], atts[k].tooth)
            teeth.discard(atts[k].tooth)
            stages.append("repair:demoted-shared-gadget")
    for w in (ws[0], ws[-1]):
        g = tb.graph
        if bare_corner(w) and g.out_degree(w) == 1 and g.in_degree(w) == 1:
            (eid,) = g.out_edges(w)
            tb.contract(eid, rep=g.head(eid))
    return tb, frozenset(teeth), stages


def _ii_c_latter(tb, chain, atts, gam, sel, stages):
    """Anchors before, returns after: span the split point with an
    in-arborescence and an out-arborescence and fold both into their root."""
    atts = [atts[i] for i in sel]
    gam = [gam[i] for i in sel]
    if len(atts) >= 2:
        atts, gam = atts[:-1], gam[:-1]  # drop the largest anchor index
        stages.append("pigeonhole:drop-top-anchor")
    k_star = gam[-1][0]
    block = common_subpath(chain[k_star], chain[k_star + 1]) \
        if k_star + 1 < len(chain) else None
    if block is None:
        return None, Insufficient(len(atts), "pigeonhole"), stages
    keep = []
    for att, (ga, gb) in zip(atts, gam):
        if att.a in chain[k_star + 1]:
            continue  # the corner case: the anchor sits in the split block
        if gb <= k_star:
            continue  # its return lands before the split; cannot use it
        keep.append(att)
    if not keep:
        return None, Insufficient(0, "pigeonhole"), stages
    atts = keep
    t_in, t_out = in_out_arborescences(chain, k_star + 1)
    keep_v = set(t_in.vertices()) | set(t_out.vertices())
    keep_e = set(t_in.edge_ids()) | set(t_out.edge_ids())
    for att in atts:
        keep_v |= set(att.spine)
        keep_e |= {eid for x, y in zip(att.spine, att.spine[1:])
                   for eid in tb.graph.edges_between(x, y) +
                   tb.graph.edges_between(y, x)}
        keep_e |= set(tb.graph.edges_between(att.a, att.z))
        keep_e |= set(tb.graph.edges_between(att.z, att.b))
    tb.keep_only(keep_v)
    tb.keep_only_edges(keep_e)
    from .butterfly import emit_arborescence_contraction

    emit_arborescence_contraction(tb, t_in)
    emit_arborescence_contraction(tb, t_out)
    return tb, frozenset(att.tooth for att in atts), stages


# -- the top-level pipeline ------------------------------------------------------


def _handle_centre_i(cs: CentreStructure, n: int):
    tb = TraceBuilder(cs.graph)
    stages = []
    if cs.cycle is not None or len(cs.chain) == 1:
        cyc = cs.cycle if cs.cycle is not None else cs.chain[0]
        teeth, st = _handle_centre_i_cycle(tb, cyc, cs.u_sel)
        return tb, teeth, stages + st
    chain = cs.chain
    hosts = {u: [j for j in range(len(chain)) if u in chain[j]] for u in cs.u_sel}
    group2 = sorted(u for u, h in hosts.items() if len(h) == 2)
    group1 = sorted(u for u, h in hosts.items() if len(h) == 1)
    if len(group2) >= len(group1):
        stages.append("pigeonhole:teeth-in-intersections")
        block_reps = {hosts[u][0]: u for u in group2}
        _emit_chain_comb(tb, chain, {}, block_reps=block_reps)
        return tb, frozenset(group2), stages
    stages.append("pigeonhole:teeth-in-own-cycles")
    candidates = sorted(((hosts[u][0], u) for u in group1))
    teeth_at = {}
    p = len(chain)
    prev = None
    for j, u in candidates:
        # adjacent gadget cycles would share a contracted block vertex; teeth
        # on the outermost cycles become pendant spine ends instead, so they
        # tolerate a gadget next door
        if prev is not None and j == prev + 1 and 0 < prev and j < p - 1:
            continue
        teeth_at[j] = u
        prev = j
    teeth = _emit_chain_comb(tb, chain, teeth_at)
    return tb, teeth, stages


def _handle_centre_ii_a(cs: CentreStructure, n: int):
    tb = TraceBuilder(cs.graph)
    return tb, frozenset(att.tooth for att in cs.attachments), ["direct:star"]


def extract_star_or_comb(d: Digraph, u, n: int, *, ramsey_budget: int = 4):
    """A star- or comb-shaped butterfly minor of ``d`` with at least ``n``
    teeth in U, as (ExtractResult) or Insufficient with the bottleneck stage.

    Runs the centre construction, then the case analysis for its kind:
    directed cycles and doubled stars pass through; chains pigeonhole their
    teeth; cycle centres homogenize the anchor intervals by exact Ramsey
    search; chain centres split on the placement order of the anchors.
    """
    u = set(u)
    if n < 1:
        raise StrataError("n must be at least 1")
    for v in u:
        d._check_vertex(v)
    if not is_strongly_connected(d):
        raise StrataError("host must be strongly connected")
    if d.num_vertices() == 1 and u and n == 1:
        result, trace = TraceBuilder(d).finish()
        return ExtractResult(result, _certify(result, u), trace, ("trivial",))
    res = centre_minor(d, u, 1, paths_target=2 * max(1, ramsey_budget) * n)
    if isinstance(res, Insufficient):
        return Insufficient(res.achieved, "centre")
    cs, t1 = res
    stages = [f"centre:{cs.kind}"]
    if cs.kind == "i":
        tb, teeth, st = _handle_centre_i(cs, n)
    elif cs.kind == "ii-a":
        tb, teeth, st = _handle_centre_ii_a(cs, n)
    elif cs.kind == "ii-b":
        tb, teeth, st = _handle_centre_ii_b(cs, n)
    else:
        tb, res2, st = _handle_centre_ii_c(cs, n)
        if tb is None:
            return Insufficient(res2.achieved, res2.stage)
        teeth = res2
    stages += st
    # arcs cut out of the centre leave isolated remnants behind
    for v in list(tb.graph.vertices()):
        if tb.graph.out_degree(v) == 0 and tb.graph.in_degree(v) == 0 \
                and v not in teeth and tb.graph.num_vertices() > 1:
            tb.delete_vertex(v)
    result, t2 = tb.finish()
    trace = compose(t1, t2)
    if not verify_trace(d, trace, result):
        raise StrataError("extraction trace failed to verify")
    cert = _certify(result, teeth)
    out = ExtractResult(result, cert, trace, tuple(stages))
    got = out.teeth_in(u)
    if got < n:
        stage = "ramsey" if any(s.startswith("ramsey") for s in st) else "pigeonhole"
        return Insufficient(got, stage)
    return out


def _unavoidable_fast_path(d: Digraph, n: int):
    """Inputs that already are one of the three canonical forms only need
    trimming, not the whole pipeline."""
    cert = recognize(d)
    if cert is None:
        return None
    if cert.kind == "cycle" and len(cert.cycle_order) >= n:
        tb = TraceBuilder(d)
        _contract_cycle_to(tb, set(sorted(cert.cycle_order)[:n]))
        return "cycle", tb
    if cert.kind == "comb-a" and double_path_order(d) is not None \
            and d.num_vertices() >= n:
        tb = TraceBuilder(d)
        while tb.graph.num_vertices() > n:
            order = double_path_order(tb.graph)
            (eid,) = tb.graph.in_edges(order[-1])
            tb.contract(eid, rep=tb.graph.tail(eid))
        return "doubled-path", tb
    if cert.kind == "star-i" and len(cert.star.branches) >= n \
            and all(len(br) == 1 for br in cert.star.branches):
        tb = TraceBuilder(d)
        for br in cert.star.branches[n:]:
            tb.delete_vertex(br[0])
        return "doubled-star", tb
    return None


def unavoidable(d: Digraph, n: int, *, ramsey_budget: int = 4):
    """One of the three unavoidable minors: the doubled star D(K_{1,n}), the
    doubled path D(P_n), or a directed cycle of length n; returned with its
    name and a verified trace, or Insufficient."""
    if n < 2:
        raise StrataError("n must be at least 2")
    fast = _unavoidable_fast_path(d, n)
    if fast is not None:
        name, tb = fast
        final, trace = tb.finish()
        if not verify_trace(d, trace, final):
            raise StrataError("canonicalization trace failed to verify")
        return name, final, trace
    res = extract_star_or_comb(d, set(d.vertices()), n, ramsey_budget=ramsey_budget)
    if isinstance(res, Insufficient):
        return res
    cert, g = res.certificate, res.graph
    tb = TraceBuilder(g)
    if cert.kind == "cycle":
        keep = set(sorted(cert.cycle_order)[:n])
        _contract_cycle_to(tb, keep)
        name = "cycle"
    elif cert.kind == "star-ii":
        gadget = cert.gadget_map()
        (centre_cyc,) = gadget.values()
        for v in list(tb.graph.vertices()):
            if v not in centre_cyc:
                tb.delete_vertex(v)
        _contract_cycle_to(tb, set(sorted(centre_cyc)[:n]))
        name = "cycle"
    elif cert.kind == "star-i":
        star = cert.star
        branches = list(star.branches)
        for br in branches[n:]:
            for v in br:
                tb.delete_vertex(v)
        for br in branches[:n]:
            while len([v for v in br if tb.graph.has_vertex(v)]) > 1:
                alive = [v for v in br if tb.graph.has_vertex(v)]
                leaf = alive[-1]
                (eid,) = tb.graph.in_edges(leaf)
                tb.contract(eid, rep=tb.graph.tail(eid))
        name = "doubled-star"
    else:
        comb = cert.comb
        for _, path in comb.tooth_paths:
            for v in path:
                if tb.graph.has_vertex(v):
                    tb.delete_vertex(v)
        for j, cyc in cert.gadgets:
            free = [v for v in cyc if tb.graph.has_vertex(v)
                    and tb.graph.out_degree(v) == 1 and tb.graph.in_degree(v) == 1]
            for v in free:
                if tb.graph.has_vertex(v) and tb.graph.out_degree(v) == 1 \
                        and tb.graph.in_degree(v) == 1:
                    (eid,) = tb.graph.out_edges(v)
                    tb.contract(eid, rep=tb.graph.head(eid))
        order = double_path_order(tb.graph)
        if order is None:
            raise StrataError("comb did not reduce to a doubled path")
        while tb.graph.num_vertices() > n:
            order = double_path_order(tb.graph)
            leaf = order[-1]
            (eid,) = [e for e in tb.graph.in_edges(leaf)]
            tb.contract(eid, rep=tb.graph.tail(eid))
        name = "doubled-path"
    final, t2 = tb.finish()
    trace = compose(res.trace, t2)
    if not verify_trace(d, trace, final):
        raise StrataError("canonicalization trace failed to verify")
    return name, final, trace
