"""Centre construction: edge-minimal reduction, the three main-structure
types, and the centre minor.

The pipeline here turns a strongly connected graph with a target set U into a
butterfly minor consisting of a strongly connected centre A (a vertex, a
directed cycle, or a chain of directed cycles) with disjoint double paths
attached through single edges, each reaching a tooth in U.  Every
intermediate object is re-checked at runtime: the first-edge claim, the
mutual-avoidance claim between the return paths, and the in-arborescence
shape of the rerouted tails.
"""
from __future__ import annotations

from dataclasses import dataclass

from .butterfly import TraceBuilder
from .digraph import (
    CycleChain,
    DiCycle,
    Digraph,
    DiPath,
    StrataError,
    dfs_out_arborescence,
    path_segment,
    path_terminal,
    shortest_path,
)
from .laced import check_laced, emit_double_path, lace
from .starcomb import Insufficient


# -- edge-minimal reduction ---------------------------------------------------


def _u_pairs_mutually_reachable(d: Digraph, u, skip_edge: int | None = None) -> bool:
    uu = sorted(u)
    blocked = frozenset() if skip_edge is None else frozenset({skip_edge})
    for s in uu:
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for eid in d.out_edges(x):
                if eid in blocked:
                    continue
                y = d.head(eid)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if any(t not in seen for t in uu):
            return False
    return True


def emit_edge_minimal(tb: TraceBuilder, u) -> None:
    """Delete edges (ascending id) while all ordered U-pairs stay mutually
    reachable, then drop isolated vertices.  One pass reaches the fixpoint:
    deletions only remove paths, so a kept edge never becomes deletable."""
    u = set(u)
    for v in u:
        tb.graph._check_vertex(v)
    if not _u_pairs_mutually_reachable(tb.graph, u):
        raise StrataError("U is not mutually connected")
    for eid in list(tb.graph.edge_ids()):
        if _u_pairs_mutually_reachable(tb.graph, u, skip_edge=eid):
            tb.delete_edge(eid)
    for v in list(tb.graph.vertices()):
        if tb.graph.out_degree(v) == 0 and tb.graph.in_degree(v) == 0 and v not in u:
            tb.delete_vertex(v)


def edge_minimal_for_u(d: Digraph, u) -> Digraph:
    """Edge-minimal subgraph keeping every ordered U-pair mutually reachable."""
    tb = TraceBuilder(d)
    emit_edge_minimal(tb, u)
    return tb.graph.copy()


def critical_tooth(dmin: Digraph, u, a_verts, eid: int) -> int:
    """The U-vertex that deleting ``eid`` cuts off from the strongly connected
    subgraph on ``a_verts`` (tail inside, head outside); exists whenever the
    host is edge-minimal for U."""
    a_verts = set(a_verts)
    t, h = dmin.endpoints(eid)
    if t not in a_verts or h in a_verts:
        raise StrataError("edge must leave the subgraph")
    seen = set(a_verts)
    stack = sorted(a_verts)
    while stack:
        x = stack.pop()
        for e2 in dmin.out_edges(x):
            if e2 == eid:
                continue
            y = dmin.head(e2)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    for v in sorted(u):
        if v not in seen:
            return v
    raise StrataError(
        f"no critical tooth for edge {eid}: edge-minimality invariant broken")


# -- main structure -----------------------------------------------------------


@dataclass
class MainStructure:
    """A strongly connected centre A with attached directed A-U paths.

    kind 'a': A is one vertex, paths non-trivial and meeting only in A.
    kind 'b': A is a directed cycle, paths disjoint and possibly trivial.
    kind 'c': A is a cycle chain; additionally every chain cycle contains at
    most one path startvertex (``start_cycle`` keeps the placement).
    """

    kind: str
    a_vertex: int | None
    a_cycle: DiCycle | None
    a_chain: CycleChain | None
    paths: tuple[DiPath, ...]

    def a_vertices(self) -> frozenset[int]:
        if self.kind == "a":
            return frozenset({self.a_vertex})
        if self.kind == "b":
            return self.a_cycle.vertex_set()
        return self.a_chain.vertex_set()

    def validate(self) -> None:
        av = self.a_vertices()
        for p in self.paths:
            if p.startvertex not in av:
                raise StrataError("path does not start in A")
            if any(v in av for v in p.vertices[1:]):
                raise StrataError("path returns to A")
        if self.kind == "a":
            if any(p.is_trivial() for p in self.paths):
                raise StrataError("kind a requires non-trivial paths")
            seen: set[int] = set()
            for p in self.paths:
                body = set(p.vertices) - {self.a_vertex}
                if body & seen:
                    raise StrataError("paths intersect outside A")
                seen |= body
        else:
            seen = set()
            for p in self.paths:
                if set(p.vertices) & seen:
                    raise StrataError("paths are not disjoint")
                seen |= set(p.vertices)
        if self.kind == "c":
            self.a_chain.validate()
            for j, c in enumerate(self.a_chain.cycles):
                starts = [p.startvertex for p in self.paths if p.startvertex in c]
                if len(starts) > 1:
                    raise StrataError(f"cycle {j} hosts {len(starts)} startvertices")


def _anchor_path(d: Digraph, root: int, u: set[int]):
    """(max out-degree data, best anchor chain) for the pruned DFS tree."""
    t = dfs_out_arborescence(d, root, targets=u)
    best_deg, best_vertex = -1, None
    for v in t.vertices():
        deg = len(t.children(v))
        if deg > best_deg:
            best_deg, best_vertex = deg, v
    return t, best_deg, best_vertex


def _descend_to_u(t, start: int, u: set[int]) -> list[int]:
    """Walk from a tree vertex down to the first U-vertex (lowest child ids)."""
    path = [start]
    while path[-1] not in u:
        path.append(min(t.children(path[-1])))
    return path


def main_structure(d: Digraph, u, n: int):
    """The Prop-style branch order: a high-out-degree vertex gives kind 'a';
    otherwise the best anchor path plus a laced return path gives a cycle
    chain, a single cycle hosting many path starts gives kind 'b', and
    spacing-3 cycle selection gives kind 'c'.  Returns Insufficient with the
    best achievable count when every branch falls short."""
    u = set(u)
    if not u or n <= 0:
        raise StrataError("need a nonempty U and positive n")

    # kind 'a' candidate: best out-degree over all DFS roots, deterministically
    best = None  # (deg, root, vertex, tree)
    for root in d.vertices():
        t, deg, vertex = _anchor_path(d, root, u)
        if best is None or deg > best[0]:
            best = (deg, root, vertex, t)
    a_deg, _, a_vertex, a_tree = best
    if a_deg >= n:
        paths = []
        for child in a_tree.children(a_vertex):
            walk = [a_vertex] + _descend_to_u(a_tree, child, u)
            paths.append(DiPath.from_vertices(d, walk))
        ms = MainStructure("a", a_vertex, None, None, tuple(paths))
        ms.validate()
        return ms

    # comb route from the canonical root
    root = min(u)
    t = dfs_out_arborescence(d, root, targets=u)

    def anchor(v: int) -> bool:
        return v in u or len(t.children(v)) >= 2

    down: dict[int, tuple[int, tuple[int, ...]]] = {}
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(t.children(v))
    for v in reversed(order):
        score, path = 0, (v,)
        for c in t.children(v):
            cs, cp = down[c]
            if cs > score:
                score, path = cs, (v,) + cp
        down[v] = (score + (1 if anchor(v) else 0), path)
    best_score, best_chain = max(
        ((down[v][0], down[v][1]) for v in order), key=lambda x: (x[0], tuple(-i for i in x[1])))
    b_count = c_count = 0
    result_b = result_c = None
    if len(best_chain) >= 2 or (len(best_chain) == 1 and best_score > 0):
        r = DiPath.from_vertices(d, best_chain) if len(best_chain) > 1 else \
            DiPath.trivial(d, best_chain[0])
        if not r.is_trivial():
            s0 = shortest_path(d, [r.endvertex], [r.startvertex])
            if s0 is None:
                raise StrataError("host is not strongly connected")
            s = lace(r, s0)
            w = check_laced(r, s)
            from .laced import cycle_chain_of

            chain = cycle_chain_of(r, s, w)
            chain_verts = chain.vertex_set()
            hats = []
            for v in best_chain:
                if v in u:
                    hats.append(DiPath.trivial(d, v))
                elif len(t.children(v)) >= 2:
                    off = [c for c in t.children(v) if c not in best_chain]
                    if not off:
                        continue
                    walk = [v] + _descend_to_u(t, off[0], u)
                    hats.append(DiPath.from_vertices(d, walk))
            paths = []
            for hat in hats:
                last_on = max(i for i, x in enumerate(hat.vertices) if x in chain_verts)
                paths.append(path_terminal(hat, hat.vertices[last_on]))
            # drop duplicates that trimmed to the same trivial vertex
            seen_sets: set[frozenset[int]] = set()
            uniq = []
            for p in paths:
                key = p.vertex_set()
                if any(key & s for s in seen_sets):
                    continue
                seen_sets.add(key)
                uniq.append(p)
            paths = uniq
            per_cycle: list[list[DiPath]] = [[] for _ in chain.cycles]
            for p in paths:
                for j, c in enumerate(chain.cycles):
                    if p.startvertex in c:
                        per_cycle[j].append(p)
            b_j = max(range(len(chain.cycles)), key=lambda j: (len(per_cycle[j]), -j))
            b_count = len(per_cycle[b_j])
            if b_count >= n:
                ms = MainStructure("b", None, chain.cycles[b_j], None,
                                   tuple(per_cycle[b_j][:max(n, b_count)]))
                ms.validate()
                result_b = ms
            # greedy selection enforcing the kind-'c' clause directly: no
            # chain cycle may host two selected startvertices
            gammas = sorted((chain.min_index_of(p.startvertex), i)
                            for i, p in enumerate(paths))
            chosen: list[int] = []
            taken_cycles: set[int] = set()
            for _, i in gammas:
                hosts = {j for j, c in enumerate(chain.cycles)
                         if paths[i].startvertex in c}
                if hosts & taken_cycles:
                    continue
                chosen.append(i)
                taken_cycles |= hosts
            c_count = len(chosen)
            if result_b is None and c_count >= n:
                ms = MainStructure("c", None, None, chain,
                                   tuple(paths[i] for i in chosen))
                ms.validate()
                result_c = ms
    if result_b is not None:
        return result_b
    if result_c is not None:
        return result_c
    return Insufficient(max(a_deg, b_count, c_count, 0), "main-structure")


def main_structure_best(d: Digraph, u, target: int):
    """Best-effort wrapper: the structure for ``target`` or, falling short,
    the structure for the best achievable count."""
    res = main_structure(d, u, target)
    if isinstance(res, Insufficient):
        if res.achieved <= 0:
            return res
        return main_structure(d, u, res.achieved)
    return res


# -- centre structure ---------------------------------------------------------


@dataclass(frozen=True)
class Attachment:
    """One attached double path: tooth u in U, inner endpoint z, and the
    anchor edges (a, z), (z, b) into the centre; ``spine`` lists the double
    path's vertices from z to the tooth."""

    tooth: int
    z: int
    a: int
    b: int
    spine: tuple[int, ...]


@dataclass
class CentreStructure:
    """The centre minor: kind 'i' keeps a cycle or cycle chain with selected
    teeth on it; kinds 'ii-a/b/c' carry a centre A plus attachments."""

    kind: str
    graph: Digraph
    cycle: DiCycle | None = None
    chain: CycleChain | None = None
    u_sel: tuple[int, ...] = ()
    a_vertex: int | None = None
    attachments: tuple[Attachment, ...] = ()

    def teeth_count(self) -> int:
        return len(self.u_sel) if self.kind == "i" else len(self.attachments)

    def a_vertices(self) -> frozenset[int]:
        if self.kind == "ii-a":
            return frozenset({self.a_vertex})
        if self.kind == "ii-b":
            return self.cycle.vertex_set()
        if self.kind == "ii-c":
            return self.chain.vertex_set()
        return (self.cycle.vertex_set() if self.cycle is not None
                else self.chain.vertex_set())

    def validate(self) -> None:
        g = self.graph
        if self.kind == "i":
            if self.cycle is None and self.chain is None:
                raise StrataError("kind i needs a cycle or a chain")
            if self.chain is not None:
                self.chain.validate()
                for j, c in enumerate(self.chain.cycles):
                    if len([v for v in self.u_sel if v in c]) > 1:
                        raise StrataError(f"cycle {j} holds two selected teeth")
            carrier = self.a_vertices()
            if not set(self.u_sel) <= carrier:
                raise StrataError("selected teeth must lie on the centre")
            return
        av = self.a_vertices()
        spines: list[set[int]] = []
        for att in self.attachments:
            body = set(att.spine)
            if att.spine[0] != att.z or att.spine[-1] != att.tooth:
                raise StrataError("spine must run from z to the tooth")
            if body & av:
                raise StrataError("double path touches the centre")
            for other in spines:
                if body & other:
                    raise StrataError("double paths intersect")
            spines.append(body)
            if att.a not in av or att.b not in av:
                raise StrataError("anchor vertices must lie in A")
            if not g.edges_between(att.a, att.z) or not g.edges_between(att.z, att.b):
                raise StrataError("anchor edges missing")
            for x, y in zip(att.spine, att.spine[1:]):
                if not g.edges_between(x, y) or not g.edges_between(y, x):
                    raise StrataError("attachment is not a double path")
        if self.kind == "ii-a":
            if any(att.a != self.a_vertex or att.b != self.a_vertex
                   for att in self.attachments):
                raise StrataError("kind ii-a anchors must equal the centre vertex")
        if self.kind == "ii-b":
            a_list = [att.a for att in self.attachments]
            if len(set(a_list)) != len(a_list):
                raise StrataError("kind ii-b requires distinct a_i")
        if self.kind == "ii-c":
            self.chain.validate()
            for j, c in enumerate(self.chain.cycles):
                hits = [att.a for att in self.attachments if att.a in c]
                if len(hits) > 1:
                    raise StrataError(f"cycle {j} hosts two a_i anchors")


def _claim_one_holds(dmin: Digraph, a_verts, p: DiPath) -> bool:
    """No directed A-to-tail(P) path once P's first edge is removed."""
    e0 = p.edges[0]
    tail = set(p.vertices[1:])
    seen = set(a_verts)
    stack = sorted(a_verts)
    while stack:
        x = stack.pop()
        for eid in dmin.out_edges(x):
            if eid == e0:
                continue
            y = dmin.head(eid)
            if y in tail:
                return False
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return True


def _swap_to_critical(dmin: Digraph, u, a_verts, p: DiPath) -> DiPath:
    """Replace a path violating the first-edge claim by an A-path to the
    critical tooth of its first edge; the replacement satisfies the claim."""
    e0 = p.edges[0]
    v = critical_tooth(dmin, u, a_verts, e0)
    q = shortest_path(dmin, sorted(a_verts), [v])
    if q is None or not q.edges or q.edges[0] != e0:
        raise StrataError("critical-tooth replacement must start with the same edge")
    return q


def _reroute_tails(tails: list[DiPath], a_verts: set[int]):
    """Reroute the tail paths so their union is a forest of in-arborescences:
    at a shared vertex every path adopts the lowest-index continuation.

    Returns (per-tail rerouted vertex lists, used edge ids, parent map).
    """
    nxt: dict[int, tuple[int, int]] = {}
    for t in tails:
        for i, x in enumerate(t.vertices[:-1]):
            if x not in nxt:
                nxt[x] = (t.vertices[i + 1], t.edges[i])
    rerouted = []
    used_edges: set[int] = set()
    for t in tails:
        walk = [t.vertices[0]]
        while walk[-1] not in a_verts:
            y, eid = nxt[walk[-1]]
            used_edges.add(eid)
            walk.append(y)
            if len(walk) > len(nxt) + 2:
                raise StrataError("tail rerouting cycled")
        rerouted.append(walk)
    return rerouted, used_edges, nxt


def centre_minor(d: Digraph, u, n: int, *, paths_target: int | None = None):
    """The centre minor with at least ``n`` teeth, or Insufficient.

    Follows the groundwork recipe: reduce to the edge-minimal host, take the
    main structure for ``paths_target`` (default 2n) attachment paths, split
    on how many are trivial, and for the non-trivial side enforce the
    first-edge claim, lace the return paths, reroute their shared tails, and
    contract each attachment to a double path.
    """
    u = set(u)
    if n <= 0:
        raise StrataError("n must be positive")
    tb = TraceBuilder(d)
    emit_edge_minimal(tb, u)
    dmin = tb.graph.copy()
    ms = main_structure_best(dmin, u, paths_target if paths_target is not None else 2 * n)
    if isinstance(ms, Insufficient):
        return Insufficient(0, "centre")
    trivial = [p for p in ms.paths if p.is_trivial()]
    nontrivial = [p for p in ms.paths if not p.is_trivial()]

    if len(trivial) >= len(nontrivial) and len(trivial) > 0 and ms.kind != "a":
        # type (i): the centre alone carries the teeth
        if ms.kind == "b":
            keep_v = ms.a_cycle.vertex_set()
            keep_e = ms.a_cycle.edge_set()
        else:
            keep_v = ms.a_chain.vertex_set()
            keep_e = ms.a_chain.edge_set()
        tb.keep_only(keep_v)
        tb.keep_only_edges(keep_e)
        result, trace = tb.finish()
        u_sel = tuple(sorted(p.startvertex for p in trivial))
        if ms.kind == "b":
            cyc = DiCycle(result, ms.a_cycle.vertices, ms.a_cycle.edges)
            cs = CentreStructure("i", result, cycle=cyc, u_sel=u_sel)
        else:
            cycles = tuple(DiCycle(result, c.vertices, c.edges) for c in ms.a_chain.cycles)
            cs = CentreStructure("i", result, chain=CycleChain(cycles), u_sel=u_sel)
        cs.validate()
        if cs.teeth_count() < n:
            return Insufficient(cs.teeth_count(), "centre")
        return cs, trace

    if not nontrivial:
        return Insufficient(0, "centre")

    a_verts = set(ms.a_vertices())
    paths = list(nontrivial)
    for k, p in enumerate(paths):
        if not _claim_one_holds(dmin, a_verts, p):
            paths[k] = _swap_to_critical(dmin, u, a_verts, p)
            if not _claim_one_holds(dmin, a_verts, paths[k]):
                raise StrataError("claim-one replacement still violates the claim")
    for i, p in enumerate(paths):  # the swaps must keep the family disjoint
        for j, q in enumerate(paths):
            if i < j and set(p.vertices) & set(q.vertices) - a_verts:
                raise StrataError("claim-one swap broke path disjointness")

    heads: list[DiPath] = []
    tails: list[DiPath] = []
    zs: list[int] = []
    qs: list[DiPath] = []
    ptails: list[DiPath] = []
    for p in paths:
        ptail = path_terminal(p, p.vertices[1])
        q0 = shortest_path(dmin, [p.endvertex], sorted(a_verts))
        if q0 is None:
            raise StrataError("host is not strongly connected")
        q = lace(p, q0)
        tail_set = ptail.vertex_set()
        z = max((i for i, x in enumerate(q.vertices) if x in tail_set), default=None)
        if z is None:
            raise StrataError("return path misses its own attachment")
        z_vertex = q.vertices[z]
        ptails.append(ptail)
        qs.append(q)
        zs.append(z_vertex)
        heads.append(path_segment(q, q.startvertex, z_vertex))
        tails.append(path_segment(q, z_vertex, q.endvertex))
    # mutual-avoidance claim: Q_i avoids tail(P_j) and the head of Q_j
    for i in range(len(paths)):
        for j in range(len(paths)):
            if i == j:
                continue
            blocked = ptails[j].vertex_set() | heads[j].vertex_set()
            if qs[i].vertex_set() & blocked:
                raise StrataError("return paths violate the avoidance claim")

    rerouted, tail_edges, _ = _reroute_tails(tails, a_verts)

    keep_v: set[int] = set(a_verts)
    keep_e: set[int] = set()
    if ms.kind == "b":
        keep_e |= ms.a_cycle.edge_set()
    elif ms.kind == "c":
        keep_e |= ms.a_chain.edge_set()
    for p, q, h, walk in zip(paths, qs, heads, rerouted):
        keep_v |= p.vertex_set() | h.vertex_set() | set(walk)
        keep_e |= p.edge_set() | h.edge_set()
    keep_e |= tail_edges
    tb.keep_only(keep_v)
    tb.keep_only_edges(keep_e)

    attachments: list[Attachment] = []
    for p, q, h, z_vertex, walk in zip(paths, qs, heads, zs, rerouted):
        ptail = path_terminal(p, p.vertices[1])
        prefix = list(path_segment(ptail, ptail.startvertex, z_vertex).vertices)
        if len(prefix) > 1:
            tb.contract_path_into_root(prefix)
        pstar = path_segment(ptail, z_vertex, ptail.endvertex)
        pstar = DiPath(tb.graph, pstar.vertices, pstar.edges)
        # the prefix contraction swallowed the head's trailing block part (it
        # lay on the attachment path); rebuild the head on the survivors
        merged = set(prefix[:-1])
        survivors = [v for v in h.vertices if v == z_vertex or v not in merged]
        qedges = []
        gi = tb.graph
        for a, b in zip(survivors, survivors[1:]):
            cand = [e for e in h.edges if gi.has_edge(e) and gi.endpoints(e) == (a, b)]
            if not cand:
                raise StrataError("head edge lost during prefix contraction")
            qedges.append(cand[0])
        qstar = DiPath(tb.graph, tuple(survivors), tuple(qedges))
        w = check_laced(pstar, qstar)
        if w is None:
            raise StrataError("attachment pair lost lacedness")
        spine = emit_double_path(tb, pstar, qstar, w)
        attachments.append(Attachment(p.endvertex, z_vertex, p.startvertex,
                                      walk[-1], tuple(spine)))

    # contract the rerouted tails, leaf-first, into their roots in A
    interior: dict[int, int] = {}
    for walk in rerouted:
        for i, x in enumerate(walk[1:-1], 1):
            interior[x] = walk[i + 1]
    remaining = dict(interior)
    while remaining:
        targets = set(remaining.values())
        leaves = sorted(x for x in remaining if x not in targets)
        if not leaves:
            raise StrataError("tail contraction stalled")
        for x in leaves:
            (eid,) = tb.graph.out_edges(x)
            tb.contract(eid, rep=tb.graph.head(eid))
            del remaining[x]

    result, trace = tb.finish()
    kind = {"a": "ii-a", "b": "ii-b", "c": "ii-c"}[ms.kind]
    cyc = chain = None
    if ms.kind == "b":
        cyc = DiCycle(result, ms.a_cycle.vertices, ms.a_cycle.edges)
    elif ms.kind == "c":
        chain = CycleChain(tuple(DiCycle(result, c.vertices, c.edges)
                                 for c in ms.a_chain.cycles))
    cs = CentreStructure(kind, result, cycle=cyc, chain=chain,
                         a_vertex=ms.a_vertex if ms.kind == "a" else None,
                         attachments=tuple(attachments))
    cs.validate()
    if cs.teeth_count() < n:
        return Insufficient(cs.teeth_count(), "centre")
    return cs, trace
