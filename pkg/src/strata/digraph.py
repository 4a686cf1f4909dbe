"""Loop-free directed multigraphs and the path/cycle/arborescence machinery.

Vertices and edges carry stable integer ids that are never reused within one
graph's lifetime.  Every algorithm in this package scans vertices and edges in
ascending id order, so all outputs are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

from ._kernels import closure as _bit_closure


class StrataError(Exception):
    """Base class for errors raised by this package."""


class UnknownIdError(StrataError):
    """A vertex or edge id does not exist in the graph."""


class Digraph:
    """Mutable directed multigraph without loops.

    Parallel edges are permitted (contractions create them); loops are
    rejected on insertion and silently dropped by contractions.
    """

    __slots__ = ("_verts", "_edges", "_out", "_in", "_next_vid", "_next_eid")

    def __init__(self) -> None:
        self._verts: set[int] = set()
        self._edges: dict[int, tuple[int, int]] = {}
        self._out: dict[int, set[int]] = {}
        self._in: dict[int, set[int]] = {}
        self._next_vid = 0
        self._next_eid = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, pairs: list[tuple[int, int]]) -> "Digraph":
        """Build a graph on vertices 0..n-1 with edge ids 0..len(pairs)-1."""
        g = cls()
        for _ in range(n):
            g.add_vertex()
        for t, h in pairs:
            g.add_edge(t, h)
        return g

    def add_vertex(self, vid: int | None = None) -> int:
        if vid is None:
            vid = self._next_vid
        if vid in self._verts:
            raise StrataError(f"vertex id {vid} already used")
        self._verts.add(vid)
        self._out[vid] = set()
        self._in[vid] = set()
        self._next_vid = max(self._next_vid, vid + 1)
        return vid

    def add_edge(self, tail: int, head: int, eid: int | None = None) -> int:
        self._check_vertex(tail)
        self._check_vertex(head)
        if tail == head:
            raise StrataError(f"loop ({tail},{head}) rejected")
        if eid is None:
            eid = self._next_eid
        if eid in self._edges:
            raise StrataError(f"edge id {eid} already used")
        self._edges[eid] = (tail, head)
        self._out[tail].add(eid)
        self._in[head].add(eid)
        self._next_eid = max(self._next_eid, eid + 1)
        return eid

    def delete_edge(self, eid: int) -> None:
        t, h = self.endpoints(eid)
        del self._edges[eid]
        self._out[t].discard(eid)
        self._in[h].discard(eid)

    def delete_vertex(self, vid: int) -> None:
        self._check_vertex(vid)
        for eid in sorted(self._out[vid] | self._in[vid]):
            self.delete_edge(eid)
        self._verts.remove(vid)
        del self._out[vid]
        del self._in[vid]

    def copy(self) -> "Digraph":
        g = Digraph()
        g._verts = set(self._verts)
        g._edges = dict(self._edges)
        g._out = {v: set(s) for v, s in self._out.items()}
        g._in = {v: set(s) for v, s in self._in.items()}
        g._next_vid = self._next_vid
        g._next_eid = self._next_eid
        return g

    # -- queries ----------------------------------------------------------

    def _check_vertex(self, vid: int) -> None:
        if vid not in self._verts:
            raise UnknownIdError(f"unknown vertex id {vid}")

    def has_vertex(self, vid: int) -> bool:
        return vid in self._verts

    def has_edge(self, eid: int) -> bool:
        return eid in self._edges

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._verts))

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self._edges))

    def endpoints(self, eid: int) -> tuple[int, int]:
        if eid not in self._edges:
            raise UnknownIdError(f"unknown edge id {eid}")
        return self._edges[eid]

    def tail(self, eid: int) -> int:
        return self.endpoints(eid)[0]

    def head(self, eid: int) -> int:
        return self.endpoints(eid)[1]

    def out_edges(self, vid: int) -> tuple[int, ...]:
        self._check_vertex(vid)
        return tuple(sorted(self._out[vid]))

    def in_edges(self, vid: int) -> tuple[int, ...]:
        self._check_vertex(vid)
        return tuple(sorted(self._in[vid]))

    def out_degree(self, vid: int) -> int:
        self._check_vertex(vid)
        return len(self._out[vid])

    def in_degree(self, vid: int) -> int:
        self._check_vertex(vid)
        return len(self._in[vid])

    def successors(self, vid: int) -> tuple[int, ...]:
        return tuple(sorted({self._edges[e][1] for e in self._out[vid]}))

    def predecessors(self, vid: int) -> tuple[int, ...]:
        return tuple(sorted({self._edges[e][0] for e in self._in[vid]}))

    def edges_between(self, tail: int, head: int) -> tuple[int, ...]:
        self._check_vertex(tail)
        return tuple(sorted(e for e in self._out[tail] if self._edges[e][1] == head))

    def num_vertices(self) -> int:
        return len(self._verts)

    def num_edges(self) -> int:
        return len(self._edges)

    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        """Edge endpoint pairs in ascending edge-id order (a multiset)."""
        return tuple(self._edges[e] for e in sorted(self._edges))

    def signature(self) -> tuple:
        """Content signature: equal iff same vertices and same edge multiset."""
        return (self.vertices(), tuple(sorted(self.edge_pairs())))

    def same_graph(self, other: "Digraph") -> bool:
        return self.signature() == other.signature()

    def induced_subgraph(self, verts) -> "Digraph":
        keep = set(verts)
        for v in keep:
            self._check_vertex(v)
        g = Digraph()
        g._verts = set(keep)
        g._out = {v: set() for v in keep}
        g._in = {v: set() for v in keep}
        for eid in sorted(self._edges):
            t, h = self._edges[eid]
            if t in keep and h in keep:
                g._edges[eid] = (t, h)
                g._out[t].add(eid)
                g._in[h].add(eid)
        g._next_vid = self._next_vid
        g._next_eid = self._next_eid
        return g

    def edge_subgraph(self, eids, extra_verts=()) -> "Digraph":
        """Subgraph of the given edges plus their endpoints and extra_verts."""
        g = Digraph()
        vs = set(extra_verts)
        eids = sorted(set(eids))
        for eid in eids:
            t, h = self.endpoints(eid)
            vs.add(t)
            vs.add(h)
        for v in sorted(vs):
            self._check_vertex(v)
            g._verts.add(v)
            g._out[v] = set()
            g._in[v] = set()
        for eid in eids:
            t, h = self._edges[eid]
            g._edges[eid] = (t, h)
            g._out[t].add(eid)
            g._in[h].add(eid)
        g._next_vid = self._next_vid
        g._next_eid = self._next_eid
        return g

    def simplified(self) -> "Digraph":
        """Copy with parallel edges merged (keeps the lowest edge id)."""
        g = Digraph()
        for v in self.vertices():
            g.add_vertex(v)
        seen: set[tuple[int, int]] = set()
        for eid in sorted(self._edges):
            t, h = self._edges[eid]
            if (t, h) not in seen:
                seen.add((t, h))
                g.add_edge(t, h, eid)
        return g

    def __repr__(self) -> str:  # pragma: no cover
        return f"Digraph(|V|={len(self._verts)}, |E|={len(self._edges)})"


# -- reachability ----------------------------------------------------------


def reaches(d: Digraph, v: int, w: int) -> bool:
    """True iff a directed v-w path exists; reaches(d, v, v) is always true."""
    d._check_vertex(v)
    d._check_vertex(w)
    if v == w:
        return True
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in d.successors(x):
            if y == w:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def reachable_from(d: Digraph, sources) -> set[int]:
    """All vertices reachable from the source set (sources included)."""
    seen = set()
    stack = []
    for s in sorted(set(sources)):
        d._check_vertex(s)
        seen.add(s)
        stack.append(s)
    while stack:
        x = stack.pop()
        for y in d.successors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def reachability_closure(d: Digraph) -> dict[int, set[int]]:
    """All-pairs reachability, vertex -> reachable set (including itself)."""
    vs = d.vertices()
    n = len(vs)
    if n > 64:  # beyond the bitset kernel's word width
        return {v: reachable_from(d, [v]) for v in vs}
    idx = {v: i for i, v in enumerate(vs)}
    adj = [0] * n
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        adj[idx[t]] |= 1 << idx[h]
    reach = _bit_closure(n, adj)
    out: dict[int, set[int]] = {}
    for i, v in enumerate(vs):
        mask = reach[i]
        out[v] = {vs[j] for j in range(n) if mask >> j & 1}
    return out


def is_strongly_connected(d: Digraph) -> bool:
    vs = d.vertices()
    if len(vs) <= 1:
        return True
    root = vs[0]
    if len(reachable_from(d, [root])) != len(vs):
        return False
    # reverse reachability from root
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in d.predecessors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vs)


def strong_components(d: Digraph) -> list[frozenset[int]]:
    """Maximal strongly connected vertex sets, sorted by smallest member.

    Iterative Tarjan; singleton components are included.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[frozenset[int]] = []
    counter = 0

    for start in d.vertices():
        if start in index:
            continue
        work = [(start, iter(d.successors(start)))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(d.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


# -- directed paths ---------------------------------------------------------


@dataclass(frozen=True)
class DiPath:
    """A directed path as an explicit vertex/edge sequence inside a host graph.

    ``edges[i]`` goes from ``vertices[i]`` to ``vertices[i+1]``.  A trivial
    path is a single vertex with no edges.
    """

    host: Digraph
    vertices: tuple[int, ...]
    edges: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.vertices:
            raise StrataError("empty path")
        if len(set(self.vertices)) != len(self.vertices):
            raise StrataError("path vertices repeat")
        if len(self.edges) != len(self.vertices) - 1:
            raise StrataError("edge/vertex count mismatch")
        for i, eid in enumerate(self.edges):
            t, h = self.host.endpoints(eid)
            if (t, h) != (self.vertices[i], self.vertices[i + 1]):
                raise StrataError(f"edge {eid} does not join consecutive path vertices")

    @classmethod
    def trivial(cls, host: Digraph, v: int) -> "DiPath":
        host._check_vertex(v)
        return cls(host, (v,))

    @classmethod
    def from_vertices(cls, host: Digraph, verts) -> "DiPath":
        """Path along the given vertices using the lowest-id edge at each step."""
        verts = tuple(verts)
        eids = []
        for a, b in zip(verts, verts[1:]):
            cands = host.edges_between(a, b)
            if not cands:
                raise StrataError(f"no edge ({a},{b}) in host")
            eids.append(cands[0])
        return cls(host, verts, tuple(eids))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def startvertex(self) -> int:
        return self.vertices[0]

    @property
    def endvertex(self) -> int:
        return self.vertices[-1]

    def is_trivial(self) -> bool:
        return len(self.vertices) == 1

    def internal_vertices(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def index_of(self, v: int) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise StrataError(f"vertex {v} not on path") from None

    def le(self, v: int, w: int) -> bool:
        """The path order: v <=_P w iff w lies on the terminal segment vP."""
        return self.index_of(v) <= self.index_of(w)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)


def path_segment(p: DiPath, x: int, y: int) -> DiPath:
    """The subpath xPy; requires x <=_P y."""
    i, j = p.index_of(x), p.index_of(y)
    if i > j:
        raise StrataError(f"order violated: {x} comes after {y} on path")
    return DiPath(p.host, p.vertices[i : j + 1], p.edges[i:j])


def path_initial(p: DiPath, x: int) -> DiPath:
    """The initial segment Px."""
    return path_segment(p, p.startvertex, x)


def path_terminal(p: DiPath, x: int) -> DiPath:
    """The terminal segment xP."""
    return path_segment(p, x, p.endvertex)


def path_concat(p: DiPath, x: int, q: DiPath) -> DiPath:
    """The concatenation PxQ of the initial segment Px and terminal segment xQ."""
    if p.host is not q.host:
        raise StrataError("paths live in different hosts")
    left = path_initial(p, x)
    right = path_terminal(q, x)
    verts = left.vertices + right.vertices[1:]
    if len(set(verts)) != len(verts):
        raise StrataError("concatenation repeats a vertex")
    return DiPath(p.host, verts, left.edges + right.edges)


def shortest_path(d: Digraph, sources, targets, forbidden_edges=frozenset(),
                  forbidden_verts=frozenset()) -> DiPath | None:
    """Deterministic BFS path from the source set to the target set.

    Internal vertices avoid both sets, so the result is a directed X--Y path.
    Ties break toward lower vertex ids.
    """
    src = sorted(set(sources))
    tgt = set(targets)
    blocked_v = set(forbidden_verts)
    blocked_e = set(forbidden_edges)
    for s in src:
        if s in tgt and s not in blocked_v:
            return DiPath.trivial(d, s)
    prev: dict[int, tuple[int, int]] = {}
    seen = set(src) | blocked_v
    frontier = [s for s in src if s not in blocked_v]
    while frontier:
        nxt = []
        for x in sorted(frontier):
            for eid in d.out_edges(x):
                if eid in blocked_e:
                    continue
                y = d.head(eid)
                if y in seen:
                    continue
                seen.add(y)
                prev[y] = (x, eid)
                if y in tgt:
                    verts = [y]
                    eids = []
                    cur = y
                    while cur not in src:
                        px, pe = prev[cur]
                        verts.append(px)
                        eids.append(pe)
                        cur = px
                    verts.reverse()
                    eids.reverse()
                    return DiPath(d, tuple(verts), tuple(eids))
                nxt.append(y)
        frontier = nxt
    return None


# -- directed cycles --------------------------------------------------------


@dataclass(frozen=True)
class DiCycle:
    """A directed cycle; ``vertices`` lists each vertex once, ``edges[i]``
    goes from ``vertices[i]`` to ``vertices[(i+1) % n]``.  Length >= 2."""

    host: Digraph
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if n < 2:
            raise StrataError("directed cycles have length >= 2")
        if len(set(self.vertices)) != n or len(self.edges) != n:
            raise StrataError("malformed cycle")
        for i, eid in enumerate(self.edges):
            t, h = self.host.endpoints(eid)
            if (t, h) != (self.vertices[i], self.vertices[(i + 1) % n]):
                raise StrataError(f"edge {eid} does not follow the cycle")

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    def successor(self, v: int) -> int:
        i = self.vertices.index(v)
        return self.vertices[(i + 1) % len(self.vertices)]

    def segment(self, x: int, y: int) -> DiPath:
        """The directed path xCy along the cycle (trivial when x == y)."""
        i = self.vertices.index(x)
        verts = [x]
        eids = []
        n = len(self.vertices)
        while verts[-1] != y:
            eids.append(self.edges[i])
            i = (i + 1) % n
            verts.append(self.vertices[i])
            if len(verts) > n:
                raise StrataError("segment endpoint not on cycle")
        return DiPath(self.host, tuple(verts), tuple(eids))


def common_subpath(c1: DiCycle, c2: DiCycle) -> DiPath | None:
    """The intersection of two cycles when it is a directed path, else None.

    The intersection is taken as a subgraph: shared vertices and shared edges.
    Returns None when empty or not a (possibly trivial) directed path.
    """
    vs = c1.vertex_set() & c2.vertex_set()
    if not vs:
        return None
    es = c1.edge_set() & c2.edge_set()
    host = c1.host
    # the shared subgraph must be one weakly connected directed path
    succ: dict[int, int] = {}
    indeg = {v: 0 for v in vs}
    for eid in es:
        t, h = host.endpoints(eid)
        if t in succ:
            return None
        succ[t] = h
        indeg[h] += 1
    starts = [v for v in vs if indeg[v] == 0]
    if len(vs) - len(es) != 1:
        return None
    if len(starts) != 1:
        return None
    start = starts[0]
    verts = [start]
    while verts[-1] in succ:
        verts.append(succ[verts[-1]])
        if len(verts) > len(vs):
            return None
    if len(verts) != len(vs):
        return None
    return DiPath.from_vertices(host, verts) if len(verts) > 1 else DiPath.trivial(host, start)


@dataclass(frozen=True)
class CycleChain:
    """A sequence of directed cycles where consecutive cycles meet in a
    directed path and non-consecutive cycles are disjoint."""

    cycles: tuple[DiCycle, ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def __getitem__(self, j: int) -> DiCycle:
        return self.cycles[j]

    def validate(self) -> None:
        cs = self.cycles
        for j in range(len(cs)):
            for k in range(j + 1, len(cs)):
                inter_v = cs[j].vertex_set() & cs[k].vertex_set()
                if k - j == 1:
                    if common_subpath(cs[j], cs[k]) is None:
                        raise StrataError(f"cycles {j},{k} do not meet in a directed path")
                elif inter_v:
                    raise StrataError(f"non-consecutive cycles {j},{k} intersect")

    def vertex_set(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.cycles:
            out |= c.vertex_set()
        return frozenset(out)

    def edge_set(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.cycles:
            out |= c.edge_set()
        return frozenset(out)

    def min_index_of(self, v: int) -> int:
        """The minimal j with v in C_j (the paper-style placement index)."""
        for j, c in enumerate(self.cycles):
            if v in c:
                return j
        raise StrataError(f"vertex {v} not on chain")


# -- arborescences ----------------------------------------------------------


@dataclass
class Arborescence:
    """A rooted tree inside a host graph, oriented entirely toward the root
    (``orientation == 'in'``) or away from it (``'out'``).

    ``parent`` maps each non-root vertex to ``(parent_vertex, edge_id)`` where
    the edge goes child->parent for 'in' trees and parent->child for 'out'.
    """

    host: Digraph
    root: int
    parent: dict[int, tuple[int, int]]
    orientation: str

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.parent) | {self.root}))

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(sorted(e for _, e in self.parent.values()))

    def __contains__(self, v: int) -> bool:
        return v == self.root or v in self.parent

    def children(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(c for c, (p, _) in self.parent.items() if p == v))

    def leaves(self) -> tuple[int, ...]:
        if not self.parent:
            return (self.root,)
        non_leaves = {p for p, _ in self.parent.values()}
        return tuple(sorted(v for v in self.vertices() if v not in non_leaves and v != self.root))

    def path_from_root(self, v: int) -> tuple[int, ...]:
        verts = [v]
        while verts[-1] != self.root:
            verts.append(self.parent[verts[-1]][0])
        verts.reverse()
        return tuple(verts)

    def validate(self) -> None:
        if self.orientation not in ("in", "out"):
            raise StrataError("orientation must be 'in' or 'out'")
        self.host._check_vertex(self.root)
        for c, (p, eid) in self.parent.items():
            t, h = self.host.endpoints(eid)
            want = (c, p) if self.orientation == "in" else (p, c)
            if (t, h) != want:
                raise StrataError(f"edge {eid} disagrees with orientation at {c}")
        # acyclicity / connectivity: every vertex walks up to the root
        for c in self.parent:
            seen = {c}
            cur = c
            while cur != self.root:
                cur = self.parent[cur][0]
                if cur in seen:
                    raise StrataError("parent map has a cycle")
                seen.add(cur)

    def out_degree_in_tree(self, v: int) -> int:
        if self.orientation != "out":
            raise StrataError("out-degree bookkeeping is for out-arborescences")
        return len(self.children(v))


def dfs_out_arborescence(d: Digraph, root: int, targets) -> Arborescence:
    """Depth-first out-arborescence from ``root`` pruned so every leaf is a
    target.  All targets must be reachable from the root."""
    d._check_vertex(root)
    targets = set(targets)
    for t in targets:
        d._check_vertex(t)
    parent: dict[int, tuple[int, int]] = {}
    seen = {root}
    # iterative DFS, ascending edge ids
    work = [(root, iter(d.out_edges(root)))]
    while work:
        v, it = work[-1]
        advanced = False
        for eid in it:
            w = d.head(eid)
            if w in seen:
                continue
            seen.add(w)
            parent[w] = (v, eid)
            work.append((w, iter(d.out_edges(w))))
            advanced = True
            break
        if not advanced:
            work.pop()
    missing = sorted(t for t in targets if t not in seen)
    if missing:
        raise StrataError(f"target {missing[0]} unreachable from root {root}")
    # prune non-target leaves
    keep = set(parent) | {root}
    child_count = {v: 0 for v in keep}
    for c, (p, _) in parent.items():
        child_count[p] += 1
    fringe = [v for v in keep if child_count[v] == 0 and v not in targets and v != root]
    while fringe:
        v = fringe.pop()
        keep.discard(v)
        p = parent.pop(v)[0]
        child_count[p] -= 1
        if child_count[p] == 0 and p not in targets and p != root:
            fringe.append(p)
    arb = Arborescence(d, root, parent, "out")
    arb.validate()
    return arb


def spanning_in_arborescence(d: Digraph, root: int, verts) -> Arborescence:
    """In-arborescence rooted at ``root`` spanning ``verts`` using only edges
    between those vertices (deterministic reverse BFS)."""
    verts = set(verts)
    parent: dict[int, tuple[int, int]] = {}
    seen = {root}
    frontier = [root]
    while frontier:
        nxt = []
        for x in sorted(frontier):
            for eid in d.in_edges(x):
                t = d.tail(eid)
                if t in verts and t not in seen:
                    seen.add(t)
                    parent[t] = (x, eid)
                    nxt.append(t)
        frontier = nxt
    missing = sorted(verts - seen)
    if missing:
        raise StrataError(f"vertex {missing[0]} cannot reach root {root}")
    arb = Arborescence(d, root, parent, "in")
    arb.validate()
    return arb


def spanning_out_arborescence(d: Digraph, root: int, verts) -> Arborescence:
    """Out-arborescence rooted at ``root`` spanning ``verts`` (deterministic BFS)."""
    verts = set(verts)
    parent: dict[int, tuple[int, int]] = {}
    seen = {root}
    frontier = [root]
    while frontier:
        nxt = []
        for x in sorted(frontier):
            for eid in d.out_edges(x):
                h = d.head(eid)
                if h in verts and h not in seen:
                    seen.add(h)
                    parent[h] = (x, eid)
                    nxt.append(h)
        frontier = nxt
    missing = sorted(verts - seen)
    if missing:
        raise StrataError(f"vertex {missing[0]} unreachable from root {root}")
    arb = Arborescence(d, root, parent, "out")
    arb.validate()
    return arb
