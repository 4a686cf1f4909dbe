"""Undirected stars and combs, the classical extraction, and the doubling
operator that turns an undirected graph into a two-way directed one.

A comb is a spine path plus pairwise disjoint (possibly trivial) tooth paths,
each meeting the spine exactly in its first vertex; the teeth are the tooth
paths' last vertices.  A subdivided star is a centre of degree at least three
with internally disjoint branch paths; its teeth are the leaves.  Given a
connected graph and a target vertex set U, one of the two always exists with
many teeth in U once U is large enough; ``star_or_comb`` extracts the best it
can and reports the achievable count otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, StrataError


class UGraph:
    """Simple loopless undirected graph over integer vertex ids."""

    def __init__(self) -> None:
        self.adj: dict[int, set[int]] = {}

    @classmethod
    def from_edges(cls, n: int, pairs) -> "UGraph":
        g = cls()
        for i in range(n):
            g.add_vertex(i)
        for u, v in pairs:
            g.add_edge(u, v)
        return g

    def add_vertex(self, v: int) -> None:
        self.adj.setdefault(v, set())

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise StrataError("loops are not allowed")
        self.add_vertex(u)
        self.add_vertex(v)
        self.adj[u].add(v)
        self.adj[v].add(u)

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.adj))

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u in self.adj for v in self.adj[u] if u < v))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self.adj[v]))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def num_vertices(self) -> int:
        return len(self.adj)

    def is_connected(self) -> bool:
        vs = self.vertices()
        if not vs:
            return True
        seen = {vs[0]}
        stack = [vs[0]]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(vs)

    def is_tree(self) -> bool:
        m = sum(len(s) for s in self.adj.values()) // 2
        return self.is_connected() and m == len(self.adj) - 1


@dataclass(frozen=True)
class SubdividedStar:
    """Centre plus branch paths (each listed without the centre, ending in a
    leaf).  Branches share only the centre and there are at least three, so
    the centre is the unique vertex of degree > 2."""

    centre: int
    branches: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.branches) < 3:
            raise StrataError("a subdivided star needs at least three branches")
        seen = {self.centre}
        for br in self.branches:
            if not br:
                raise StrataError("empty branch")
            for v in br:
                if v in seen:
                    raise StrataError("branches must share only the centre")
                seen.add(v)

    @property
    def teeth(self) -> frozenset[int]:
        return frozenset(br[-1] for br in self.branches)

    def vertices(self) -> tuple[int, ...]:
        out = {self.centre}
        for br in self.branches:
            out.update(br)
        return tuple(sorted(out))

    def tree_edges(self) -> list[tuple[int, int]]:
        out = []
        for br in self.branches:
            prev = self.centre
            for v in br:
                out.append((prev, v))
                prev = v
        return out


@dataclass(frozen=True)
class Comb:
    """Spine path plus tooth paths.

    ``tooth_paths`` maps a spine vertex to the path hanging off it (excluding
    the spine vertex itself); an empty tuple marks a trivial tooth, i.e. the
    spine vertex itself is a tooth.  At most one tooth path per spine vertex.
    """

    spine: tuple[int, ...]
    tooth_paths: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self) -> None:
        if not self.spine:
            raise StrataError("empty spine")
        if len(set(self.spine)) != len(self.spine):
            raise StrataError("spine repeats a vertex")
        seen = set(self.spine)
        attach_seen = set()
        for at, path in self.tooth_paths:
            if at not in self.spine:
                raise StrataError(f"tooth path attaches off the spine at {at}")
            if at in attach_seen:
                raise StrataError(f"two tooth paths attach at {at}")
            attach_seen.add(at)
            for v in path:
                if v in seen:
                    raise StrataError("tooth paths must be disjoint from everything")
                seen.add(v)

    @property
    def teeth(self) -> frozenset[int]:
        return frozenset(path[-1] if path else at for at, path in self.tooth_paths)

    def vertices(self) -> tuple[int, ...]:
        out = set(self.spine)
        for _, path in self.tooth_paths:
            out.update(path)
        return tuple(sorted(out))

    def tree_edges(self) -> list[tuple[int, int]]:
        out = list(zip(self.spine, self.spine[1:]))
        for at, path in self.tooth_paths:
            prev = at
            for v in path:
                out.append((prev, v))
                prev = v
        return out

    def degree(self, v: int) -> int:
        cnt = 0
        for a, b in self.tree_edges():
            cnt += (a == v) + (b == v)
        return cnt

    def junctions(self) -> tuple[int, ...]:
        """Degree-3 vertices and degree-2 teeth, in ascending order."""
        teeth = self.teeth
        out = []
        for v in self.vertices():
            d = self.degree(v)
            if d == 3 or (d == 2 and v in teeth):
                out.append(v)
        return tuple(out)


@dataclass(frozen=True)
class Insufficient:
    """Best-effort fallthrough: the requested count is out of reach."""

    achieved: int
    stage: str = ""

    def __bool__(self) -> bool:
        return False


def double(g: UGraph) -> Digraph:
    """The doubled digraph: every undirected edge uv becomes (u,v) and (v,u)."""
    d = Digraph()
    for v in g.vertices():
        d.add_vertex(v)
    for u, v in g.edges():
        d.add_edge(u, v)
        d.add_edge(v, u)
    return d


def double_tree_edges(edges) -> Digraph:
    n = max((max(e) for e in edges), default=0) + 1
    return double(UGraph.from_edges(n, edges))


def bfs_spanning_tree(g: UGraph, root: int) -> dict[int, int]:
    """Deterministic BFS tree: vertex -> parent (root excluded)."""
    parent: dict[int, int] = {}
    seen = {root}
    frontier = [root]
    while frontier:
        nxt = []
        for x in sorted(frontier):
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    nxt.append(y)
        frontier = nxt
    if len(seen) != g.num_vertices():
        raise StrataError("graph is disconnected")
    return parent


def _prune_to_targets(parent: dict[int, int], root: int, targets: set[int]) -> dict[int, set[int]]:
    """Tree as child-lists with every non-target leaf branch removed."""
    children: dict[int, set[int]] = {root: set()}
    for c, p in parent.items():
        children.setdefault(p, set()).add(c)
        children.setdefault(c, set())
    fringe = [v for v in children if not children[v] and v not in targets and v != root]
    while fringe:
        v = fringe.pop()
        p = parent[v]
        children[p].discard(v)
        del children[v]
        if not children[p] and p not in targets and p != root:
            fringe.append(p)
    return children


def star_or_comb(g: UGraph, u, n: int):
    """A subdivided star or comb with at least ``n`` teeth in U, else
    Insufficient with the best achievable count.

    Deterministic textbook extraction: build a BFS spanning tree, prune it so
    every leaf is in U, then either some vertex supports >= max(n, 3) branches
    (star) or some tree path collects >= n tooth anchors (comb).  Star answers
    are only produced for n >= 3; two teeth are always served by a comb.
    """
    u = set(u)
    if not g.is_connected():
        raise StrataError("graph is disconnected")
    if not u:
        return Insufficient(0, "star-comb")
    root = min(u)
    parent = bfs_spanning_tree(g, root)
    children = _prune_to_targets(parent, root, u)

    def branch_to_u(start: int) -> list[int]:
        # walk from a child into its subtree until the first U-vertex
        path = [start]
        while path[-1] not in u:
            path.append(min(children[path[-1]]))
        return path

    # star candidate: vertex of maximal pruned degree (children + parent side)
    best_star_v, best_star_deg = None, -1
    for v in sorted(children):
        deg = len(children[v]) + (1 if v != root else 0)
        if deg > best_star_deg:
            best_star_v, best_star_deg = v, deg

    # comb candidate: tree path maximising anchors (U-vertices and deg>=3 vertices)
    def anchor(v: int) -> bool:
        return v in u or len(children[v]) >= 2

    best_down: dict[int, tuple[int, tuple[int, ...]]] = {}
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(sorted(children[v]))
    for v in reversed(order):
        score, path = 0, (v,)
        for c in sorted(children[v]):
            cs, cp = best_down[c]
            if cs > score:
                score, path = cs, (v,) + cp
        best_down[v] = (score + (1 if anchor(v) else 0), path)

    best_comb_score, best_comb_path = -1, None
    for v in sorted(children):
        # best path through v: down one child, or down two children joined at v
        tops = sorted((best_down[c] for c in children[v]), reverse=True)
        cand = [(best_down[v][0], best_down[v][1])]
        if len(tops) >= 2:
            # at the apex both path-neighbours are children, so an off-spine
            # tooth needs a third child
            apex = 1 if (v in u or len(children[v]) >= 3) else 0
            s = tops[0][0] + tops[1][0] + apex
            cand.append((s, tuple(reversed(tops[0][1])) + (v,) + tops[1][1]))
        for s, pth in cand:
            if s > best_comb_score:
                best_comb_score, best_comb_path = s, pth

    star_count = best_star_deg if best_star_v is not None else 0
    if n >= 3 and star_count >= n and star_count >= 3:
        v = best_star_v
        nbrs = sorted(children[v]) + ([parent[v]] if v != root else [])
        branches = []
        for c in nbrs[:max(n, 3)]:
            if c == (parent.get(v)):
                # walk upward until the first U-vertex, then stop
                path = [c]
                while path[-1] not in u:
                    nxt = parent.get(path[-1])
                    if nxt is None:
                        break
                    path.append(nxt)
                if path[-1] not in u:
                    continue
                # the upward walk may collide with other branches only at v's
                # ancestors, which no downward branch touches
                branches.append(tuple(path))
            else:
                branches.append(tuple(branch_to_u(c)))
        if len(branches) >= max(n, 3):
            star = SubdividedStar(v, tuple(branches))
            if len(star.teeth & u) >= n:
                return star
    if best_comb_path is not None and best_comb_score >= n:
        spine = best_comb_path
        teeth_paths = []
        spine_set = set(spine)
        for v in spine:
            if v in u:
                teeth_paths.append((v, ()))
                continue
            offs = sorted(children[v] - spine_set)
            if offs:
                teeth_paths.append((v, tuple(branch_to_u(offs[0]))))
        comb = Comb(spine, tuple(teeth_paths))
        if len(comb.teeth & u) >= n:
            return comb
    return Insufficient(max(star_count if n >= 3 else 0, max(best_comb_score, 0)), "star-comb")
