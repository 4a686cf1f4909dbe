"""The five target shapes and their recognizers.

A digraph counts as star-shaped when it is a directed cycle, a doubled
subdivided star, or a doubled subdivided star whose centre is replaced by a
directed cycle with one branch per cycle vertex.  It is comb-shaped when it
is a doubled comb, possibly with every junction replaced by a directed
3-cycle whose vertices pick up the junction's neighbours (and carry the tooth
itself for degree-2 teeth).  Certificates store the undirected template plus
the gadget maps, so they can be re-checked against the digraph edge by edge.

Canonical conventions (recognition is ambiguous without them): doubled paths,
including single vertices and 2-cycles, are reported as comb-a; directed
cycles of length >= 3 as 'cycle'; a lone 3-cycle with three doubled branches
prefers star-ii over the equivalent one-junction comb-b; and the canonical
teeth of a doubled tree are the template leaves, since trivial teeth leave no
structural mark.
"""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, StrataError
from .starcomb import Comb, SubdividedStar, UGraph


@dataclass(frozen=True)
class ShapeCertificate:
    """Machine-checkable witness that a digraph has one of the five shapes.

    Template vertices are digraph vertices except gadgeted ones (replaced
    centres/junctions), which use fresh synthetic ids.  ``gadgets`` maps a
    gadgeted template vertex to its directed cycle, in cycle order;
    ``attach[(j, u)]`` names the gadget vertex of ``j`` that carries the
    connection toward template neighbour ``u``, and ``attach[(j, j)]`` the
    gadget vertex serving as the tooth of a degree-2 tooth junction.
    """

    kind: str
    teeth: frozenset[int]
    cycle_order: tuple[int, ...] = ()
    star: SubdividedStar | None = None
    comb: Comb | None = None
    gadgets: tuple[tuple[int, tuple[int, ...]], ...] = ()
    attach: tuple[tuple[tuple[int, int], int], ...] = ()

    def gadget_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.gadgets)

    def attach_map(self) -> dict[tuple[int, int], int]:
        return dict(self.attach)


def teeth_of(cert: ShapeCertificate) -> frozenset[int]:
    """The teeth set of a certificate (all vertices, for directed cycles)."""
    return cert.teeth


def expected_edge_pairs(cert: ShapeCertificate) -> list[tuple[int, int]]:
    """The exact edge multiset the certified digraph must have."""
    out: list[tuple[int, int]] = []
    gadgets = cert.gadget_map()
    attach = cert.attach_map()

    def endpoint(u: int, towards: int) -> int:
        if u in gadgets:
            return attach[(u, towards)]
        return u

    if cert.kind == "cycle":
        cyc = cert.cycle_order
        for i, v in enumerate(cyc):
            out.append((v, cyc[(i + 1) % len(cyc)]))
        return out

    if cert.kind in ("star-i", "star-ii"):
        tree_edges = cert.star.tree_edges()
    elif cert.kind in ("comb-a", "comb-b"):
        tree_edges = cert.comb.tree_edges()
    else:
        raise StrataError(f"unknown certificate kind {cert.kind!r}")

    for u, v in tree_edges:
        a, b = endpoint(u, v), endpoint(v, u)
        out.append((a, b))
        out.append((b, a))
    for _, cyc in cert.gadgets:
        for i, v in enumerate(cyc):
            out.append((v, cyc[(i + 1) % len(cyc)]))
    return out


def verify_certificate(d: Digraph, cert: ShapeCertificate) -> bool:
    """Exact check: the digraph equals the certificate's reconstruction and
    the teeth are the template's teeth, mapped through the gadgets."""
    try:
        expected = sorted(expected_edge_pairs(cert))
    except (KeyError, StrataError, AttributeError):
        return False
    if expected != sorted(d.edge_pairs()):
        return False
    gadgets = cert.gadget_map()
    attach = cert.attach_map()
    if cert.kind == "cycle":
        verts = set(cert.cycle_order)
    else:
        tpl = cert.star.vertices() if cert.star is not None else cert.comb.vertices()
        verts = {v for v in tpl if v not in gadgets}
        verts.update(v for _, cyc in cert.gadgets for v in cyc)
    if verts != set(d.vertices()):
        return False
    for j, cyc in cert.gadgets:
        used = [a for (jj, u), a in attach.items() if jj == j and u != j]
        if len(set(used)) != len(used):
            return False  # neighbours must land on distinct gadget vertices
        if any(a not in cyc for a in used):
            return False
    if cert.kind == "cycle":
        return cert.teeth == frozenset(cert.cycle_order)
    if cert.kind in ("star-i", "star-ii"):
        want = cert.star.teeth
    else:
        want = set()
        for at, path in cert.comb.tooth_paths:
            if path:
                want.add(path[-1])
            elif at in gadgets:
                want.add(attach[(at, at)])
            else:
                want.add(at)
        want = frozenset(want)
    if cert.kind == "star-ii" and len(cert.gadgets) != 1:
        return False
    if cert.kind == "star-ii":
        (_, cyc), = cert.gadgets
        if len(cyc) != len(cert.star.branches):
            return False
    return cert.teeth == frozenset(want)


# -- builders ----------------------------------------------------------------


def build_star(kind: str, s: SubdividedStar) -> tuple[Digraph, ShapeCertificate]:
    """Realize a subdivided star as a star-shaped digraph.

    Kind 'i' doubles the star; kind 'ii' replaces the centre by a directed
    cycle with one branch per cycle vertex.
    """
    if kind not in ("i", "ii"):
        raise StrataError("star kind must be 'i' or 'ii'")
    d = Digraph()
    if kind == "i":
        for v in s.vertices():
            d.add_vertex(v)
        for u, v in s.tree_edges():
            d.add_edge(u, v)
            d.add_edge(v, u)
        cert = ShapeCertificate("star-i", s.teeth, star=s)
    else:
        if len(s.branches) <= 2:
            raise StrataError("star-ii needs centre degree > 2")
        branch_verts = sorted(set(s.vertices()) - {s.centre})
        for v in branch_verts:
            d.add_vertex(v)
        base = max(branch_verts + [s.centre]) + 1
        cyc = tuple(d.add_vertex(base + i) for i in range(len(s.branches)))
        for i, v in enumerate(cyc):
            d.add_edge(v, cyc[(i + 1) % len(cyc)])
        attach = []
        for i, br in enumerate(s.branches):
            d.add_edge(cyc[i], br[0])
            d.add_edge(br[0], cyc[i])
            attach.append(((s.centre, br[0]), cyc[i]))
            prev = br[0]
            for v in br[1:]:
                d.add_edge(prev, v)
                d.add_edge(v, prev)
                prev = v
        cert = ShapeCertificate("star-ii", s.teeth, star=s,
                                gadgets=((s.centre, cyc),), attach=tuple(attach))
    if not verify_certificate(d, cert):
        raise StrataError("built star failed its own certificate")
    return d, cert


def build_comb(kind: str, c: Comb) -> tuple[Digraph, ShapeCertificate]:
    """Realize a comb as a comb-shaped digraph.

    Kind 'a' doubles the comb.  Kind 'b' replaces every junction by a directed
    3-cycle; with no junctions it degenerates to kind 'a' and the certificate
    says so.
    """
    if kind not in ("a", "b"):
        raise StrataError("comb kind must be 'a' or 'b'")
    junctions = c.junctions() if kind == "b" else ()
    d = Digraph()
    if not junctions:
        for v in c.vertices():
            d.add_vertex(v)
        for u, v in c.tree_edges():
            d.add_edge(u, v)
            d.add_edge(v, u)
        cert = ShapeCertificate("comb-a", c.teeth, comb=c)
        if not verify_certificate(d, cert):
            raise StrataError("built comb failed its own certificate")
        return d, cert

    plain = [v for v in c.vertices() if v not in junctions]
    for v in plain:
        d.add_vertex(v)
    base = max(c.vertices()) + 1
    gadgets = {}
    for j in junctions:
        cyc = tuple(d.add_vertex(base + i) for i in range(3))
        base += 3
        for i, v in enumerate(cyc):
            d.add_edge(v, cyc[(i + 1) % 3])
        gadgets[j] = cyc

    neighbors: dict[int, list[int]] = {v: [] for v in c.vertices()}
    for u, v in c.tree_edges():
        neighbors[u].append(v)
        neighbors[v].append(u)
    attach: dict[tuple[int, int], int] = {}
    teeth = set()
    for j in junctions:
        nbrs = sorted(neighbors[j])
        cyc = gadgets[j]
        for i, nb in enumerate(nbrs):
            attach[(j, nb)] = cyc[i]
        if len(nbrs) == 2:  # degree-2 tooth junction: third vertex is the tooth
            attach[(j, j)] = cyc[2]
            teeth.add(cyc[2])

    def endpoint(u, towards):
        return attach[(u, towards)] if u in gadgets else u

    for u, v in c.tree_edges():
        a, b = endpoint(u, v), endpoint(v, u)
        d.add_edge(a, b)
        d.add_edge(b, a)
    for at, path in c.tooth_paths:
        if path:
            teeth.add(path[-1])
        elif at not in gadgets:
            teeth.add(at)
    cert = ShapeCertificate("comb-b", frozenset(teeth), comb=c,
                            gadgets=tuple(sorted(gadgets.items())),
                            attach=tuple(sorted(attach.items())))
    if not verify_certificate(d, cert):
        raise StrataError("built comb failed its own certificate")
    return d, cert


# -- recognition --------------------------------------------------------------


def _weakly_connected(d: Digraph) -> bool:
    vs = d.vertices()
    if not vs:
        return False
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        x = stack.pop()
        for y in d.successors(x) + d.predecessors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vs)


def _split_edges(d: Digraph) -> tuple[set[int], set[int]]:
    """Edge ids split into symmetric (reverse pair exists) and asymmetric."""
    sym, asym = set(), set()
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        if d.edges_between(h, t):
            sym.add(eid)
        else:
            asym.add(eid)
    return sym, asym


def _underlying(d: Digraph) -> UGraph:
    g = UGraph()
    for v in d.vertices():
        g.add_vertex(v)
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        g.add_edge(t, h)
    return g


def double_path_order(d: Digraph) -> tuple[int, ...] | None:
    """The spine order when the digraph is a doubled path, else None.

    A single vertex counts; the returned order starts at the smaller leaf.
    """
    if any(len(d.edges_between(*d.endpoints(e))) > 1 for e in d.edge_ids()):
        return None
    if d.num_vertices() == 0 or not _weakly_connected(d):
        return None
    _, asym = _split_edges(d)
    if asym:
        return None
    g = _underlying(d)
    if not g.is_tree():
        return None
    if d.num_vertices() == 1:
        return d.vertices()
    leaves = [v for v in g.vertices() if g.degree(v) == 1]
    if len(leaves) != 2 or any(g.degree(v) > 2 for v in g.vertices()):
        return None
    order = [min(leaves)]
    prev = None
    while len(order) < g.num_vertices():
        nxts = [x for x in g.neighbors(order[-1]) if x != prev]
        prev = order[-1]
        order.append(nxts[0])
    return tuple(order)


def _tree_paths_off(g: UGraph, spine: tuple[int, ...]) -> dict[int, tuple[int, ...]] | None:
    """Off-spine components as tooth paths keyed by spine vertex, or None if
    the comb conditions fail (non-path component, two per vertex, ...)."""
    spine_set = set(spine)
    seen = set(spine)
    teeth_paths: dict[int, tuple[int, ...]] = {}
    for v in spine:
        offs = [x for x in g.neighbors(v) if x not in spine_set]
        if not offs:
            continue
        if len(offs) > 1:
            return None
        path = [offs[0]]
        seen.add(offs[0])
        prev = v
        while True:
            nxt = [x for x in g.neighbors(path[-1]) if x != prev]
            if not nxt:
                break
            if len(nxt) > 1 or nxt[0] in seen:
                return None
            prev = path[-1]
            path.append(nxt[0])
            seen.add(nxt[0])
        teeth_paths[v] = tuple(path)
    if len(seen) != g.num_vertices():
        return None
    return teeth_paths


def comb_decompose(g: UGraph, marked=frozenset()) -> Comb | None:
    """Decompose a tree into the canonical comb: the spine is the minimal path
    through all degree->=3 vertices and marked teeth, extended maximally, and
    the teeth are the tree's leaves plus the marked vertices."""
    if not g.is_tree():
        return None
    required = {v for v in g.vertices() if g.degree(v) >= 3} | set(marked)
    if not required:
        # bare path: canonical spine is the whole tree
        order = double_path_order_from_tree(g)
        if order is None:
            return None
        spine = order
    else:
        # minimal subtree spanning the required set: prune non-required leaves
        deg = {v: g.degree(v) for v in g.vertices()}
        alive = set(g.vertices())
        fringe = [v for v in alive if deg[v] <= 1 and v not in required]
        while fringe:
            v = fringe.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for x in g.neighbors(v):
                if x in alive:
                    deg[x] -= 1
                    if deg[x] <= 1 and x not in required:
                        fringe.append(x)
        ends = [v for v in alive if deg[v] <= 1]
        if len(alive) == 1:
            path = [next(iter(alive))]
        else:
            if len(ends) != 2 or any(deg[v] > 2 for v in alive):
                return None
            path = [min(ends)]
            prev = None
            while len(path) < len(alive):
                nxts = [x for x in g.neighbors(path[-1]) if x in alive and x != prev]
                if len(nxts) != 1:
                    return None
                prev = path[-1]
                path.append(nxts[0])
        # extend both ends maximally, preferring the largest dangling path
        def extend(end: int, avoid: set[int]) -> list[int]:
            out = []
            cur, block = end, set(avoid)
            while True:
                offs = [x for x in g.neighbors(cur) if x not in block]
                if not offs:
                    return out
                best = None
                for x in offs:
                    ln = _dangling_length(g, cur, x)
                    if ln is None:
                        return out  # branching off-path; leave it as a tooth
                    if best is None or ln > best[0] or (ln == best[0] and x < best[1]):
                        best = (ln, x)
                block.add(cur)
                cur = best[1]
                out.append(cur)
                block.add(cur)

        left = extend(path[0], set(path))
        right = extend(path[-1], set(path) | set(left))
        spine = tuple(reversed(left)) + tuple(path) + tuple(right)
    teeth_paths = _tree_paths_off(g, spine)
    if teeth_paths is None:
        return None
    tooth_list = []
    for v in spine:
        if v in teeth_paths:
            tooth_list.append((v, teeth_paths[v]))
        elif v in marked or g.degree(v) <= 1:
            tooth_list.append((v, ()))
    try:
        return Comb(tuple(spine), tuple(sorted(tooth_list)))
    except StrataError:
        return None


def _dangling_length(g: UGraph, frm: int, start: int) -> int | None:
    """Length of the dangling path entered from ``frm`` at ``start``; None if
    it branches."""
    ln = 1
    prev, cur = frm, start
    while True:
        nxt = [x for x in g.neighbors(cur) if x != prev]
        if not nxt:
            return ln
        if len(nxt) > 1:
            return None
        prev, cur = cur, nxt[0]
        ln += 1


def double_path_order_from_tree(g: UGraph) -> tuple[int, ...] | None:
    if g.num_vertices() == 1:
        return g.vertices()
    leaves = [v for v in g.vertices() if g.degree(v) == 1]
    if len(leaves) != 2 or any(g.degree(v) > 2 for v in g.vertices()):
        return None
    order = [min(leaves)]
    prev = None
    while len(order) < g.num_vertices():
        nxts = [x for x in g.neighbors(order[-1]) if x != prev]
        prev = order[-1]
        order.append(nxts[0])
    return tuple(order)


def star_decompose(g: UGraph) -> SubdividedStar | None:
    """Recognize a tree as a subdivided star with centre degree >= 3."""
    if not g.is_tree():
        return None
    centres = [v for v in g.vertices() if g.degree(v) >= 3]
    if len(centres) != 1:
        return None
    c = centres[0]
    branches = []
    for x in sorted(g.neighbors(c)):
        path = [x]
        prev = c
        while True:
            nxt = [y for y in g.neighbors(path[-1]) if y != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev = path[-1]
            path.append(nxt[0])
        branches.append(tuple(path))
    return SubdividedStar(c, tuple(branches))


def _directed_cycle_order(d: Digraph) -> tuple[int, ...] | None:
    if d.num_vertices() < 3 or d.num_edges() != d.num_vertices():
        return None
    if any(d.out_degree(v) != 1 or d.in_degree(v) != 1 for v in d.vertices()):
        return None
    start = d.vertices()[0]
    order = [start]
    while True:
        nxt = d.successors(order[-1])[0]
        if nxt == start:
            break
        if nxt in order:
            return None
        order.append(nxt)
    return tuple(order) if len(order) == d.num_vertices() else None


def _asym_cycles(d: Digraph, asym: set[int]) -> list[tuple[int, ...]] | None:
    """Decompose the asymmetric edges into vertex-disjoint directed cycles;
    None unless every touched vertex has asym in- and out-degree exactly 1."""
    nxt: dict[int, int] = {}
    indeg: dict[int, int] = {}
    for eid in sorted(asym):
        t, h = d.endpoints(eid)
        if t in nxt:
            return None
        nxt[t] = h
        indeg[h] = indeg.get(h, 0) + 1
    if set(indeg) != set(nxt) or any(c != 1 for c in indeg.values()):
        return None
    cycles = []
    left = set(nxt)
    while left:
        start = min(left)
        cyc = [start]
        left.discard(start)
        while nxt[cyc[-1]] != start:
            cyc.append(nxt[cyc[-1]])
            if cyc[-1] not in left:
                return None
            left.discard(cyc[-1])
        cycles.append(tuple(cyc))
    return cycles


def _sym_partners(d: Digraph, v: int) -> tuple[int, ...]:
    return tuple(sorted(x for x in d.successors(v) if d.edges_between(x, v)))


def _try_star_ii(d: Digraph, cycles: list[tuple[int, ...]]) -> ShapeCertificate | None:
    if len(cycles) != 1 or len(cycles[0]) < 3:
        return None
    cyc = cycles[0]
    zset = set(cyc)
    attach: dict[tuple[int, int], int] = {}
    starts = {}
    for z in cyc:
        partners = _sym_partners(d, z)
        if len(partners) != 1 or partners[0] in zset:
            return None
        starts[z] = partners[0]
    if len(set(starts.values())) != len(cyc):
        return None
    branches = []
    centre = -1
    for z in sorted(starts):
        x = starts[z]
        path = [x]
        prev = z
        while True:
            nxt = [y for y in _sym_partners(d, path[-1]) if y != prev]
            nxt = [y for y in nxt if y not in zset]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev = path[-1]
            path.append(nxt[0])
        branches.append(tuple(path))
        attach[(centre, x)] = z
    covered = zset | {v for br in branches for v in br}
    if covered != set(d.vertices()):
        return None
    try:
        star = SubdividedStar(centre, tuple(branches))
    except StrataError:
        return None
    # gadget cycle rotated to start at its smallest vertex, for determinism
    i = cyc.index(min(cyc))
    cyc = cyc[i:] + cyc[:i]
    cert = ShapeCertificate("star-ii", star.teeth, star=star,
                            gadgets=((centre, cyc),), attach=tuple(sorted(attach.items())))
    return cert if verify_certificate(d, cert) else None


def _try_comb_b(d: Digraph, cycles: list[tuple[int, ...]]) -> ShapeCertificate | None:
    if any(len(c) != 3 for c in cycles):
        return None
    gadget_of: dict[int, int] = {}
    jid = {}
    for k, cyc in enumerate(sorted(cycles, key=min)):
        j = -(k + 1)
        jid[j] = cyc
        for v in cyc:
            if v in gadget_of:
                return None
            gadget_of[v] = j

    # template graph: plain vertices plus synthetic junction vertices
    t = UGraph()
    attach: dict[tuple[int, int], int] = {}
    for v in d.vertices():
        if v not in gadget_of:
            t.add_vertex(v)
    for j in jid:
        t.add_vertex(j)
    seen_pairs = set()
    for eid in d.edge_ids():
        a, b = d.endpoints(eid)
        if not d.edges_between(b, a):
            continue  # gadget cycle edge
        key = (min(a, b), max(a, b))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        ja, jb = gadget_of.get(a), gadget_of.get(b)
        ta = ja if ja is not None else a
        tb = jb if jb is not None else b
        if ta == tb or tb in t.adj.get(ta, set()):
            return None  # intra-gadget 2-cycle or doubled template edge
        t.add_edge(ta, tb)
        if ja is not None:
            attach[(ta, tb)] = a
        if jb is not None:
            attach[(tb, ta)] = b

    marked = set()
    for j, cyc in jid.items():
        used = sorted({attach[(j, u)] for u in t.neighbors(j)}) if t.degree(j) else []
        if len(used) != t.degree(j):
            return None
        if t.degree(j) == 3:
            continue
        if t.degree(j) == 2:
            free = [v for v in cyc if v not in used]
            if len(free) != 1:
                return None
            if _sym_partners(d, free[0]):
                return None
            attach[(j, j)] = free[0]
            marked.add(j)
        else:
            return None
    if any(t.degree(v) >= 3 for v in t.vertices() if v not in jid):
        return None
    comb = comb_decompose(t, marked=frozenset(marked))
    if comb is None:
        return None
    if not set(jid) <= set(comb.spine) | {v for _, p in comb.tooth_paths for v in p}:
        return None
    # every junction of the reconstructed comb must be gadgeted
    if set(comb.junctions()) != set(jid):
        return None
    teeth = set()
    for at, path in comb.tooth_paths:
        if path:
            teeth.add(path[-1])
        elif at in jid:
            teeth.add(attach[(at, at)])
        else:
            teeth.add(at)
    gadgets = tuple(sorted(jid.items()))
    # rotate each gadget cycle to its smallest vertex
    gadgets = tuple((j, c[c.index(min(c)):] + c[: c.index(min(c))]) for j, c in gadgets)
    cert = ShapeCertificate("comb-b", frozenset(teeth), comb=comb,
                            gadgets=gadgets, attach=tuple(sorted(attach.items())))
    return cert if verify_certificate(d, cert) else None


def recognize(d: Digraph) -> ShapeCertificate | None:
    """The canonical certificate when the digraph is a directed cycle or
    shaped by a star or comb; None otherwise."""
    if d.num_vertices() == 0:
        return None
    if any(len(d.edges_between(*d.endpoints(e))) > 1 for e in d.edge_ids()):
        return None
    if not _weakly_connected(d):
        return None
    sym, asym = _split_edges(d)

    if not asym:
        g = _underlying(d)
        if not g.is_tree():
            return None
        star = star_decompose(g)
        if star is not None:
            cert = ShapeCertificate("star-i", star.teeth, star=star)
            return cert if verify_certificate(d, cert) else None
        comb = comb_decompose(g)
        if comb is None:
            return None
        cert = ShapeCertificate("comb-a", comb.teeth, comb=comb)
        return cert if verify_certificate(d, cert) else None

    if not sym:
        order = _directed_cycle_order(d)
        if order is None:
            return None
        i = order.index(min(order))
        order = order[i:] + order[:i]
        return ShapeCertificate("cycle", frozenset(order), cycle_order=order)

    cycles = _asym_cycles(d, asym)
    if cycles is None:
        return None
    cert = _try_star_ii(d, cycles)
    if cert is not None:
        return cert
    return _try_comb_b(d, cycles)
