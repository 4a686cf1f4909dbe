import random

from strata.butterfly import check_minor_reachability, verify_trace
from strata.centre import (
    Insufficient,
    MainStructure,
    centre_minor,
    critical_tooth,
    edge_minimal_for_u,
    main_structure,
)
from strata.digraph import (
    Digraph,
    is_strongly_connected,
    reaches,
)
from strata.families import (
    chain_with_pendant_lobes,
    directed_cycle,
    doubled_tree,
    random_sc_digraph,
    star_tree_edges,
)


def dk1n(n):
    return doubled_tree(star_tree_edges(n))


def minimality_oracle(d, u):
    """Every remaining edge deletion must break some ordered U-pair."""
    from strata.centre import _u_pairs_mutually_reachable

    assert _u_pairs_mutually_reachable(d, u)
    for eid in d.edge_ids():
        assert not _u_pairs_mutually_reachable(d, u, skip_edge=eid), eid


def test_edge_minimal_doubled_triangle():
    d = doubled_tree([(0, 1), (1, 2), (0, 2)])  # D(C3), 6 edges
    out = edge_minimal_for_u(d, {0, 1, 2})
    minimality_oracle(out, {0, 1, 2})


def test_edge_minimal_cycle_unchanged():
    d = directed_cycle(5)
    out = edge_minimal_for_u(d, set(range(5)))
    assert out.signature() == d.signature()


def test_edge_minimal_random_instances():
    rng = random.Random(31)
    for _ in range(40):
        d = random_sc_digraph(rng.randint(2, 12), seed=rng.randint(0, 10**6))
        vs = d.vertices()
        u = set(rng.sample(vs, rng.randint(2, len(vs))))
        out = edge_minimal_for_u(d, u)
        minimality_oracle(out, u)
        assert out.signature() == edge_minimal_for_u(d, u).signature()  # deterministic


def test_critical_tooth_star():
    # star-like minimal graph: centre 0, branch entry edges are unique access
    d = dk1n(3)
    dmin = edge_minimal_for_u(d, {1, 2, 3})
    for eid in dmin.edge_ids():
        t, h = dmin.endpoints(eid)
        if t == 0:
            v = critical_tooth(dmin, {1, 2, 3}, {0}, eid)
            assert v == h  # the branch's own leaf


def test_critical_tooth_pendant_two_cycle():
    # triangle 0->1->2->0 with pendant 2-cycle at 0 to u=3
    d = Digraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)])
    u = {1, 3}
    dmin = edge_minimal_for_u(d, u)
    entry = [e for e in dmin.edge_ids() if dmin.endpoints(e) == (0, 3)]
    assert entry
    assert critical_tooth(dmin, u, {0, 1, 2}, entry[0]) == 3


def test_critical_tooth_random_verified_unreachable():
    # single vertices are strongly connected subgraphs, so every out-edge of
    # any vertex of an edge-minimal graph must cut off some U-vertex
    rng = random.Random(17)
    checked = 0
    while checked < 60:
        d = random_sc_digraph(rng.randint(3, 10), seed=rng.randint(0, 10**6))
        vs = d.vertices()
        u = set(rng.sample(vs, rng.randint(2, len(vs))))
        dmin = edge_minimal_for_u(d, u)
        x = rng.choice(dmin.vertices())
        for eid in dmin.out_edges(x):
            v = critical_tooth(dmin, u, {x}, eid)
            g2 = dmin.copy()
            g2.delete_edge(eid)
            assert not reaches(g2, x, v)
            checked += 1


def test_main_structure_star_kind_a():
    d = dk1n(4)
    ms = main_structure(d, {1, 2, 3, 4}, 4)
    assert isinstance(ms, MainStructure) and ms.kind == "a"
    assert ms.a_vertex == 0 and len(ms.paths) == 4
    ms.validate()


def test_main_structure_cycle_kind_b():
    d = directed_cycle(6)
    ms = main_structure(d, set(range(6)), 6)
    assert isinstance(ms, MainStructure) and ms.kind == "b"
    assert all(p.is_trivial() for p in ms.paths)
    ms.validate()


def test_main_structure_lobed_chain_kind_c():
    d, u = chain_with_pendant_lobes(7, seed=5)
    assert is_strongly_connected(d)
    ms = main_structure(d, u, len(u))
    assert isinstance(ms, MainStructure)
    ms.validate()
    assert ms.kind in ("b", "c")
    if ms.kind == "c":
        assert len(ms.paths) >= len(u) - 1


def test_centre_minor_cycle_kind_i():
    d = directed_cycle(6)
    res = centre_minor(d, set(range(6)), 6)
    assert not isinstance(res, Insufficient)
    cs, trace = res
    assert cs.kind == "i" and len(cs.u_sel) == 6
    assert verify_trace(d, trace, cs.graph)


def test_centre_minor_doubled_star_kind_ii_a():
    d = dk1n(4)
    res = centre_minor(d, {1, 2, 3, 4}, 4)
    assert not isinstance(res, Insufficient)
    cs, trace = res
    assert cs.kind == "ii-a"
    assert cs.a_vertex == 0
    assert sorted(att.tooth for att in cs.attachments) == [1, 2, 3, 4]
    assert verify_trace(d, trace, cs.graph)
    assert check_minor_reachability(d, cs.graph)
    cs.validate()


def cycle_with_lobes(n_lobes, lobe_len=2, spacing=3):
    """Directed cycle with doubled pendant paths attached ``spacing`` apart."""
    size = n_lobes * spacing
    d = Digraph.from_edges(size, [(i, (i + 1) % size) for i in range(size)])
    u = []
    for k in range(n_lobes):
        at = k * spacing
        prev = at
        for _ in range(lobe_len):
            v = d.add_vertex()
            d.add_edge(prev, v)
            d.add_edge(v, prev)
            prev = v
        u.append(prev)
    return d, set(u)


def test_centre_minor_cycle_with_lobes_kind_ii_b():
    # five lobes: the anchor path enters through the first lobe and leaves
    # through the last, so the three interior lobes anchor on one chain cycle
    d, u = cycle_with_lobes(5)
    res = centre_minor(d, u, 3)
    assert not isinstance(res, Insufficient)
    cs, trace = res
    assert cs.kind == "ii-b"
    a_list = [att.a for att in cs.attachments]
    assert len(set(a_list)) == len(a_list) == 3
    assert {att.tooth for att in cs.attachments} <= u
    assert verify_trace(d, trace, cs.graph)
    assert check_minor_reachability(d, cs.graph)
    cs.validate()


def test_centre_minor_chain_with_lobes():
    d, u = chain_with_pendant_lobes(7, seed=5)
    res = centre_minor(d, u, 2)
    assert not isinstance(res, Insufficient)
    cs, trace = res
    assert verify_trace(d, trace, cs.graph)
    cs.validate()
    assert cs.teeth_count() >= 2


def test_centre_minor_insufficient_reports_count():
    d = doubled_tree([(0, 1)])
    res = centre_minor(d, {0, 1}, 5)
    assert isinstance(res, Insufficient)
    assert res.achieved <= 2


def test_centre_minor_random_smoke():
    rng = random.Random(101)
    produced = 0
    for _ in range(40):
        d = random_sc_digraph(rng.randint(3, 10), seed=rng.randint(0, 10**6))
        vs = d.vertices()
        u = set(rng.sample(vs, rng.randint(2, min(4, len(vs)))))
        res = centre_minor(d, u, 2)
        if isinstance(res, Insufficient):
            continue
        cs, trace = res
        cs.validate()
        assert verify_trace(d, trace, cs.graph)
        assert check_minor_reachability(d, cs.graph)
        produced += 1
    assert produced >= 10
