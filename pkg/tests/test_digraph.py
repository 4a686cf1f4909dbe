import random

import pytest

from strata.digraph import (
    DiCycle,
    Digraph,
    DiPath,
    StrataError,
    UnknownIdError,
    common_subpath,
    dfs_out_arborescence,
    is_strongly_connected,
    path_concat,
    path_segment,
    reachability_closure,
    reaches,
    strong_components,
)
from strata.families import random_sc_digraph


def triangle():
    return Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


def doubled_path3():
    # D(P3) on a-b-c = 0-1-2
    return Digraph.from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 1)])


def test_reaches_on_cycle():
    d = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert reaches(d, 0, 2)
    assert reaches(d, 2, 1)
    assert reaches(d, 1, 1)


def test_reaches_single_edge():
    d = Digraph.from_edges(2, [(0, 1)])
    assert reaches(d, 0, 1)
    assert not reaches(d, 1, 0)


def test_reaches_doubled_path():
    d = doubled_path3()
    assert reaches(d, 0, 2)
    assert reaches(d, 2, 0)


def test_reaches_unknown_vertex():
    d = triangle()
    with pytest.raises(UnknownIdError):
        reaches(d, 0, 99)


def test_scc_triangle():
    assert strong_components(triangle()) == [frozenset({0, 1, 2})]


def test_scc_single_edge():
    d = Digraph.from_edges(2, [(0, 1)])
    assert strong_components(d) == [frozenset({0}), frozenset({1})]


def test_scc_two_triangles_joined():
    d = Digraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    comps = strong_components(d)
    assert comps == [frozenset({0, 1, 2}), frozenset({3, 4, 5})]
    # independent oracle: pairwise mutual reachability classes
    for comp in comps:
        for v in comp:
            for w in comp:
                assert reaches(d, v, w)
    assert not reaches(d, 3, 0)


def test_scc_agrees_with_mutual_reaches_on_random_graphs():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 10)
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.25]
        d = Digraph.from_edges(n, pairs)
        comps = strong_components(d)
        assert sorted(v for c in comps for v in c) == list(range(n))
        by_vertex = {}
        for c in comps:
            for v in c:
                by_vertex[v] = c
        for v in range(n):
            for w in range(n):
                same = reaches(d, v, w) and reaches(d, w, v)
                assert same == (by_vertex[v] is by_vertex[w])


def test_reaches_matches_closure_and_is_preorder():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 10)
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.3]
        d = Digraph.from_edges(n, pairs)
        clo = reachability_closure(d)
        for v in range(n):
            assert v in clo[v]  # reflexive
            for w in range(n):
                assert reaches(d, v, w) == (w in clo[v])
                if w in clo[v]:
                    assert clo[w] <= clo[v]  # transitive


def test_dfs_arborescence_on_cycle():
    d = Digraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    t = dfs_out_arborescence(d, 0, targets={0, 1, 2, 3})
    t.validate()
    assert t.vertices() == (0, 1, 2, 3)
    assert t.leaves() == (3,)
    assert t.path_from_root(3) == (0, 1, 2, 3)


def test_dfs_arborescence_star():
    # D(K_{1,3}) with centre 0
    d = Digraph.from_edges(4, [(0, 1), (1, 0), (0, 2), (2, 0), (0, 3), (3, 0)])
    t = dfs_out_arborescence(d, 0, targets={1, 2, 3})
    t.validate()
    assert set(t.leaves()) == {1, 2, 3}
    assert t.children(0) == (1, 2, 3)


def test_dfs_arborescence_prunes_and_contains_targets():
    rng = random.Random(23)
    for _ in range(30):
        d = random_sc_digraph(rng.randint(2, 12), seed=rng.randint(0, 10**6))
        vs = d.vertices()
        u = set(rng.sample(vs, rng.randint(1, len(vs))))
        t = dfs_out_arborescence(d, vs[0], targets=u)
        t.validate()
        assert u <= set(t.vertices())
        assert set(t.leaves()) <= u | {vs[0]}


def test_dfs_arborescence_unreachable_target():
    d = Digraph.from_edges(2, [(0, 1)])
    with pytest.raises(StrataError, match="unreachable"):
        dfs_out_arborescence(d, 1, targets={0})


def path_1234():
    d = Digraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    return DiPath(d, (0, 1, 2, 3), (0, 1, 2))


def test_path_segment():
    p = path_1234()
    s = path_segment(p, 1, 3)
    assert s.vertices == (1, 2, 3)
    assert s.edges == (1, 2)


def test_path_segment_identity():
    p = path_1234()
    s = path_segment(p, 2, 2)
    assert s.is_trivial() and s.vertices == (2,)


def test_path_concat():
    d = Digraph.from_edges(6, [(0, 1), (1, 2), (1, 4), (4, 5)])
    p = DiPath(d, (0, 1, 2), (0, 1))
    q = DiPath(d, (1, 4, 5), (2, 3))
    r = path_concat(p, 1, q)
    assert r.vertices == (0, 1, 4, 5)


def test_path_segment_errors():
    p = path_1234()
    with pytest.raises(StrataError):
        path_segment(p, 3, 1)
    with pytest.raises(StrataError):
        path_segment(p, 0, 9)


def test_path_concat_repeat_vertex_rejected():
    d = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    p = DiPath(d, (0, 1), (0,))
    q = DiPath(d, (1, 2, 0), (1, 2))
    with pytest.raises(StrataError, match="repeats"):
        path_concat(p, 1, q)


def test_cycle_segment_and_common_subpath():
    d = Digraph.from_edges(5, [(0, 1), (1, 2), (2, 0), (1, 2), (2, 3), (3, 1)])
    c1 = DiCycle(d, (0, 1, 2), (0, 1, 2))
    c2 = DiCycle(d, (1, 2, 3), (1, 4, 5))
    assert c1.segment(1, 0).vertices == (1, 2, 0)
    inter = common_subpath(c1, c2)
    assert inter is not None and inter.vertices == (1, 2)


def test_common_subpath_disjoint_cycles():
    d = Digraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    c1 = DiCycle(d, (0, 1), (0, 1))
    c2 = DiCycle(d, (2, 3), (2, 3))
    assert common_subpath(c1, c2) is None


def test_random_sc_generator_is_strongly_connected_and_deterministic():
    d1 = random_sc_digraph(10, seed=7)
    d2 = random_sc_digraph(10, seed=7)
    assert is_strongly_connected(d1)
    assert d1.signature() == d2.signature()
