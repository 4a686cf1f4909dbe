import random

import pytest

from strata.butterfly import check_minor_reachability, verify_trace
from strata.digraph import Digraph, DiPath, StrataError, shortest_path
from strata.families import random_sc_digraph
from strata.laced import (
    LacedWitness,
    check_laced,
    cycle_chain_of,
    double_path_of,
    lace,
    union_subgraph,
)


def build(n, pairs):
    return Digraph.from_edges(n, pairs)


def path_of(d, *verts):
    return DiPath.from_vertices(d, verts)


def test_disjoint_paths_are_laced_with_empty_witness():
    d = build(4, [(0, 1), (2, 3)])
    w = check_laced(path_of(d, 0, 1), path_of(d, 2, 3))
    assert w is not None and len(w) == 0


def test_two_cycle_paths_laced():
    d = build(2, [(0, 1), (1, 0)])
    w = check_laced(path_of(d, 0, 1), path_of(d, 1, 0))
    assert w is not None and w.pairs == ((0, 0), (1, 1))


def test_scrambled_return_path_not_laced():
    # P = 1>2>3>4, Q = 4>5>2>6>3>7>1 (0-indexed: 0..6 with 5,6,7 -> 4,5,6)
    d = build(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 2), (2, 6), (6, 0)])
    p = path_of(d, 0, 1, 2, 3)
    q = path_of(d, 3, 4, 1, 5, 2, 6, 0)
    assert check_laced(p, q) is None


def test_trivial_q_on_p_is_laced():
    d = build(3, [(0, 1), (1, 2)])
    p = path_of(d, 0, 1, 2)
    q = DiPath.trivial(d, 1)
    w = check_laced(p, q)
    assert w is not None and w.pairs == ((1, 1),)


def test_witness_validate_rejects_wrong_pairs():
    d = build(2, [(0, 1), (1, 0)])
    p, q = path_of(d, 0, 1), path_of(d, 1, 0)
    assert not LacedWitness(((1, 1), (0, 0))).validate(p, q)


def test_lace_disjoint_unchanged():
    d = build(4, [(0, 1), (2, 3)])
    p, q = path_of(d, 0, 1), path_of(d, 2, 3)
    assert lace(p, q) == q


def test_lace_already_laced_unchanged():
    # P = 1>2>3>4, Q = 4>2>5>1 (0-indexed: 0..3, 5 -> 4)
    d = build(5, [(0, 1), (1, 2), (2, 3), (3, 1), (1, 4), (4, 0)])
    p = path_of(d, 0, 1, 2, 3)
    q = path_of(d, 3, 1, 4, 0)
    w = check_laced(p, q)
    assert w is not None and len(w) == 3
    assert lace(p, q) == q


def test_lace_splices_shared_segment():
    # P = 1>2>3>4, Q = 4>5>2>6>3>7>1 must become 4>5>2>3>7>1
    d = build(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 2), (2, 6), (6, 0)])
    p = path_of(d, 0, 1, 2, 3)
    q = path_of(d, 3, 4, 1, 5, 2, 6, 0)
    out = lace(p, q)
    assert out.vertices == (3, 4, 1, 2, 6, 0)
    assert check_laced(p, out) is not None
    assert len(set(out.edges) - set(p.edges)) < len(set(q.edges) - set(p.edges))


def test_lace_idempotent_and_properties_random():
    rng = random.Random(41)
    for _ in range(80):
        d = random_sc_digraph(rng.randint(2, 10), seed=rng.randint(0, 10**6))
        vs = d.vertices()
        a, b = rng.choice(vs), rng.choice(vs)
        q0 = shortest_path(d, [a], [b])
        if q0 is None:
            continue
        # some other random path as P
        c, e = rng.choice(vs), rng.choice(vs)
        p = shortest_path(d, [c], [e])
        if p is None:
            continue
        out = lace(p, q0)
        assert out.startvertex == a and out.endvertex == b
        assert set(out.edges) <= set(p.edges) | set(q0.edges)
        assert len(set(out.edges) - set(p.edges)) <= len(set(q0.edges) - set(p.edges))
        assert check_laced(p, out) is not None
        assert lace(p, out) == out


def test_double_path_of_two_cycle():
    d = build(2, [(0, 1), (1, 0)])
    p, q = path_of(d, 0, 1), path_of(d, 1, 0)
    g, trace = double_path_of(p, q, check_laced(p, q))
    assert g.vertices() == (0, 1) and g.num_edges() == 2
    assert verify_trace(union_subgraph(p, q), trace, g)


def test_double_path_of_documented_example():
    # P = 1>2>3>4, Q = 4>2>5>1; expect a 3-vertex double path on {1, 2, 3 or 4}
    d = build(5, [(0, 1), (1, 2), (2, 3), (3, 1), (1, 4), (4, 0)])
    p = path_of(d, 0, 1, 2, 3)
    q = path_of(d, 3, 1, 4, 0)
    g, trace = double_path_of(p, q, check_laced(p, q))
    host = union_subgraph(p, q)
    assert verify_trace(host, trace, g)
    assert check_minor_reachability(host, g)
    assert g.num_vertices() == 3 and g.num_edges() == 4
    assert set(g.vertices()) <= set(p.vertices)
    # consecutive representatives are joined by 2-cycles
    order = sorted(g.vertices(), key=p.index_of)
    for u, v in zip(order, order[1:]):
        assert g.edges_between(u, v) and g.edges_between(v, u)


def out_and_back_pair(d, rng):
    vs = d.vertices()
    a = rng.choice(vs)
    b = rng.choice([v for v in vs if v != a])
    p0 = shortest_path(d, [a], [b])
    if p0 is None:
        return None
    q0 = shortest_path(d, [b], [a])
    if q0 is None:
        return None
    q = lace(p0, q0)
    return p0, q


def test_double_path_of_random_pairs():
    rng = random.Random(4242)
    done = 0
    while done < 60:
        d = random_sc_digraph(rng.randint(2, 10), seed=rng.randint(0, 10**6))
        pair = out_and_back_pair(d, rng)
        if pair is None:
            continue
        p, q = pair
        w = check_laced(p, q)
        assert w is not None
        g, trace = double_path_of(p, q, w)
        host = union_subgraph(p, q)
        assert verify_trace(host, trace, g)
        assert check_minor_reachability(host, g)
        k = g.num_vertices()
        assert g.num_edges() == 2 * (k - 1)
        assert set(g.vertices()) <= set(p.vertices)
        order = sorted(g.vertices(), key=p.index_of)
        assert order[0] == p.startvertex and order[-1] == p.endvertex
        for u, v in zip(order, order[1:]):
            assert g.edges_between(u, v) and g.edges_between(v, u)
        done += 1


def test_cycle_chain_of_two_cycle():
    d = build(2, [(0, 1), (1, 0)])
    p, q = path_of(d, 0, 1), path_of(d, 1, 0)
    chain = cycle_chain_of(p, q, check_laced(p, q))
    assert len(chain) == 1 and chain[0].vertex_set() == {0, 1}


def test_cycle_chain_of_example_two_cycles():
    # P = 1>2>3>4 with Q = 4>2>5>1: blocks {1},{2},{3? no} -> pairs ((0,0),(1,1),(3,3))
    d = build(5, [(0, 1), (1, 2), (2, 3), (3, 1), (1, 4), (4, 0)])
    p = path_of(d, 0, 1, 2, 3)
    q = path_of(d, 3, 1, 4, 0)
    chain = cycle_chain_of(p, q, check_laced(p, q))
    assert len(chain) == 2
    assert chain.edge_set() == p.edge_set() | q.edge_set()
    assert chain.vertex_set() == p.vertex_set() | q.vertex_set()


def test_cycle_chain_of_random_pairs():
    rng = random.Random(77)
    done = 0
    while done < 60:
        d = random_sc_digraph(rng.randint(2, 10), seed=rng.randint(0, 10**6))
        pair = out_and_back_pair(d, rng)
        if pair is None:
            continue
        p, q = pair
        chain = cycle_chain_of(p, q, check_laced(p, q))
        chain.validate()
        assert chain.edge_set() == p.edge_set() | q.edge_set()
        assert chain.vertex_set() == p.vertex_set() | q.vertex_set()
        done += 1


def test_cycle_chain_rejects_trivial_pair():
    d = build(1, [])
    p = DiPath.trivial(d, 0)
    with pytest.raises(StrataError):
        cycle_chain_of(p, p, check_laced(p, p))
