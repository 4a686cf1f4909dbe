"""Butterfly contraction with the vertex-identification rule, and minor
traces: replayable certificates that one digraph is a butterfly minor of
another.

An edge (u,v) is butterfly contractible when it is the only out-edge of u or
the only in-edge of v.  Contracting merges the endpoints into a single vertex
that keeps the id of its representative: the tail when the edge was the only
in-edge of the head, the head when it was the only out-edge of the tail.  When
both conditions hold either endpoint may be kept and the choice is recorded.
Loops created by a contraction are deleted immediately; parallel edges are
kept, since later contractibility tests count them.
"""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, StrataError, UnknownIdError, reachability_closure


class NotContractibleError(StrataError):
    pass


class TraceReplayError(StrataError):
    def __init__(self, step_index: int, message: str):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index


@dataclass(frozen=True)
class ContractionStep:
    """One trace step: kind is 'DV' (delete vertex), 'DE' (delete edge) or
    'CE' (contract edge, keeping vertex ``rep``)."""

    kind: str
    ident: int
    rep: int | None = None

    def __str__(self) -> str:
        if self.kind == "CE":
            return f"CE {self.ident} {self.rep}"
        return f"{self.kind} {self.ident}"


@dataclass(frozen=True)
class MinorTrace:
    """An ordered, replayable list of deletions and butterfly contractions.

    ``rep`` maps every vertex of the resulting minor to the host vertex it is
    identified with; representatives keep their host id, so the map is the
    identity embedding recorded explicitly.
    """

    host_sig: tuple
    result_sig: tuple
    steps: tuple[ContractionStep, ...]
    rep: dict[int, int]

    def serialize(self) -> str:
        return "".join(f"{s}\n" for s in self.steps)

    @classmethod
    def deserialize(cls, text: str, host: Digraph) -> "MinorTrace":
        steps = []
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "DV" and len(parts) == 2:
                    steps.append(ContractionStep("DV", int(parts[1])))
                elif parts[0] == "DE" and len(parts) == 2:
                    steps.append(ContractionStep("DE", int(parts[1])))
                elif parts[0] == "CE" and len(parts) == 3:
                    steps.append(ContractionStep("CE", int(parts[1]), int(parts[2])))
                else:
                    raise ValueError
            except ValueError:
                raise StrataError(f"line {ln}: malformed trace step {line!r}") from None
        result = apply_trace(host, _unchecked_trace(host, steps))
        return cls(host.signature(), result.signature(), tuple(steps),
                   {v: v for v in result.vertices()})


def _unchecked_trace(host: Digraph, steps) -> MinorTrace:
    return MinorTrace(host.signature(), (), tuple(steps), {})


def is_butterfly_contractible(d: Digraph, eid: int) -> bool:
    """True iff the edge is the only out-edge of its tail or the only in-edge
    of its head (parallel edges count)."""
    t, h = d.endpoints(eid)
    return d.out_degree(t) == 1 or d.in_degree(h) == 1


def eligible_reps(d: Digraph, eid: int) -> tuple[int, ...]:
    """Vertices the contracted vertex may be identified with, per the rule."""
    t, h = d.endpoints(eid)
    reps = []
    if d.in_degree(h) == 1:
        reps.append(t)  # e is the only in-edge of the head: identify with tail
    if d.out_degree(t) == 1:
        reps.append(h)  # e is the only out-edge of the tail: identify with head
    return tuple(reps)


def default_rep(d: Digraph, eid: int, u_pref=frozenset()) -> int:
    """The deterministic representative choice.

    When both endpoints are eligible, a vertex of ``u_pref`` wins if exactly
    one endpoint is in it; otherwise the head is kept.
    """
    reps = eligible_reps(d, eid)
    if not reps:
        raise NotContractibleError(f"edge {eid} is not butterfly contractible")
    if len(reps) == 2:
        in_pref = [r for r in reps if r in u_pref]
        if len(in_pref) == 1:
            return in_pref[0]
        t, h = d.endpoints(eid)
        return h
    return reps[0]


def contract_edge_inplace(d: Digraph, eid: int, rep: int) -> None:
    """Contract ``eid`` in place, keeping the vertex ``rep``.

    The other endpoint's edges are re-attached to ``rep`` under their original
    edge ids; loops that appear are deleted.
    """
    if rep not in eligible_reps(d, eid):
        raise NotContractibleError(
            f"vertex {rep} is not an eligible representative for edge {eid}")
    t, h = d.endpoints(eid)
    other = h if rep == t else t
    d.delete_edge(eid)
    for oid in sorted(set(d.out_edges(other)) | set(d.in_edges(other))):
        ot, oh = d.endpoints(oid)
        nt = rep if ot == other else ot
        nh = rep if oh == other else oh
        d.delete_edge(oid)
        if nt != nh:
            d.add_edge(nt, nh, oid)
    d.delete_vertex(other)


def contract(d: Digraph, eid: int, preferred_rep: int | None = None,
             u_pref=frozenset()) -> tuple[Digraph, int]:
    """Butterfly contract one edge; returns the new graph and the kept vertex."""
    g = d.copy()
    if preferred_rep is not None:
        if preferred_rep not in eligible_reps(g, eid):
            raise NotContractibleError(
                f"preference {preferred_rep} ineligible for edge {eid}")
        rep = preferred_rep
    else:
        rep = default_rep(g, eid, u_pref)
    contract_edge_inplace(g, eid, rep)
    return g, rep


class TraceBuilder:
    """Mutable working copy of a host graph that records every deletion and
    contraction, producing a verified MinorTrace."""

    def __init__(self, host: Digraph):
        self.host_sig = host.signature()
        self.graph = host.copy()
        self.steps: list[ContractionStep] = []

    def delete_edge(self, eid: int) -> None:
        self.graph.delete_edge(eid)
        self.steps.append(ContractionStep("DE", eid))

    def delete_vertex(self, vid: int) -> None:
        # replay deletes incident edges implicitly, so a bare DV suffices
        self.graph.delete_vertex(vid)
        self.steps.append(ContractionStep("DV", vid))

    def contract(self, eid: int, rep: int | None = None, u_pref=frozenset()) -> int:
        if rep is None:
            rep = default_rep(self.graph, eid, u_pref)
        contract_edge_inplace(self.graph, eid, rep)
        self.steps.append(ContractionStep("CE", eid, rep))
        return rep

    def contract_path_into_root(self, verts: list[int]) -> None:
        """Contract the directed path v_1 -> ... -> v_k into its last vertex.

        Requires out-degree one at every non-root path vertex (the
        in-arborescence condition specialised to a path).
        """
        for v in reversed(verts[:-1]):
            (eid,) = self.graph.out_edges(v)
            self.contract(eid, rep=self.graph.head(eid))

    def contract_path_from_root(self, verts: list[int]) -> None:
        """Contract the directed path v_1 -> ... -> v_k into its first vertex;
        requires in-degree one at every non-root vertex."""
        for v in verts[1:]:
            (eid,) = self.graph.in_edges(v)
            self.contract(eid, rep=self.graph.tail(eid))

    def keep_only(self, verts) -> None:
        keep = set(verts)
        for v in self.graph.vertices():
            if v not in keep:
                self.delete_vertex(v)

    def keep_only_edges(self, eids) -> None:
        keep = set(eids)
        for e in self.graph.edge_ids():
            if e not in keep:
                self.delete_edge(e)

    def finish(self) -> tuple[Digraph, MinorTrace]:
        result = self.graph.copy()
        trace = MinorTrace(self.host_sig, result.signature(), tuple(self.steps),
                           {v: v for v in result.vertices()})
        return result, trace


def contract_arborescence(d: Digraph, arb) -> tuple[Digraph, MinorTrace]:
    """Butterfly contract a whole arborescence to its root.

    For an in-arborescence every non-root vertex must have out-degree one in
    ``d``; for an out-arborescence, in-degree one.  The merged vertex keeps
    the root's id.
    """
    arb.validate()
    for v in arb.vertices():
        if v == arb.root:
            continue
        if arb.orientation == "in" and d.out_degree(v) != 1:
            raise NotContractibleError(
                f"vertex {v} has out-degree {d.out_degree(v)} != 1")
        if arb.orientation == "out" and d.in_degree(v) != 1:
            raise NotContractibleError(
                f"vertex {v} has in-degree {d.in_degree(v)} != 1")
    tb = TraceBuilder(d)
    emit_arborescence_contraction(tb, arb)
    return tb.finish()


def emit_arborescence_contraction(tb: TraceBuilder, arb) -> None:
    """Record the leaf-first contraction of an arborescence into ``tb``."""
    remaining = dict(arb.parent)
    while remaining:
        parents = {p for p, _ in remaining.values()}
        leaves = sorted(v for v in remaining if v not in parents)
        for v in leaves:
            p, eid = remaining.pop(v)
            # the tree edge is v's only out-edge (in) or only in-edge (out),
            # so the contraction keeps the parent
            tb.contract(eid, rep=p)


def apply_trace(d: Digraph, trace: MinorTrace) -> Digraph:
    """Replay a trace on a host graph, validating every step."""
    g = d.copy()
    for i, s in enumerate(trace.steps):
        try:
            if s.kind == "DV":
                g.delete_vertex(s.ident)
            elif s.kind == "DE":
                g.delete_edge(s.ident)
            elif s.kind == "CE":
                if s.rep not in eligible_reps(g, s.ident):
                    raise NotContractibleError(
                        f"rep {s.rep} ineligible for edge {s.ident}")
                contract_edge_inplace(g, s.ident, s.rep)
            else:
                raise StrataError(f"unknown step kind {s.kind!r}")
        except (UnknownIdError, NotContractibleError, StrataError) as exc:
            raise TraceReplayError(i, str(exc)) from None
    return g


def verify_trace(d: Digraph, trace: MinorTrace, minor: Digraph) -> bool:
    """True iff the trace replays on ``d`` to exactly ``minor`` (same vertex
    ids, same edge multiset) and the identification map is consistent."""
    if trace.host_sig != d.signature():
        return False
    try:
        result = apply_trace(d, trace)
    except TraceReplayError:
        return False
    if not result.same_graph(minor):
        return False
    return set(trace.rep) == set(result.vertices()) and \
        all(trace.rep[v] == v for v in trace.rep)


def check_minor_reachability(d: Digraph, minor: Digraph) -> bool:
    """The connectivity-preservation invariant: reachability between minor
    vertices implies reachability between their representatives in the host."""
    clo_m = reachability_closure(minor)
    clo_d = reachability_closure(d)
    for v in minor.vertices():
        for w in clo_m[v]:
            if w not in clo_d[v]:
                return False
    return True


def compose(t1: MinorTrace, t2: MinorTrace) -> MinorTrace:
    """The trace witnessing transitivity: minor-of-minor is a minor."""
    if t1.result_sig != t2.host_sig:
        raise StrataError("trace composition mismatch: t1 result differs from t2 host")
    rep = {v: t1.rep[t2.rep[v]] for v in t2.rep}
    return MinorTrace(t1.host_sig, t2.result_sig, t1.steps + t2.steps, rep)
