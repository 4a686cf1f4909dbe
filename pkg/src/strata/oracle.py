"""Brute-force ground truth for tiny instances.

Everything here is deliberately exhaustive: butterfly-minor containment by
memoized search over canonical forms of all derivable graphs, and shape
recognition by enumerating every star/comb template that fits the size bound
and building it.  The polynomial recognizers and the extraction pipeline are
tested against these oracles.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from ._kernels import canonical_key
from .digraph import Digraph, StrataError
from .shapes import build_comb, build_star
from .starcomb import Comb, SubdividedStar


class BudgetExceededError(StrataError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    """Hard limits for the oracle; inputs beyond them are refused outright."""

    max_vertices: int = 8
    max_steps: int = 500_000
    timeout_s: float | None = None

    def __post_init__(self) -> None:
        if self.max_vertices <= 0 or self.max_steps <= 0:
            raise StrataError("budget fields must be positive")


def _count_matrix(d: Digraph) -> tuple[int, tuple[tuple[int, ...], ...]]:
    vs = d.vertices()
    idx = {v: i for i, v in enumerate(vs)}
    n = len(vs)
    m = [[0] * n for _ in range(n)]
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        m[idx[t]][idx[h]] += 1
    return n, tuple(tuple(r) for r in m)


def canonical_form(d: Digraph) -> bytes:
    """Isomorphism-invariant key of a digraph (multiplicities included)."""
    n, m = _count_matrix(d)
    flat = bytes(min(c, 255) for row in m for c in row)
    return canonical_key(n, flat)


def _canon(n: int, m: tuple[tuple[int, ...], ...]) -> bytes:
    flat = bytes(min(c, 255) for row in m for c in row)
    return canonical_key(n, flat)


def _drop_vertex(m, k):
    return tuple(tuple(c for j, c in enumerate(row) if j != k)
                 for i, row in enumerate(m) if i != k)


def _contract(m, i, j):
    """Contract one (i,j) edge: merge j into i, delete loops."""
    n = len(m)
    work = [list(r) for r in m]
    work[i][j] -= 1
    for k in range(n):
        if k != j:
            work[i][k] += work[j][k]
            work[k][i] += work[k][j]
    work[i][i] = 0
    return _drop_vertex(tuple(tuple(r) for r in work), j)


def _successors(m):
    """All single-step derivations: edge deletion, vertex deletion, butterfly
    contraction."""
    n = len(m)
    out = []
    seen_pairs = set()
    for i in range(n):
        for j in range(n):
            if m[i][j] > 0 and (i, j) not in seen_pairs:
                seen_pairs.add((i, j))
                work = [list(r) for r in m]
                work[i][j] -= 1
                out.append(tuple(tuple(r) for r in work))
    for k in range(n):
        out.append(_drop_vertex(m, k))
    for i in range(n):
        out_deg = sum(m[i])
        for j in range(n):
            if m[i][j] != 1:
                continue
            in_deg = sum(m[k][j] for k in range(n))
            if out_deg == 1 or in_deg == 1:
                out.append(_contract(m, i, j))
    return out


def is_butterfly_minor_bruteforce(h: Digraph, d: Digraph,
                                  budget: SearchBudget = SearchBudget()) -> bool:
    """Exhaustive check that ``h`` is a butterfly minor of ``d``.

    Breadth-first search over every graph derivable from ``d`` by edge and
    vertex deletions and butterfly contractions, deduplicated by canonical
    form.  Raises BudgetExceededError when the host is too large or the state
    space outgrows the step budget.
    """
    if d.num_vertices() > budget.max_vertices:
        raise BudgetExceededError(
            f"host has {d.num_vertices()} vertices > budget {budget.max_vertices}")
    n_h, m_h = _count_matrix(h)
    e_h = sum(map(sum, m_h))
    target = _canon(n_h, m_h)
    n0, m0 = _count_matrix(d)
    start = _canon(n0, m0)
    if n0 < n_h or sum(map(sum, m0)) < e_h:
        return False
    if n0 == n_h and start == target:
        return True
    seen = {start}
    frontier = [m0]
    steps = 0
    deadline = time.monotonic() + budget.timeout_s if budget.timeout_s else None
    while frontier:
        nxt = []
        for m in frontier:
            steps += 1
            if steps > budget.max_steps:
                raise BudgetExceededError(f"search exceeded {budget.max_steps} steps")
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceededError("search timed out")
            for m2 in _successors(m):
                n2 = len(m2)
                if n2 < n_h or sum(map(sum, m2)) < e_h:
                    continue
                key = _canon(n2, m2)
                if key in seen:
                    continue
                if n2 == n_h and key == target:
                    return True
                seen.add(key)
                nxt.append(m2)
        frontier = nxt
    return False


# -- exhaustive shape recognition ---------------------------------------------


def _enumerate_star_templates(max_total: int):
    """Canonical subdivided stars: non-decreasing branch lengths, >= 3 arms."""
    def partitions(total, parts, minimum):
        if parts == 0:
            if total == 0:
                yield ()
            return
        for first in range(minimum, total - parts + 2):
            for rest in partitions(total - first, parts - 1, first):
                yield (first,) + rest

    for b in range(3, max_total):
        for total in range(b, max_total):
            for lens in partitions(total, b, 1):
                vid = 1
                branches = []
                for ln in lens:
                    branches.append(tuple(range(vid, vid + ln)))
                    vid += ln
                yield SubdividedStar(0, tuple(branches))


def _enumerate_comb_templates(max_total: int):
    """Combs as spine length + per-vertex tooth lengths + trivial-tooth marks.

    Teeth are the leaves plus the marks; marks only matter for kind b, where
    they become junction gadgets.
    """
    for s in range(1, max_total + 1):
        spine = tuple(range(s))
        budget_left = max_total - s

        def vectors(i, left):
            if i == s:
                yield ()
                return
            for ln in range(0, left + 1):
                for rest in vectors(i + 1, left - ln):
                    yield (ln,) + rest

        for vec in vectors(0, budget_left):
            vid = s
            paths = []
            for v, ln in enumerate(vec):
                if ln:
                    paths.append((v, tuple(range(vid, vid + ln))))
                    vid += ln
            zero_internal = [v for v in range(1, s - 1) if vec[v] == 0]
            ends = [v for v in sorted({0, s - 1}) if vec[v] == 0]
            max_marks = max(0, (max_total - s - sum(vec)) // 2)
            for k in range(min(len(zero_internal), max_marks) + 1):
                for marks in itertools.combinations(zero_internal, k):
                    tooth_paths = list(paths) + [(v, ()) for v in marks] + \
                        [(v, ()) for v in ends]
                    yield Comb(spine, tuple(sorted(tooth_paths)))


_TABLE_CACHE: dict[int, dict[bytes, str]] = {}


def _shape_table(max_n: int) -> dict[bytes, str]:
    if max_n in _TABLE_CACHE:
        return _TABLE_CACHE[max_n]
    table: dict[bytes, str] = {}

    def put(d: Digraph, kind: str) -> None:
        if d.num_vertices() <= max_n:
            table.setdefault(canonical_form(d), kind)

    # precedence: cycle, star-i, comb-a, star-ii, comb-b
    for ln in range(3, max_n + 1):
        put(Digraph.from_edges(ln, [(i, (i + 1) % ln) for i in range(ln)]), "cycle")
    stars = [s for s in _enumerate_star_templates(max_n)]
    for s in stars:
        if len(s.vertices()) <= max_n:
            put(build_star("i", s)[0], "star-i")
    combs = list(_enumerate_comb_templates(max_n))
    for c in combs:
        if len(c.vertices()) <= max_n:
            put(build_comb("a", c)[0], "comb-a")
    for s in stars:
        if len(s.vertices()) - 1 + len(s.branches) <= max_n:
            put(build_star("ii", s)[0], "star-ii")
    for c in combs:
        if len(c.vertices()) + 2 * len(c.junctions()) <= max_n:
            d, cert = build_comb("b", c)
            put(d, cert.kind)
    _TABLE_CACHE[max_n] = table
    return table


def recognize_bruteforce(d: Digraph, budget: SearchBudget = SearchBudget()) -> str | None:
    """The shape kind of ``d`` by exhaustive template enumeration, or None."""
    if d.num_vertices() > budget.max_vertices:
        raise BudgetExceededError(
            f"input has {d.num_vertices()} vertices > budget {budget.max_vertices}")
    return _shape_table(budget.max_vertices).get(canonical_form(d))
