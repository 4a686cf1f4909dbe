"""Pure-Python kernels: bitset reachability closure and canonical labeling.

These back the hot loops of the brute-force oracle and the invariant suites.
The compiled twin in ``_ckern`` implements the same algorithms step for step,
so both backends produce byte-identical canonical keys; the package selects a
backend at import time (see ``__init__``).
"""
from __future__ import annotations

BACKEND = "pure"


def closure(n: int, adj: list[int]) -> list[int]:
    """Reflexive-transitive closure of a bitmask adjacency list.

    ``adj[i]`` holds the successor set of vertex i as a bitmask.  Returns the
    reach masks, self bit included.
    """
    reach = [adj[i] | (1 << i) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            m = reach[i]
            acc = m
            j = 0
            mm = m
            while mm:
                if mm & 1:
                    acc |= reach[j]
                mm >>= 1
                j += 1
            if acc != m:
                reach[i] = acc
                changed = True
    return reach


def _signatures(n: int, counts: bytes, colors: list[int]) -> list[bytes]:
    """Per-vertex refinement signatures: colour plus sorted neighbour
    profiles, encoded as bytes so both backends compare identically."""
    sigs = []
    for i in range(n):
        out_prof = []
        in_prof = []
        base = i * n
        for j in range(n):
            c = counts[base + j]
            if c:
                out_prof.append((colors[j] << 8) | c)
            c = counts[j * n + i]
            if c:
                in_prof.append((colors[j] << 8) | c)
        out_prof.sort()
        in_prof.sort()
        sig = bytearray()
        sig.append(colors[i] & 0xFF)
        sig.append(colors[i] >> 8 & 0xFF)
        for word in out_prof:
            sig.append(word >> 8 & 0xFF)
            sig.append(word & 0xFF)
        sig.append(0xFF)
        sig.append(0xFF)
        for word in in_prof:
            sig.append(word >> 8 & 0xFF)
            sig.append(word & 0xFF)
        sigs.append(bytes(sig))
    return sigs


def _refine(n: int, counts: bytes, colors: list[int]) -> list[int]:
    while True:
        sigs = _signatures(n, counts, colors)
        ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _key_for_order(n: int, counts: bytes, order: list[int]) -> bytes:
    out = bytearray()
    out.append(n)
    for i in order:
        for j in order:
            out.append(counts[i * n + j])
    return bytes(out)


def canonical_key(n: int, counts: bytes) -> bytes:
    """Canonical form of a directed multigraph given as a flat n*n count
    matrix (row-major, entries capped at 255).

    Colour refinement narrows the candidate orders; individualization of the
    smallest non-singleton class explores the rest, and the minimum adjacency
    encoding over all discrete orders is the key.  Intended for the tiny
    graphs the oracle accepts.
    """
    if n == 0:
        return b""
    colors = _refine(n, counts, [0] * n)
    best: bytes | None = None
    stack = [colors]
    while stack:
        colors = stack.pop()
        classes: dict[int, list[int]] = {}
        for i, c in enumerate(colors):
            classes.setdefault(c, []).append(i)
        pick = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                pick = classes[c]
                break
        if pick is None:
            order = sorted(range(n), key=lambda i: colors[i])
            key = _key_for_order(n, counts, order)
            if best is None or key < best:
                best = key
            continue
        for v in pick:
            nxt = list(colors)
            nxt[v] = -1  # individualize; renormalized by the ranking
            stack.append(_refine(n, counts, nxt))
    assert best is not None
    return best
