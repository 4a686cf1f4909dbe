# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: bitset closure and canonical labeling.

Twin of ``pure.py``; the two must return byte-identical results (the test
suite compares them).  Graphs are capped at 64 vertices for the closure and
255 for the canonical key, far above anything the oracle accepts.
"""
from libc.string cimport memcpy

BACKEND = "c"


def closure(int n, adj):
    """Reflexive-transitive closure of a bitmask adjacency list."""
    cdef unsigned long long reach[64]
    cdef unsigned long long acc, mm
    cdef int i, j, changed
    if n > 64:
        raise ValueError("closure kernel supports at most 64 vertices")
    for i in range(n):
        reach[i] = <unsigned long long> adj[i] | (1ULL << i)
    changed = 1
    while changed:
        changed = 0
        for i in range(n):
            acc = reach[i]
            mm = reach[i]
            j = 0
            while mm:
                if mm & 1ULL:
                    acc |= reach[j]
                mm >>= 1
                j += 1
            if acc != reach[i]:
                reach[i] = acc
                changed = 1
    return [reach[i] for i in range(n)]


cdef void _sort_ints(int* arr, int length) noexcept:
    # insertion sort; profiles are tiny
    cdef int i, j, key
    for i in range(1, length):
        key = arr[i]
        j = i - 1
        while j >= 0 and arr[j] > key:
            arr[j + 1] = arr[j]
            j -= 1
        arr[j + 1] = key


cdef list _signatures(int n, const unsigned char[:] counts, int* colors):
    cdef int i, j, c, n_out, n_in, word
    cdef int out_prof[256]
    cdef int in_prof[256]
    cdef unsigned char buf[1040]
    cdef int pos
    sigs = []
    for i in range(n):
        n_out = 0
        n_in = 0
        for j in range(n):
            c = counts[i * n + j]
            if c:
                out_prof[n_out] = (colors[j] << 8) | c
                n_out += 1
            c = counts[j * n + i]
            if c:
                in_prof[n_in] = (colors[j] << 8) | c
                n_in += 1
        _sort_ints(out_prof, n_out)
        _sort_ints(in_prof, n_in)
        pos = 0
        buf[pos] = colors[i] & 0xFF; pos += 1
        buf[pos] = (colors[i] >> 8) & 0xFF; pos += 1
        for j in range(n_out):
            word = out_prof[j]
            buf[pos] = (word >> 8) & 0xFF; pos += 1
            buf[pos] = word & 0xFF; pos += 1
        buf[pos] = 0xFF; pos += 1
        buf[pos] = 0xFF; pos += 1
        for j in range(n_in):
            word = in_prof[j]
            buf[pos] = (word >> 8) & 0xFF; pos += 1
            buf[pos] = word & 0xFF; pos += 1
        sigs.append(bytes(buf[:pos]))
    return sigs


cdef int _refine(int n, const unsigned char[:] counts, int* colors) except -1:
    cdef int i, changed
    while True:
        sigs = _signatures(n, counts, colors)
        ranking = {}
        for s in sorted(set(sigs)):
            ranking[s] = len(ranking)
        changed = 0
        for i in range(n):
            r = ranking[sigs[i]]
            if r != colors[i]:
                colors[i] = r
                changed = 1
        if not changed:
            return 0


def canonical_key(int n, const unsigned char[:] counts):
    """Canonical form of a directed multigraph as a flat n*n count matrix."""
    cdef int i, j, v, c, pick_color, pos
    cdef int colors[256]
    cdef int work[256]
    cdef int order[256]
    cdef unsigned char keybuf[65537]
    if n == 0:
        return b""
    if n > 255:
        raise ValueError("canonical kernel supports at most 255 vertices")
    for i in range(n):
        colors[i] = 0
    _refine(n, counts, colors)
    best = None
    stack = [[colors[i] for i in range(n)]]
    while stack:
        cur = stack.pop()
        for i in range(n):
            work[i] = cur[i]
        # smallest colour class with more than one member
        pick_color = -2
        for c in sorted(set(cur)):
            if cur.count(c) > 1:
                pick_color = c
                break
        if pick_color == -2:
            # discrete: order by colour
            idx = sorted(range(n), key=cur.__getitem__)
            for i in range(n):
                order[i] = idx[i]
            pos = 0
            keybuf[pos] = n; pos += 1
            for i in range(n):
                for j in range(n):
                    keybuf[pos] = counts[order[i] * n + order[j]]
                    pos += 1
            key = bytes(keybuf[:pos])
            if best is None or key < best:
                best = key
            continue
        for v in range(n):
            if cur[v] == pick_color:
                for i in range(n):
                    work[i] = cur[i]
                work[v] = -1
                _refine(n, counts, work)
                stack.append([work[i] for i in range(n)])
    return best
