"""Shared template enumerations for the shape round-trip suites.

The templates are canonical: star branches are non-decreasing, comb teeth are
exactly the template leaves plus (for kind b) marked internal trivial teeth,
and templates whose canonical recognition differs from the requested kind are
excluded (spiders are stars, one-junction combs are star-ii)."""
import itertools

from strata.starcomb import Comb, SubdividedStar


def enumerate_stars(max_branches=5, max_verts=10):
    def partitions(total, parts, minimum):
        if parts == 0:
            if total == 0:
                yield ()
            return
        for first in range(minimum, total - parts + 2):
            for rest in partitions(total - first, parts - 1, first):
                yield (first,) + rest

    out = []
    for b in range(3, max_branches + 1):
        for total in range(b, max_verts):
            for lens in partitions(total, b, 1):
                vid = 1
                branches = []
                for ln in lens:
                    branches.append(tuple(range(vid, vid + ln)))
                    vid += ln
                out.append(SubdividedStar(0, tuple(branches)))
    return out


def enumerate_combs(for_kind, max_teeth=4, max_verts=10):
    out = []
    for spine_len in range(1, max_verts + 1):
        spine = tuple(range(spine_len))
        ends = {0, spine_len - 1}
        internal = [v for v in spine if v not in ends]
        mark_choices = [()] if for_kind == "a" else \
            [m for k in range(min(len(internal), max_teeth) + 1)
             for m in itertools.combinations(internal, k)]
        for marks in mark_choices:
            tooth_paths = [(v, ()) for v in sorted(ends | set(marks))]
            comb = Comb(spine, tuple(tooth_paths))
            if len(comb.teeth) <= max_teeth and len(comb.vertices()) <= max_verts:
                out.append(comb)
        if 3 <= spine_len <= 6:
            vid = spine_len
            tooth_paths = [(0, ()), (spine_len - 1, ())]
            for v in internal[:2]:
                tooth_paths.append((v, (vid,)))
                vid += 1
            comb = Comb(spine, tuple(sorted(tooth_paths)))
            if len(comb.teeth) <= max_teeth and len(comb.vertices()) <= max_verts:
                out.append(comb)

    def canonical_for_kind(c):
        deg3 = [v for v in c.vertices() if c.degree(v) >= 3]
        if for_kind == "a":
            return len(deg3) != 1
        junctions = c.junctions()
        return not (len(junctions) == 1 and c.degree(junctions[0]) == 3)

    return [c for c in out if canonical_for_kind(c)]
