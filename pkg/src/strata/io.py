"""Edge-list file format and DOT export.

The text format: a header line ``n m``, then ``m`` lines ``tail head`` with
0-based vertex ids, and optionally a trailing line ``U: id id ...`` naming the
target set.  Edge ids are assigned in file order, which makes traces written
against a file replayable by anyone.
"""
from __future__ import annotations

from .centre import CentreStructure
from .digraph import Digraph, StrataError
from .shapes import ShapeCertificate


class ParseError(StrataError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_edgelist(text: str) -> tuple[Digraph, set[int] | None]:
    lines = text.splitlines()
    entries = [(i + 1, ln.strip()) for i, ln in enumerate(lines)
               if ln.strip() and not ln.strip().startswith("#")]
    if not entries:
        raise ParseError(1, "empty graph file")
    ln_no, header = entries[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(ln_no, f"expected header 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(ln_no, f"non-integer header {header!r}") from None
    if n < 0 or m < 0:
        raise ParseError(ln_no, "negative counts in header")
    d = Digraph()
    for i in range(n):
        d.add_vertex(i)
    u: set[int] | None = None
    body = entries[1:]
    if len(body) < m:
        raise ParseError(entries[-1][0], f"expected {m} edges, found {len(body)}")
    for k in range(m):
        ln_no, line = body[k]
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(ln_no, f"expected 'tail head', got {line!r}")
        try:
            t, h = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(ln_no, f"non-integer endpoint in {line!r}") from None
        if not (0 <= t < n and 0 <= h < n):
            raise ParseError(ln_no, f"endpoint out of range in {line!r}")
        if t == h:
            raise ParseError(ln_no, "loops are not allowed")
        d.add_edge(t, h)
    rest = body[m:]
    if rest:
        ln_no, line = rest[0]
        if not line.startswith("U:"):
            raise ParseError(ln_no, f"unexpected trailing line {line!r}")
        try:
            u = {int(tok) for tok in line[2:].split()}
        except ValueError:
            raise ParseError(ln_no, "non-integer id in U line") from None
        for v in u:
            if not d.has_vertex(v):
                raise ParseError(ln_no, f"U names unknown vertex {v}")
        if len(rest) > 1:
            raise ParseError(rest[1][0], f"unexpected trailing line {rest[1][1]!r}")
    return d, u


def write_edgelist(d: Digraph, u=None) -> str:
    vs = d.vertices()
    remap = {v: i for i, v in enumerate(vs)}
    out = [f"{len(vs)} {d.num_edges()}"]
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        out.append(f"{remap[t]} {remap[h]}")
    if u is not None:
        out.append("U: " + " ".join(str(remap[v]) for v in sorted(u)))
    return "\n".join(out) + "\n"


def to_dot(d: Digraph, highlight=frozenset(), name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in d.vertices():
        attrs = ' [style=filled, fillcolor=lightblue]' if v in highlight else ""
        lines.append(f"  {v}{attrs};")
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        lines.append(f"  {t} -> {h};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def certificate_to_dot(d: Digraph, cert: ShapeCertificate) -> str:
    """DOT export with teeth highlighted and the shape kind in the label."""
    lines = [f'digraph shape {{', f'  label="{cert.kind}";']
    gadget_verts = {v for _, cyc in cert.gadgets for v in cyc}
    for v in d.vertices():
        if v in cert.teeth:
            lines.append(f'  {v} [style=filled, fillcolor=orange];')
        elif v in gadget_verts:
            lines.append(f'  {v} [style=filled, fillcolor=lightgray];')
        else:
            lines.append(f'  {v};')
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        lines.append(f"  {t} -> {h};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def centre_to_dot(cs: CentreStructure) -> str:
    """DOT export of a centre structure: A highlighted, attachments grouped."""
    d = cs.graph
    lines = ["digraph centre {", f'  label="{cs.kind}";']
    a_verts = cs.a_vertices() if cs.kind != "i" else \
        (cs.cycle.vertex_set() if cs.cycle is not None else cs.chain.vertex_set())
    for v in sorted(a_verts):
        lines.append(f"  {v} [style=filled, fillcolor=lightblue];")
    for k, att in enumerate(cs.attachments):
        lines.append(f"  subgraph cluster_f{k} {{")
        lines.append(f'    label="F{k}";')
        for v in att.spine:
            fill = ", fillcolor=orange, style=filled" if v == att.tooth else ""
            lines.append(f"    {v} [shape=circle{fill}];")
        lines.append("  }")
    for v in cs.u_sel:
        lines.append(f"  {v} [style=filled, fillcolor=orange];")
    for eid in d.edge_ids():
        t, h = d.endpoints(eid)
        lines.append(f"  {t} -> {h};")
    lines.append("}")
    return "\n".join(lines) + "\n"
