"""Batch front door: generate instances, run extractions, verify certificates.

Exit codes: 0 on success, 2 when the extraction is honest-but-insufficient,
1 on input errors.  Each extraction prints one machine-parseable JSON summary
line.  ``STRATA_BUDGET`` overrides the brute-force oracle budget used by
``verify --bruteforce`` (either ``max_vertices`` or ``max_vertices:max_steps``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import families
from .butterfly import MinorTrace, check_minor_reachability
from .digraph import Digraph, StrataError
from .extract import Insufficient, extract_star_or_comb
from .io import ParseError, certificate_to_dot, parse_edgelist, to_dot, write_edgelist
from .oracle import BudgetExceededError, SearchBudget, is_butterfly_minor_bruteforce


def budget_from_env() -> SearchBudget:
    raw = os.environ.get("STRATA_BUDGET")
    if not raw:
        return SearchBudget()
    parts = raw.split(":")
    try:
        if len(parts) == 1:
            return SearchBudget(max_vertices=int(parts[0]))
        return SearchBudget(max_vertices=int(parts[0]), max_steps=int(parts[1]))
    except ValueError:
        raise StrataError(f"malformed STRATA_BUDGET {raw!r}") from None


def _load_graph(path: str) -> tuple[Digraph, set[int] | None]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StrataError(f"{path}: {exc}") from None
    try:
        return parse_edgelist(text)
    except ParseError as exc:
        raise StrataError(f"{path}: {exc}") from None


def _teeth_set(spec: str | None, file_u: set[int] | None, d: Digraph) -> set[int]:
    if spec is None:
        if file_u is None:
            raise StrataError("no U given: add a 'U:' line or pass --teeth-set")
        return file_u
    if spec == "all":
        return set(d.vertices())
    try:
        u = {int(tok) for tok in spec.replace(",", " ").split()}
    except ValueError:
        raise StrataError(f"malformed --teeth-set {spec!r}") from None
    for v in u:
        if not d.has_vertex(v):
            raise StrataError(f"--teeth-set names unknown vertex {v}")
    return u


def _extract_one(path: str, teeth_spec: str | None, n: int, budget: int,
                 out_dir: str) -> tuple[int, str]:
    d, file_u = _load_graph(path)
    u = _teeth_set(teeth_spec, file_u, d)
    stem = Path(path).stem
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = extract_star_or_comb(d, u, n, ramsey_budget=budget)
    if isinstance(res, Insufficient):
        summary = {"file": path, "status": "insufficient", "n": n,
                   "achieved": res.achieved, "stage": res.stage}
        return 2, json.dumps(summary, sort_keys=True)
    (out / f"{stem}.shape.dot").write_text(certificate_to_dot(res.graph, res.certificate))
    (out / f"{stem}.trace.txt").write_text(res.trace.serialize())
    (out / f"{stem}.minor.txt").write_text(write_edgelist(res.graph))
    summary = {
        "file": path,
        "status": "ok",
        "kind": res.certificate.kind,
        "n": n,
        "teeth": sorted(res.certificate.teeth),
        "teeth_in_u": res.teeth_in(u),
        "stages": list(res.stages),
        "outputs": [str(out / f"{stem}.shape.dot"), str(out / f"{stem}.trace.txt"),
                    str(out / f"{stem}.minor.txt")],
    }
    return 0, json.dumps(summary, sort_keys=True)


def cmd_extract(args) -> int:
    worst = 0
    jobs = []
    for path in args.graph:
        jobs.append((path, args.teeth_set, args.n, args.ramsey_budget, args.out_dir))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_extract_one_star, jobs))
    else:
        results = [_extract_one(*job) for job in jobs]
    for code, line in results:
        print(line)
        worst = max(worst, code)
    return worst


def _extract_one_star(job):
    return _extract_one(*job)


def cmd_verify(args) -> int:
    host, _ = _load_graph(args.graph)
    claimed, _ = _load_graph(args.minor)
    try:
        trace = MinorTrace.deserialize(Path(args.trace).read_text(), host)
    except (OSError, StrataError) as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 1
    result = None
    try:
        from .butterfly import apply_trace

        result = apply_trace(host, trace)
    except StrataError as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return 1
    if write_edgelist(result) != write_edgelist(claimed):
        print("replay result differs from the claimed minor", file=sys.stderr)
        return 1
    if not check_minor_reachability(host, result):
        print("reachability invariant violated", file=sys.stderr)
        return 1
    if args.bruteforce:
        budget = budget_from_env()
        try:
            if not is_butterfly_minor_bruteforce(result, host, budget):
                print("brute-force oracle rejects the minor", file=sys.stderr)
                return 1
        except BudgetExceededError as exc:
            print(f"oracle budget exceeded, skipping: {exc}", file=sys.stderr)
    print("ok")
    return 0


def _gen_graph(args) -> tuple[Digraph, set[int] | None]:
    fam = args.family
    if fam == "cycle":
        return families.directed_cycle(args.size), None
    if fam == "doubled-tree":
        kind, _, param = (args.tree or "star:3").partition(":")
        if kind == "star":
            edges = families.star_tree_edges(int(param))
            u = set(range(1, int(param) + 1))
        elif kind == "path":
            edges = families.path_tree_edges(int(param))
            u = {0, int(param) - 1}
        elif kind == "random":
            edges = families.random_tree_edges(int(param), args.seed)
            u = None
        else:
            raise StrataError(f"unknown tree spec {args.tree!r}")
        return families.doubled_tree(edges), u
    if fam == "chain-of-cycles":
        d, u = families.chain_with_pendant_lobes(args.size, seed=args.seed)
        return d, u
    if fam == "random-sc":
        return families.random_sc_digraph(args.size, seed=args.seed), None
    raise StrataError(f"unknown family {fam!r}")


def cmd_gen(args) -> int:
    d, u = _gen_graph(args)
    if args.format == "dot":
        text = to_dot(d, highlight=u or frozenset())
    else:
        text = write_edgelist(d, u)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="strata",
        description="Certified star- and comb-shaped butterfly minors of "
                    "strongly connected digraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="run the extraction pipeline")
    ex.add_argument("--graph", action="append", required=True,
                    help="edge-list file (repeatable)")
    ex.add_argument("--teeth-set", default=None,
                    help="U as 'all' or comma/space-separated ids "
                         "(default: the file's U line)")
    ex.add_argument("--n", type=int, required=True, help="required teeth in U")
    ex.add_argument("--seed", type=int, default=0, help="unused; kept for scripts")
    ex.add_argument("--ramsey-budget", type=int, default=4,
                    help="target multiplier for intermediate counts")
    ex.add_argument("--out-dir", default=".", help="where to write artifacts")
    ex.add_argument("--jobs", type=int, default=1, help="parallel workers")
    ex.set_defaults(fn=cmd_extract)

    ve = sub.add_parser("verify", help="replay a trace and check the minor")
    ve.add_argument("--graph", required=True, help="host edge-list file")
    ve.add_argument("--trace", required=True, help="trace file")
    ve.add_argument("--minor", required=True, help="claimed minor edge-list file")
    ve.add_argument("--bruteforce", action="store_true",
                    help="also run the exhaustive oracle (budgeted)")
    ve.set_defaults(fn=cmd_verify)

    ge = sub.add_parser("gen", help="generate a test instance")
    ge.add_argument("--family", required=True,
                    choices=["cycle", "doubled-tree", "chain-of-cycles", "random-sc"])
    ge.add_argument("--size", type=int, default=6,
                    help="cycle length / chain length / vertex count")
    ge.add_argument("--tree", default=None, help="doubled-tree spec: star:K|path:K|random:N")
    ge.add_argument("--seed", type=int, default=0)
    ge.add_argument("--format", choices=["edgelist", "dot"], default="edgelist")
    ge.add_argument("--out", default=None, help="output file (default: stdout)")
    ge.set_defaults(fn=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except StrataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
