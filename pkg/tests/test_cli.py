import json

import pytest

from strata.cli import main
from strata.io import ParseError, parse_edgelist, to_dot, write_edgelist
from strata.families import directed_cycle


def test_edgelist_roundtrip():
    d = directed_cycle(5)
    text = write_edgelist(d, u={0, 2})
    back, u = parse_edgelist(text)
    assert back.signature() == d.signature()
    assert u == {0, 2}


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 1"):
        parse_edgelist("nonsense\n")
    with pytest.raises(ParseError, match="line 3"):
        parse_edgelist("2 1\n0 1\n0 zzz\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_edgelist("2 1\n0 5\n")
    with pytest.raises(ParseError, match="line 3"):
        parse_edgelist("2 1\n0 1\nV: 1\n")


def test_to_dot_mentions_vertices():
    d = directed_cycle(3)
    dot = to_dot(d, highlight={1})
    assert "0 -> 1;" in dot and "fillcolor=lightblue" in dot


def test_gen_cycle_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.txt"
    out2 = tmp_path / "b.txt"
    assert main(["gen", "--family", "cycle", "--size", "6", "--out", str(out1)]) == 0
    assert main(["gen", "--family", "cycle", "--size", "6", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    d, _ = parse_edgelist(out1.read_text())
    assert d.num_vertices() == 6 and d.num_edges() == 6


def test_gen_doubled_tree_star(tmp_path):
    out = tmp_path / "k15.txt"
    assert main(["gen", "--family", "doubled-tree", "--tree", "star:5",
                 "--out", str(out)]) == 0
    d, u = parse_edgelist(out.read_text())
    assert d.num_vertices() == 6 and d.num_edges() == 10
    assert u == set(range(1, 6))


def test_gen_random_sc_seeded(tmp_path):
    out1 = tmp_path / "r1.txt"
    out2 = tmp_path / "r2.txt"
    assert main(["gen", "--family", "random-sc", "--size", "10", "--seed", "7",
                 "--out", str(out1)]) == 0
    assert main(["gen", "--family", "random-sc", "--size", "10", "--seed", "7",
                 "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    from strata.digraph import is_strongly_connected

    d, _ = parse_edgelist(out1.read_text())
    assert is_strongly_connected(d)


def run_extract(tmp_path, capsys, graph_text, n, teeth=None):
    gfile = tmp_path / "g.txt"
    gfile.write_text(graph_text)
    argv = ["extract", "--graph", str(gfile), "--n", str(n),
            "--out-dir", str(tmp_path)]
    if teeth:
        argv += ["--teeth-set", teeth]
    code = main(argv)
    out = capsys.readouterr().out.strip().splitlines()[-1]
    return code, json.loads(out)


def test_extract_cycle_roundtrip(tmp_path, capsys):
    text = write_edgelist(directed_cycle(8))
    code, summary = run_extract(tmp_path, capsys, text, 8, teeth="all")
    assert code == 0
    assert summary["kind"] == "cycle" and summary["teeth_in_u"] == 8
    # verify the emitted artifacts
    code = main(["verify", "--graph", str(tmp_path / "g.txt"),
                 "--trace", str(tmp_path / "g.trace.txt"),
                 "--minor", str(tmp_path / "g.minor.txt"), "--bruteforce"])
    assert code == 0


def test_extract_star_file_with_u_line(tmp_path, capsys):
    lines = ["5 8"]
    for leaf in (1, 2, 3, 4):
        lines.append(f"0 {leaf}")
        lines.append(f"{leaf} 0")
    lines.append("U: 1 2 3 4")
    code, summary = run_extract(tmp_path, capsys, "\n".join(lines) + "\n", 4)
    assert code == 0 and summary["kind"] == "star-i" and summary["teeth_in_u"] == 4


def test_extract_insufficient_exit_2(tmp_path, capsys):
    text = "2 2\n0 1\n1 0\nU: 0 1\n"
    code, summary = run_extract(tmp_path, capsys, text, 5)
    assert code == 2
    assert summary["status"] == "insufficient" and summary["achieved"] == 2


def test_extract_malformed_file_exit_1(tmp_path, capsys):
    gfile = tmp_path / "bad.txt"
    gfile.write_text("2 9\n0 1\n")
    code = main(["extract", "--graph", str(gfile), "--n", "1"])
    assert code == 1


def test_verify_rejects_tampered_trace(tmp_path, capsys):
    text = write_edgelist(directed_cycle(9))
    code, summary = run_extract(tmp_path, capsys, text, 4, teeth="0,2,4,6")
    assert code == 0
    trace_file = tmp_path / "g.trace.txt"
    lines = trace_file.read_text().splitlines()
    assert lines, "this extraction must contract cycle vertices"
    trace_file.write_text("\n".join(lines[:-1]) + "\n")
    code = main(["verify", "--graph", str(tmp_path / "g.txt"),
                 "--trace", str(trace_file),
                 "--minor", str(tmp_path / "g.minor.txt")])
    assert code == 1


def test_verify_rejects_wrong_minor(tmp_path, capsys):
    text = write_edgelist(directed_cycle(8))
    code, _ = run_extract(tmp_path, capsys, text, 8, teeth="all")
    assert code == 0
    (tmp_path / "other.txt").write_text(write_edgelist(directed_cycle(3)))
    code = main(["verify", "--graph", str(tmp_path / "g.txt"),
                 "--trace", str(tmp_path / "g.trace.txt"),
                 "--minor", str(tmp_path / "other.txt")])
    assert code == 1


def test_centre_structure_dot_export():
    from strata.centre import centre_minor
    from strata.families import doubled_tree, star_tree_edges
    from strata.io import centre_to_dot

    d = doubled_tree(star_tree_edges(4))
    cs, _ = centre_minor(d, {1, 2, 3, 4}, 4)
    dot = centre_to_dot(cs)
    assert "cluster_f0" in dot and "lightblue" in dot and "digraph" in dot


def test_budget_from_env(monkeypatch):
    from strata.cli import budget_from_env

    monkeypatch.delenv("STRATA_BUDGET", raising=False)
    assert budget_from_env().max_vertices == 8
    monkeypatch.setenv("STRATA_BUDGET", "6")
    assert budget_from_env().max_vertices == 6
    monkeypatch.setenv("STRATA_BUDGET", "7:1000")
    b = budget_from_env()
    assert b.max_vertices == 7 and b.max_steps == 1000
