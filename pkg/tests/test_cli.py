"""End-to-end CLI behaviour: exit codes, formats, file output, figures."""

import json

import pytest

from raagqi.cli import cmd_analyze, cmd_compare, cmd_enumerate, main
from raagqi.graphs import GraphError, graph_to_edge_list, graph_to_json

from fixtures import (
    path,
    path_plus_k4,
    path_plus_k4_plus_ear,
    pentagon,
    pentagon_leaf_edge_triangle,
    two_pentagons,
)


def write_graph(tmp_path, name, g):
    p = tmp_path / name
    if name.endswith(".json"):
        p.write_text(graph_to_json(g))
    else:
        p.write_text(graph_to_edge_list(g))
    return str(p)


def test_analyze_text_exit_zero(tmp_path, capsys):
    p = write_graph(tmp_path, "fig.txt", pentagon_leaf_edge_triangle())
    assert main(["analyze", p]) == 0
    out = capsys.readouterr().out
    assert "tree of cylinders: 2 cylinders, 2 rigid pieces, 3 edges" in out
    assert "multiplicity inf at the cylinder" in out


def test_analyze_accepts_json_input(tmp_path, capsys):
    p = write_graph(tmp_path, "fig.json", pentagon())
    assert main(["analyze", p]) == 0
    assert "qi class: rigid[" in capsys.readouterr().out


def test_analyze_json_format_parses(tmp_path):
    p = write_graph(tmp_path, "g.txt", path(4))
    doc = json.loads(cmd_analyze(p, fmt="json"))
    assert doc["ends"] == "one"
    assert doc["treeGraded"] == 2
    assert doc["jsj"]["trivial"] is False


def test_analyze_dot_format(tmp_path):
    p = write_graph(tmp_path, "g.txt", path(4))
    dot = cmd_analyze(p, fmt="dot")
    assert dot.startswith("graph tree_of_cylinders {")
    # a path has no tree of cylinders below three vertices
    q = write_graph(tmp_path, "h.txt", path(2))
    with pytest.raises(GraphError):
        cmd_analyze(q, fmt="dot")


def test_missing_file_and_parse_error_exit_two(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "nope.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n9 1\n")
    assert main(["analyze", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_max_vertices_guard(tmp_path):
    p = write_graph(tmp_path, "g.txt", pentagon())
    assert main(["--max-vertices", "3", "analyze", p]) == 2
    assert main(["--max-vertices", "5", "analyze", p]) == 0


def test_compare_exit_codes(tmp_path):
    nf = write_graph(tmp_path, "a.txt", path_plus_k4())
    ear = write_graph(tmp_path, "b.txt", path_plus_k4_plus_ear())
    fig = write_graph(tmp_path, "c.txt", pentagon_leaf_edge_triangle())
    assert main(["compare", nf, ear]) == 1
    assert main(["compare", fig, fig]) == 0
    # honestly undecidable pair: distinct whole-graph rigid pieces
    egp = tmp_path / "egp.txt"
    egp.write_text("8\n0 1\n1 2\n2 3\n3 4\n4 0\n1 5\n5 6\n6 7\n7 0\n")
    pent = write_graph(tmp_path, "p.txt", pentagon())
    assert main(["compare", str(egp), pent]) == 3


def test_compare_text_mentions_witness(tmp_path, capsys):
    a = write_graph(tmp_path, "a.txt", path_plus_k4())
    b = write_graph(tmp_path, "b.txt", path_plus_k4_plus_ear())
    main(["compare", a, b])
    out = capsys.readouterr().out
    assert "verdict: NotWeaklyEquivalent" in out
    assert "Z x (Z * Z^2)" in out


def test_compare_json_roundtrips(tmp_path):
    a = write_graph(tmp_path, "a.txt", two_pentagons())
    text, verdict = cmd_compare(a, a, fmt="json")
    doc = json.loads(text)
    assert doc["verdict"] == verdict.tag == "EquivalentAndQI"
    assert doc["equal"] == {"naive": True, "embellished": True}


def test_compare_dot_names_both_trees(tmp_path):
    a = write_graph(tmp_path, "a.txt", pentagon_leaf_edge_triangle())
    text, _ = cmd_compare(a, a, fmt="dot")
    assert "tree_of_cylinders_A" in text
    assert "tree_of_cylinders_B" in text


def test_out_flag_writes_file(tmp_path, capsys):
    p = write_graph(tmp_path, "g.txt", pentagon())
    dest = tmp_path / "report.txt"
    assert main(["--out", str(dest), "analyze", p]) == 0
    assert capsys.readouterr().out == ""
    assert "qi class: rigid[" in dest.read_text()


def test_figures_written(tmp_path):
    p = write_graph(tmp_path, "g.txt", pentagon_leaf_edge_triangle())
    figdir = tmp_path / "figs"
    assert main(["--figures", str(figdir), "analyze", p]) == 0
    names = sorted(f.name for f in figdir.iterdir())
    assert names == ["graph.png", "tree.png"]
    assert (figdir / "tree.png").stat().st_size > 0


def test_oracle_flag(tmp_path, capsys):
    p = write_graph(tmp_path, "g.txt", path_plus_k4_plus_ear())
    assert main(["--oracle", "analyze", p]) == 0
    assert "oracle cross-checks: passed" in capsys.readouterr().out
    big = write_graph(tmp_path, "big.txt", path(10))
    assert main(["--oracle", "analyze", big]) == 2


def test_enumerate_text_and_bounds(capsys):
    assert main(["enumerate", "4"]) == 0
    out = capsys.readouterr().out
    assert "connected graphs on 4 vertices: 6" in out
    assert "provably equivalent classes: 6" in out
    assert main(["enumerate", "0"]) == 2
    assert main(["enumerate", "8"]) == 2


def test_enumerate_deterministic_bytes():
    assert cmd_enumerate(4, fmt="json") == cmd_enumerate(4, fmt="json")
    doc = json.loads(cmd_enumerate(4, fmt="json"))
    assert doc["count"] == 6
    assert doc["unknownPairs"] == []
