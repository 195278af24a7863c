"""Command-line front door: analyze, compare, enumerate.

Output is plain text or JSON, byte-deterministic for a given input; no
terminal detection, no colour.  Exit codes: 0 success (compare: both
groups quasi-isometric), 1 compare found an obstruction, 2 bad input,
3 compare could not decide.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .decide import (
    classify_corpus,
    compare,
    cylinder_group_str,
    detect_n_clique_tree_graded,
    free_product_nf,
    raag_str,
    stretch_ledger,
)
from .decorations import naive_decoration, refine_to_fixpoint, structure_invariant
from .graphs import (
    GraphError,
    ParseError,
    cut_vertices,
    graph_to_json,
    maximal_biconnected_subgraphs,
    parse_graph,
    vsorted,
)
from .jsj import INF, build_jsj, cylinder_blocks, edge_multiplicity, export_dot, export_json
from .labels import ends_of_label
from .oracles import brute_blocks, brute_cut_vertices, refine_on_ball, unfold_ball
from .raags import dovetail_status, qi_class_label


@dataclass
class CliConfig:
    command: str
    inputs: list = field(default_factory=list)
    fmt: str = "text"
    verbose: bool = False
    bound: int = 0
    out: str = None
    figures: str = None
    oracle: bool = False
    max_vertices: int = 32


def _load_graph(path, max_vertices):
    text = Path(path).read_text()
    fmt = "json" if str(path).endswith(".json") else "edge-list"
    g = parse_graph(text, fmt=fmt)
    if g.n > max_vertices:
        raise GraphError(
            "%s has %d vertices, over the --max-vertices limit %d"
            % (path, g.n, max_vertices))
    return g


def _mult(m):
    return "inf" if m == INF else str(int(m))


def _oracle_checks(graphs):
    """Cross-check the production algorithms against the brute oracles
    on every input; raises GraphError on any disagreement."""
    for g in graphs:
        if g.n > 9:
            raise GraphError("oracle cross-checks are limited to nine vertices")
        comps = [g.induced(c) for c in g.components()] if g.n else []
        for sub in comps:
            if sub.n < 2:
                continue
            if cut_vertices(sub) != brute_cut_vertices(sub):
                raise GraphError("oracle mismatch: cut vertices of %s"
                                 % ",".join(sub.vertices))
            if maximal_biconnected_subgraphs(sub) != brute_blocks(sub):
                raise GraphError("oracle mismatch: blocks of %s"
                                 % ",".join(sub.vertices))
        if g.n >= 3 and g.is_connected():
            gog = build_jsj(g)
            dec, _, _ = refine_to_fixpoint(naive_decoration(gog))
            root = min(v.id for v in gog.vertices)
            ball = unfold_ball(gog, dec, 2, root=root)
            part = refine_on_ball(ball, rounds=1)
            for a in ball.interior(1):
                for b in ball.interior(1):
                    na, nb = ball.node(a), ball.node(b)
                    ta = (dec.vertex_tokens.get(na.qid)
                          or dec.edge_tokens.get(na.qid))
                    tb = (dec.vertex_tokens.get(nb.qid)
                          or dec.edge_tokens.get(nb.qid))
                    if (part[a] == part[b]) != (ta == tb):
                        raise GraphError("oracle mismatch: ball refinement")
    return "oracle cross-checks: passed"


# --------------------------------------------------------------------------
# analyze


def _analyze_doc(g, verbose=False):
    label = qi_class_label(g)
    doc = {
        "graph": json.loads(graph_to_json(g)),
        "ends": ends_of_label(label),
        "label": label.render(),
    }
    if g.n and not g.is_connected():
        comps = [g.induced(c) for c in g.components()]
        labels = [qi_class_label(c) for c in comps]
        doc["components"] = [
            {"vertices": vsorted(c.vertices), "label": lab.render()}
            for c, lab in zip(comps, labels)
        ]
        doc["normalForm"] = free_product_nf(labels).render()
        return doc
    if doc["ends"] != "one":
        return doc
    doc["treeGraded"] = detect_n_clique_tree_graded(g)
    doc["dovetail"] = dovetail_status(g)
    doc["stretchLedger"] = stretch_ledger(g)
    if g.n < 3:
        return doc
    gog = build_jsj(g)
    doc["jsj"] = json.loads(export_json(gog))
    doc["multiplicities"] = {
        e.id: {
            "cylinder": _mult(edge_multiplicity(gog, e.cylinder, e.id)),
            "rigid": _mult(edge_multiplicity(gog, e.rigid, e.id)),
        }
        for e in gog.edges
    }
    doc["cylinders"] = []
    for w in sorted(gog.cylinders(), key=lambda v: v.id):
        blocks = cylinder_blocks(g, w.cut_vertex)
        doc["cylinders"].append({
            "cut": w.cut_vertex,
            "group": cylinder_group_str(g, w.cut_vertex),
            "peripheral": [
                {"piece": list(piece), "rigid": list(owner)}
                for piece, owner in blocks.peripheral
            ],
            "nonPeripheral": [
                {"piece": list(piece),
                 "label": qi_class_label(g.induced(piece)).render()}
                for piece in blocks.non_peripheral
            ],
        })
    if verbose:
        dec, _, _ = refine_to_fixpoint(naive_decoration(gog))
        doc["ornaments"] = json.loads(dec.to_json())
        doc["structureInvariant"] = json.loads(
            structure_invariant(dec).to_json())
    return doc


def _analysis_text(doc):
    g = doc["graph"]
    lines = [
        "graph: %d vertices, %d edges" % (len(g["vertices"]), len(g["edges"])),
        "ends: %s" % doc["ends"],
        "qi class: %s" % doc["label"],
    ]
    if "components" in doc:
        lines.append("components:")
        for c in doc["components"]:
            lines.append("  {%s}: %s" % (",".join(c["vertices"]), c["label"]))
        lines.append("free product normal form: %s" % doc["normalForm"])
        return lines
    if "treeGraded" in doc:
        n = doc["treeGraded"]
        lines.append("tree-graded: %s" % ("%d-clique" % n if n else "no"))
    if "jsj" in doc:
        j = doc["jsj"]
        if j["trivial"]:
            lines.append("tree of cylinders: trivial (a single piece)")
        else:
            kinds = [v["kind"] for v in j["vertices"]]
            lines.append(
                "tree of cylinders: %d cylinders, %d rigid pieces, %d edges"
                % (kinds.count("cylinder"), kinds.count("rigid"),
                   len(j["edges"])))
        for v in j["vertices"]:
            lines.append("  %-14s %-8s {%s}"
                         % (v["id"], v["kind"], ",".join(v["subgraph"])))
        for e in j["edges"]:
            mult = doc["multiplicities"][e["id"]]
            lines.append(
                "  %s -- %s over {%s} (multiplicity %s at the cylinder, "
                "%s at the rigid)"
                % (e["cylinder"], e["rigid"], ",".join(e["subgraph"]),
                   mult["cylinder"], mult["rigid"]))
        for c in doc.get("cylinders", []):
            lines.append("cylinder at %s: %s" % (c["cut"], c["group"]))
            for p in c["peripheral"]:
                lines.append("  peripheral {%s} in rigid {%s}"
                             % (",".join(p["piece"]), ",".join(p["rigid"])))
            for p in c["nonPeripheral"]:
                lines.append("  non-peripheral {%s}: %s"
                             % (",".join(p["piece"]), p["label"]))
    if doc.get("stretchLedger"):
        lines.append("stretch ledger:")
        for block in sorted(doc["stretchLedger"]):
            entry = doc["stretchLedger"][block]
            per_vertex = " ".join(
                "%s=%s" % (v, entry["stretch"][v])
                for v in sorted(entry["stretch"]))
            lines.append("  block {%s}: base %d vertices, %d steps, %s"
                         % (block.replace("|", ","), entry["baseVertices"],
                            entry["steps"], per_vertex))
    if "dovetail" in doc:
        lines.append("dovetail: %s" % doc["dovetail"])
    if "structureInvariant" in doc:
        lines.append("structure invariant:")
        inv = doc["structureInvariant"]
        lines.append("  ornaments: %s" % " ".join(inv["ornaments"]))
        for orn, row in zip(inv["ornaments"], inv["matrix"]):
            lines.append("  %-14s %s" % (orn, " ".join(str(x) for x in row)))
    return lines


def cmd_analyze(path, fmt="text", verbose=False, figures=None, oracle=False,
                max_vertices=32):
    """Analysis report for one defining graph, rendered as requested."""
    g = _load_graph(path, max_vertices)
    doc = _analyze_doc(g, verbose=verbose)
    extra = []
    if oracle:
        extra.append(_oracle_checks([g]))
    if figures is not None:
        from . import viz
        outdir = Path(figures)
        outdir.mkdir(parents=True, exist_ok=True)
        made = [str(viz.render_graph(g, outdir / "graph.png"))]
        if "jsj" in doc:
            gog = build_jsj(g)
            made.append(str(viz.render_gog(gog, outdir / "tree.png")))
        doc["figures"] = made
        extra.append("figures: %s" % " ".join(made))
    if fmt == "json":
        if oracle:
            doc["oracleChecks"] = "passed"
        return json.dumps(doc, indent=2, sort_keys=True)
    if fmt == "dot":
        if "jsj" not in doc:
            raise GraphError("no tree of cylinders to export for %s" % path)
        return export_dot(build_jsj(g))
    return "\n".join(_analysis_text(doc) + extra)


# --------------------------------------------------------------------------
# compare


def _compare_text(verdict):
    lines = ["verdict: %s" % verdict.tag]
    for w in verdict.witnesses:
        lines.append("witness: %s" % w)
    eq = verdict.report.get("equal", {})
    for stage in ("naive", "embellished"):
        if stage in eq:
            lines.append("%s comparison equal: %s"
                         % (stage, "yes" if eq[stage] else "no"))
    if "stretchSets" in verdict.report:
        for side in ("A", "B"):
            sets = verdict.report["stretchSets"][side]
            rendered = "; ".join(
                "%s: {%s}" % (base, ",".join(str(r) for r in sets[base]))
                for base in sorted(sets))
            lines.append("stretch multisets %s: %s" % (side, rendered))
    if "dovetail" in verdict.report:
        dov = verdict.report["dovetail"]
        lines.append("dovetail: A=%s B=%s" % (dov["A"], dov["B"]))
    return lines


def cmd_compare(path_a, path_b, fmt="text", figures=None, oracle=False,
                max_vertices=32):
    """Compare two defining graphs; returns (rendered report, verdict)."""
    a = _load_graph(path_a, max_vertices)
    b = _load_graph(path_b, max_vertices)
    verdict = compare(a, b)
    extra = []
    if oracle:
        extra.append(_oracle_checks([a, b]))
        verdict.report["oracleChecks"] = "passed"
    if figures is not None:
        from . import viz
        outdir = Path(figures)
        outdir.mkdir(parents=True, exist_ok=True)
        made = [
            str(viz.render_graph(a, outdir / "graph-a.png", "graph A")),
            str(viz.render_graph(b, outdir / "graph-b.png", "graph B")),
        ]
        for tag, g in (("a", a), ("b", b)):
            if g.n >= 3 and g.is_connected():
                made.append(str(viz.render_gog(
                    build_jsj(g), outdir / ("tree-%s.png" % tag),
                    "tree of cylinders %s" % tag.upper())))
        verdict.report["figures"] = made
        extra.append("figures: %s" % " ".join(made))
    if fmt == "json":
        return verdict.to_json(), verdict
    if fmt == "dot":
        parts = []
        for tag, g in (("A", a), ("B", b)):
            if g.n < 3 or not g.is_connected():
                raise GraphError("no tree of cylinders to export for %s" % tag)
            parts.append(export_dot(build_jsj(g)).replace(
                "tree_of_cylinders", "tree_of_cylinders_%s" % tag, 1))
        return "\n".join(parts), verdict
    return "\n".join(_compare_text(verdict) + extra), verdict


# --------------------------------------------------------------------------
# enumerate


def _atlas_connected(n):
    import networkx as nx

    out = []
    for G in nx.graph_atlas_g():
        if G.number_of_nodes() != n:
            continue
        if n >= 2 and not nx.is_connected(G):
            continue
        out.append(G)
    return out


def cmd_enumerate(n, fmt="text"):
    """Classify all connected graphs on n vertices up to isomorphism."""
    if not 1 <= n <= 10:
        raise GraphError("enumeration bound is between 1 and 10")
    if n > 7:
        raise GraphError(
            "the bundled graph atlas stops at seven vertices; %d exceeds it"
            % n)
    from .graphs import SimplicialGraph

    graphs = []
    for G in _atlas_connected(n):
        graphs.append(SimplicialGraph(
            [str(v) for v in sorted(G.nodes)],
            [(str(u), str(v)) for u, v in sorted(map(sorted, G.edges))]))
    names = ["g%03d" % i for i in range(len(graphs))]
    result = classify_corpus(graphs, names)
    rows = []
    for name, g in zip(names, graphs):
        trivial = "-"
        if g.n >= 3:
            label = qi_class_label(g)
            if ends_of_label(label) == "one":
                trivial = "yes" if build_jsj(g).trivial else "no"
        rows.append({
            "name": name,
            "edges": " ".join("%s-%s" % tuple(sorted(e)) for e in
                              sorted(map(sorted, g.edges()))) or "-",
            "label": qi_class_label(g).render(),
            "trivialJsj": trivial,
        })
    if fmt == "json":
        return json.dumps({
            "n": n,
            "count": len(graphs),
            "graphs": rows,
            "classes": result["classes"],
            "verdicts": result["verdicts"],
            "unknownPairs": result["unknownPairs"],
        }, indent=2, sort_keys=True)
    lines = ["connected graphs on %d vertices: %d" % (n, len(graphs))]
    for row in rows:
        lines.append("  %s: %s | %s | trivial JSJ: %s"
                     % (row["name"], row["edges"], row["label"],
                        row["trivialJsj"]))
    lines.append("provably equivalent classes: %d" % len(result["classes"]))
    for i, cls in enumerate(result["classes"], start=1):
        lines.append("  class %d: %s" % (i, " ".join(cls)))
    lines.append("unknown pairs: %d" % len(result["unknownPairs"]))
    for pair in result["unknownPairs"]:
        lines.append("  %s vs %s" % tuple(pair))
    return "\n".join(lines)


# --------------------------------------------------------------------------
# argument parsing and entry point


def _parser():
    p = argparse.ArgumentParser(
        prog="raagqi",
        description="Quasi-isometry invariants of right-angled Artin groups")
    p.add_argument("--format", choices=("text", "json", "dot"),
                   default="text", dest="fmt")
    p.add_argument("--out", metavar="PATH", help="write output to a file")
    p.add_argument("--max-vertices", type=int, default=32, metavar="N")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force oracles")
    p.add_argument("--figures", metavar="DIR",
                   help="render input graphs and trees as png files")
    p.add_argument("--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    pa = sub.add_parser("analyze", help="analyze one defining graph")
    pa.add_argument("path")
    pc = sub.add_parser("compare", help="compare two defining graphs")
    pc.add_argument("path_a")
    pc.add_argument("path_b")
    pe = sub.add_parser("enumerate",
                        help="classify all connected graphs on n vertices")
    pe.add_argument("n", type=int)
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    cfg = CliConfig(
        command=args.command,
        fmt=args.fmt,
        verbose=args.verbose,
        out=args.out,
        figures=args.figures,
        oracle=args.oracle,
        max_vertices=args.max_vertices,
    )
    code = 0
    try:
        if cfg.command == "analyze":
            text = cmd_analyze(args.path, fmt=cfg.fmt, verbose=cfg.verbose,
                               figures=cfg.figures, oracle=cfg.oracle,
                               max_vertices=cfg.max_vertices)
        elif cfg.command == "compare":
            text, verdict = cmd_compare(
                args.path_a, args.path_b, fmt=cfg.fmt, figures=cfg.figures,
                oracle=cfg.oracle, max_vertices=cfg.max_vertices)
            code = verdict.exit_code
        else:
            text = cmd_enumerate(args.n, fmt=cfg.fmt)
    except (GraphError, ParseError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return code
