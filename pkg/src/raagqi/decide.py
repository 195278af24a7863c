"""Quasi-isometry verdicts for pairs and corpora of defining graphs.

The comparison pipeline is sound in one direction only: NotQI verdicts
(NotWeaklyEquivalent, WeaklyEquivalentNotEquivalent) are unconditional
claims, while the positive verdict EquivalentAndQI additionally
requires both groups to pass the known-dovetail gate.  Everything in
between is reported as Unknown or EquivalentDovetailUnknown, never
guessed.
"""

import json
import re
from collections import Counter
from dataclasses import dataclass

from .decorations import (
    embellish,
    naive_decoration,
    refine_to_fixpoint,
    strip_relstr,
    structure_invariant,
)
from .graphs import (
    GraphError,
    cut_vertices,
    maximal_biconnected_subgraphs,
)
from .jsj import build_jsj, cylinder_blocks
from .labels import (
    FreeNonAbelian,
    FreeProductNormalForm,
    QiClassLabel,
    TwoEnded,
    compare_labels,
    ends_of_label,
)
from .raags import dovetail_status, qi_class_label, reduce_to_finite_out_base

GATE_NOTE = ("positive verdicts use a symmetric gate (both groups known "
             "dovetail); one side would suffice for the underlying "
             "equivalence-implies-qi statement")
CONVENTION_NOTE = ("structure invariant convention: (vertex,edge) counts "
                   "incident edge lifts, (vertex,vertex) counts neighbour "
                   "lifts, (edge,vertex) counts endpoints, (edge,edge) is 0; "
                   "infinite counts render as inf")


# --------------------------------------------------------------------------
# free products: normal forms and move certificates


def free_product_nf(labels):
    """Normal form of the free product of the labelled groups."""
    return FreeProductNormalForm.from_labels(labels)


@dataclass(frozen=True)
class Factor:
    """A free-product factor: a display name plus its qi-class label."""

    display: str
    label: QiClassLabel

    def to_json(self):
        return {"factor": self.display, "class": self.label.render()}


def as_factor(x):
    if isinstance(x, Factor):
        return x
    return Factor(x.render(), x)


@dataclass(frozen=True)
class TypeI:
    """Duplicate a factor, or merge it into a remaining equal-class one."""

    action: str  # "duplicate" | "merge"
    factor: Factor

    def to_json(self):
        return {"move": "I", "action": self.action, **self.factor.to_json()}


@dataclass(frozen=True)
class TypeII:
    """Replace a factor by a quasi-isometric one (same class label)."""

    source: Factor
    target: Factor

    def to_json(self):
        return {"move": "II", "from": self.source.display,
                "to": self.target.display, "class": self.source.label.render()}


@dataclass(frozen=True)
class TypeIII:
    """Add or remove a two-ended factor.  A free factor stands for the
    usual combination of one type III and finitely many type I moves,
    so it is allowed here as well."""

    action: str  # "add" | "remove"
    factor: Factor

    def to_json(self):
        return {"move": "III", "action": self.action, **self.factor.to_json()}


def _free_kind(label):
    return isinstance(label, (TwoEnded, FreeNonAbelian))


def move_certificate(src, dst):
    """Move sequence taking the source factor multiset to the target
    one, or None when their normal forms differ.  Identical multisets
    get the empty certificate.

    Emitted order (replacements, duplications, additions, merges,
    removals) keeps every intermediate product in the shared normal
    form, so ends never degenerate mid-replay.
    """
    sf = [as_factor(x) for x in src]
    df = [as_factor(x) for x in dst]
    nfa = free_product_nf([f.label for f in sf])
    nfb = free_product_nf([f.label for f in df])
    if nfa.sound_vs(nfb) != "equal":
        return None
    if Counter(sf) == Counter(df):
        return []
    replacements = []
    duplications = []
    additions = []
    merges = []
    removals = []
    by_label = {}
    for f in sf:
        by_label.setdefault(f.label, ([], []))[0].append(f)
    for f in df:
        by_label.setdefault(f.label, ([], []))[1].append(f)
    for label in sorted(by_label, key=lambda l: l.sort_key()):
        ours, theirs = by_label[label]
        # keep factors whose display already matches, pair up the rest
        ours_left = list(ours)
        theirs_left = list(theirs)
        for f in list(ours_left):
            if f in theirs_left:
                ours_left.remove(f)
                theirs_left.remove(f)
        for a, b in zip(list(ours_left), list(theirs_left)):
            replacements.append(TypeII(a, b))
            ours_left.remove(a)
            theirs_left.remove(b)
        if _free_kind(label):
            additions += [TypeIII("add", f) for f in theirs_left]
            removals += [TypeIII("remove", f) for f in ours_left]
        else:
            duplications += [TypeI("duplicate", f) for f in theirs_left]
            merges += [TypeI("merge", f) for f in ours_left]
    return replacements + duplications + additions + merges + removals


def replay_moves(src, moves):
    """Apply a move sequence to a factor multiset; raises GraphError on
    an inapplicable move.  Returns the resulting multiset as a Counter."""
    state = Counter(as_factor(x) for x in src)

    def take(f):
        if state[f] <= 0:
            raise GraphError("move needs factor %s, not present" % f.display)
        state[f] -= 1
        if state[f] == 0:
            del state[f]

    for mv in moves:
        if isinstance(mv, TypeII):
            if compare_labels(mv.source.label, mv.target.label) != "equal":
                raise GraphError("type II move across different classes")
            take(mv.source)
            state[mv.target] += 1
        elif isinstance(mv, TypeI):
            if mv.action == "duplicate":
                if not any(f.label == mv.factor.label for f in state):
                    raise GraphError("duplicate of absent class")
                state[mv.factor] += 1
            else:
                take(mv.factor)
                if not any(f.label == mv.factor.label for f in state):
                    raise GraphError("merge removed the last factor of its class")
        elif isinstance(mv, TypeIII):
            if not _free_kind(mv.factor.label):
                raise GraphError("type III move on a one-ended factor")
            if mv.action == "add":
                state[mv.factor] += 1
            else:
                take(mv.factor)
        else:
            raise GraphError("unknown move %r" % (mv,))
    return state


# --------------------------------------------------------------------------
# clique tree-graded detection


def detect_n_clique_tree_graded(g):
    """The unique n >= 2 for which g is an n-clique tree-graded graph,
    or None.  Requires diameter at least three, every vertex a cut
    vertex or of valence one, and every block either an all-cut-vertex
    n-clique or a pendant edge."""
    if g.n < 4 or not g.is_connected():
        return None
    cuts = set(cut_vertices(g))
    if not cuts:
        return None
    for v in g.vertices:
        if v not in cuts and g.degree(v) != 1:
            return None
    if g.diameter() < 3:
        return None
    size = None
    for block in maximal_biconnected_subgraphs(g):
        if not g.induced(block).is_clique():
            return None
        in_cut = sum(1 for u in block if u in cuts)
        if len(block) == 2 and in_cut == 1:
            continue
        if in_cut != len(block):
            return None
        if size is not None and size != len(block):
            return None
        size = len(block)
    return size


# --------------------------------------------------------------------------
# human-readable class descriptions for witnesses


def raag_str(g):
    """Symbolic name of the group of g for small pieces; falls back to
    listing the vertex set."""
    if g.n == 0:
        return "1"
    if g.is_clique():
        return "Z" if g.n == 1 else "Z^%d" % g.n
    if g.m == 0:
        return "F%d" % g.n
    if not g.is_connected():
        return " * ".join(sorted(raag_str(g.induced(c)) for c in g.components()))
    return "A(%s)" % ",".join(g.vertices)


def cylinder_group_str(source, v):
    """Render the cylinder group at a cut vertex v as Z x (block groups)."""
    blocks = cylinder_blocks(source, v)
    pieces = [p for p, _ in blocks.peripheral] + list(blocks.non_peripheral)
    parts = sorted(raag_str(source.induced(p)) for p in pieces)
    return "Z x (%s)" % " * ".join(parts)


def _describe_token(gog, dec, token):
    for v in gog.vertices:
        if dec.vertex_tokens[v.id] == token:
            if v.kind == "cylinder":
                return "cylinder class %s ~ %s (star of %s)" % (
                    token, cylinder_group_str(gog.source, v.cut_vertex),
                    v.cut_vertex)
            lab = qi_class_label(gog.source.induced(v.subgraph))
            return "rigid class %s ~ %s on {%s}" % (
                token, lab.render(), ",".join(v.subgraph))
    for e in gog.edges:
        if dec.edge_tokens[e.id] == token:
            lab = qi_class_label(gog.source.induced(e.subgraph))
            return "edge class %s ~ %s" % (token, lab.render())
    return "class %s" % token


# --------------------------------------------------------------------------
# verdicts


TAGS = ("EquivalentAndQI", "EquivalentDovetailUnknown",
        "WeaklyEquivalentNotEquivalent", "NotWeaklyEquivalent", "Unknown")

_EXIT = {"EquivalentAndQI": 0,
         "EquivalentDovetailUnknown": 3,
         "WeaklyEquivalentNotEquivalent": 1,
         "NotWeaklyEquivalent": 1,
         "Unknown": 3}


class Verdict:
    """Comparison outcome: a tag, witness strings and the full report."""

    def __init__(self, tag, witnesses, report):
        if tag not in TAGS:
            raise GraphError("unknown verdict tag %r" % tag)
        self.tag = tag
        self.witnesses = list(witnesses)
        report = dict(report)
        report["verdict"] = tag
        report["witnesses"] = self.witnesses
        report.setdefault("notes", [GATE_NOTE, CONVENTION_NOTE])
        self.report = report

    @property
    def exit_code(self):
        return _EXIT[self.tag]

    @property
    def not_qi(self):
        return self.tag in ("WeaklyEquivalentNotEquivalent",
                            "NotWeaklyEquivalent")

    def to_json(self):
        return json.dumps(self.report, indent=2, sort_keys=True)

    def __repr__(self):
        return "Verdict(%s)" % self.tag


def _im_sets(dec):
    return (frozenset(dec.vertex_tokens.values()),
            frozenset(dec.edge_tokens.values()))


def _inv_json(inv):
    return json.loads(inv.to_json())


def stretch_ledger(g):
    """Per-block doubling data: base size and exact per-vertex stretch."""
    out = {}
    for block in maximal_biconnected_subgraphs(g):
        if len(block) < 3:
            continue
        sub = g.induced(block)
        ledger = reduce_to_finite_out_base(sub)
        if ledger is None:
            continue
        table = ledger.stretch_table()
        out["|".join(block)] = {
            "baseVertices": len(ledger.base.vertices),
            "steps": len(ledger.steps),
            "stretch": {v: str(table[v]) for v in sorted(table)},
        }
    return out


def _mismatch_witnesses(ga, gb, da, db, inva, invb):
    """Witness strings for a failed ornament-table match."""
    va, ea = _im_sets(da)
    vb, eb = _im_sets(db)
    out = []
    for t in sorted(va - vb) + sorted(ea - eb):
        out.append(_describe_token(ga, da, t) + ", present only in A")
    for t in sorted(vb - va) + sorted(eb - ea):
        out.append(_describe_token(gb, db, t) + ", present only in B")
    if not out and inva != invb:
        for i, orn in enumerate(inva.ornaments):
            for j, other in enumerate(inva.ornaments):
                if inva.matrix[i][j] != invb.matrix[i][j]:
                    out.append(
                        "adjacency count at (%s, %s): %s vs %s" % (
                            orn, other, inva.matrix[i][j], invb.matrix[i][j]))
                    return out
    return out


def _relstr_sets(dec):
    """Sorted stretch-ratio lists of the embellished edge tokens, per
    underlying naive edge class.  Refinement suffixes minted after the
    stretch annotation are ignored."""
    out = {}
    for e in dec.gog.edges:
        tok = dec.edge_tokens[e.id]
        base = strip_relstr(tok)
        m = re.search(r"~s(\d+/\d+)", tok)
        out.setdefault(base, []).append(m.group(1) if m else None)
    return {base: sorted(rs, key=str) for base, rs in out.items()}


def _grushko_rel(ca, cb, memo):
    """Three-valued qi comparison of two connected component graphs."""
    key = (ca, cb)
    if key in memo:
        return memo[key]
    verdict = compare_labels(qi_class_label(ca), qi_class_label(cb))
    if verdict == "unknown":
        sub = compare(ca, cb)
        if sub.tag == "EquivalentAndQI":
            verdict = "equal"
        elif sub.not_qi:
            verdict = "different"
    memo[key] = verdict
    memo[(cb, ca)] = verdict
    return verdict


def _compare_grushko(g, h, report):
    """Compare two infinitely-ended (disconnected) defining graphs by
    the sets of quasi-isometry types of their one-ended factors."""
    comps_a = [g.induced(c) for c in g.components()]
    comps_b = [h.induced(c) for c in h.components()]
    la = [qi_class_label(c) for c in comps_a]
    lb = [qi_class_label(c) for c in comps_b]
    nfa = free_product_nf(la)
    nfb = free_product_nf(lb)
    report["normalForms"] = {"A": nfa.render(), "B": nfb.render()}
    quick = nfa.sound_vs(nfb)
    if quick == "equal":
        cert = move_certificate(la, lb)
        report["certificates"] = [mv.to_json() for mv in cert]
        return Verdict("EquivalentAndQI",
                       ["free-product normal forms agree: %s" % nfa.render()],
                       report)
    if quick == "different":
        return Verdict(
            "NotWeaklyEquivalent",
            ["free-product normal forms differ: %s vs %s"
             % (nfa.render(), nfb.render())],
            report)
    # some factor classes are only distinguishable by the full pipeline
    memo = {}
    ends_a = [c for c in comps_a if c.n >= 2]
    ends_b = [c for c in comps_b if c.n >= 2]
    reps_a = list({qi_class_label(c): c for c in ends_a}.values())
    reps_b = list({qi_class_label(c): c for c in ends_b}.values())
    undecided = False
    for side, (xs, ys, gx) in enumerate(
            ((reps_a, reps_b, "A"), (reps_b, reps_a, "B"))):
        for c in xs:
            rels = [_grushko_rel(c, d, memo) for d in ys]
            if any(r == "equal" for r in rels):
                continue
            if all(r == "different" for r in rels):
                return Verdict(
                    "NotWeaklyEquivalent",
                    ["one-ended factor %s of %s has no counterpart"
                     % (raag_str(c), gx)],
                    report)
            undecided = True
    if undecided:
        return Verdict("Unknown",
                       ["free-product factor comparison undecided"], report)
    return Verdict("EquivalentAndQI",
                   ["one-ended factor classes match in both directions"],
                   report)


def compare(g, h):
    """Decide whether the groups of g and h are quasi-isometric, as far
    as the implemented invariants allow."""
    report = {
        "inputs": {"A": _graph_doc(g), "B": _graph_doc(h)},
        "certificates": [],
        "completenessFlags": {},
        "ornamentTables": {},
        "structureInvariants": {},
        "stretchLedgers": {},
    }
    ends_a = ends_of_label(qi_class_label(g))
    ends_b = ends_of_label(qi_class_label(h))
    report["ends"] = {"A": ends_a, "B": ends_b}
    if ends_a != ends_b:
        return Verdict("NotWeaklyEquivalent",
                       ["number of ends differs (%s vs %s)" % (ends_a, ends_b)],
                       report)
    if ends_a == "infinite":
        return _compare_grushko(g, h, report)
    if ends_a in ("none", "two"):
        return Verdict("EquivalentAndQI",
                       ["both groups are %s" %
                        ("trivial" if ends_a == "none" else "two-ended")],
                       report)

    # both one-ended from here on
    na = detect_n_clique_tree_graded(g)
    nb = detect_n_clique_tree_graded(h)
    report["treeGraded"] = {"A": na, "B": nb}
    if na is not None and nb is not None:
        if na == nb:
            return Verdict(
                "EquivalentAndQI",
                ["both graphs are %d-clique tree-graded" % na], report)
        return Verdict(
            "NotWeaklyEquivalent",
            ["tree-graded clique sizes differ (%d vs %d)" % (na, nb)], report)

    ga = build_jsj(g) if g.n >= 3 else None
    gb = build_jsj(h) if h.n >= 3 else None
    ta = ga is None or ga.trivial
    tb = gb is None or gb.trivial
    report["trivialJsj"] = {"A": ta, "B": tb}
    if ta != tb:
        return Verdict(
            "NotWeaklyEquivalent",
            ["JSJ tree of cylinders is a point for %s but not for %s"
             % (("A", "B") if ta else ("B", "A"))],
            report)
    if ta:
        la, lb = qi_class_label(g), qi_class_label(h)
        report["labels"] = {"A": la.render(), "B": lb.render()}
        verdict = compare_labels(la, lb)
        if verdict == "equal":
            return Verdict("EquivalentAndQI",
                           ["whole-group classes agree: %s" % la.render()],
                           report)
        if verdict == "different":
            return Verdict("NotWeaklyEquivalent",
                           ["whole-group classes differ: %s vs %s"
                            % (la.render(), lb.render())],
                           report)
        return Verdict("Unknown",
                       ["trivial JSJ, classes not comparable: %s vs %s"
                        % (la.render(), lb.render())],
                       report)

    report["stretchLedgers"] = {"A": stretch_ledger(g), "B": stretch_ledger(h)}
    decs = naive_decoration(ga, gb)
    (da, db), trace, clean_fix = refine_to_fixpoint(decs)
    inva, invb = structure_invariant(da), structure_invariant(db)
    report["ornamentTables"]["naive"] = {
        "A": json.loads(da.to_json()), "B": json.loads(db.to_json())}
    report["structureInvariants"]["naive"] = {
        "A": _inv_json(inva), "B": _inv_json(invb)}
    report["refinementTrace"] = trace
    report["completenessFlags"]["naiveFixpointClean"] = clean_fix
    naive_equal = _im_sets(da) == _im_sets(db) and inva == invb
    report["equal"] = {"naive": naive_equal}
    if not naive_equal:
        return Verdict("NotWeaklyEquivalent",
                       _mismatch_witnesses(ga, gb, da, db, inva, invb), report)

    ea, ca = embellish(da)
    eb, cb = embellish(db)
    report["completenessFlags"]["embellishCleanA"] = ca
    report["completenessFlags"]["embellishCleanB"] = cb
    if not (ca and cb):
        return Verdict(
            "Unknown",
            ["stretch status undecided on some block; embellished "
             "comparison withheld"],
            report)
    (ea, eb), etrace, eclean = refine_to_fixpoint([ea, eb])
    einva, einvb = structure_invariant(ea), structure_invariant(eb)
    report["ornamentTables"]["embellished"] = {
        "A": json.loads(ea.to_json()), "B": json.loads(eb.to_json())}
    report["structureInvariants"]["embellished"] = {
        "A": _inv_json(einva), "B": _inv_json(einvb)}
    report["completenessFlags"]["embellishedFixpointClean"] = eclean
    sets_a, sets_b = _relstr_sets(ea), _relstr_sets(eb)
    report["stretchSets"] = {"A": sets_a, "B": sets_b}
    emb_equal = _im_sets(ea) == _im_sets(eb) and einva == einvb
    report["equal"]["embellished"] = emb_equal
    if not emb_equal:
        witnesses = []
        for base in sorted(set(sets_a) | set(sets_b)):
            ra, rb = sets_a.get(base), sets_b.get(base)
            if ra != rb:
                witnesses.append(
                    "relative stretch multiset on %s: %s vs %s"
                    % (base, ra, rb))
        witnesses += _mismatch_witnesses(ga, gb, ea, eb, einva, einvb)
        return Verdict("WeaklyEquivalentNotEquivalent", witnesses, report)

    dova, dovb = dovetail_status(g), dovetail_status(h)
    report["dovetail"] = {"A": dova, "B": dovb}
    if not (clean_fix and eclean):
        return Verdict(
            "Unknown",
            ["ornament comparison incomplete: some classes merged on "
             "undecidable relative comparisons"],
            report)
    if dova == "known-dovetail" and dovb == "known-dovetail":
        return Verdict("EquivalentAndQI",
                       ["equivalent embellished trees; both groups pass "
                        "the dovetail gate"],
                       report)
    return Verdict("EquivalentDovetailUnknown",
                   ["equivalent embellished trees; dovetail membership "
                    "unresolved"],
                   report)


def _graph_doc(g):
    return {"vertices": list(g.vertices),
            "edges": [list(e) for e in g.edges()]}


# --------------------------------------------------------------------------
# corpus classification


def classify_corpus(graphs, names=None):
    """Pairwise comparison of a list of graphs.

    Returns a dict with the partition into provably-equivalent classes
    (positive verdicts merge), the verdict of every pair, and the pairs
    left unknown."""
    if names is None:
        names = ["g%03d" % i for i in range(len(graphs))]
    if len(names) != len(graphs):
        raise GraphError("need one name per graph")
    parent = list(range(len(graphs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    verdicts = {}
    unknown_pairs = []
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            v = compare(graphs[i], graphs[j])
            verdicts["%s|%s" % (names[i], names[j])] = v.tag
            if v.tag in ("EquivalentAndQI", "EquivalentDovetailUnknown"):
                parent[find(i)] = find(j)
            elif not v.not_qi:
                unknown_pairs.append([names[i], names[j]])
    classes = {}
    for i, name in enumerate(names):
        classes.setdefault(find(i), []).append(name)
    ordered = sorted(classes.values(), key=lambda c: c[0])
    return {"classes": ordered,
            "verdicts": verdicts,
            "unknownPairs": unknown_pairs}
