"""Decorations on trees of cylinders and their refinement to a fixed point.

Vertices and edges of the quotient graph of groups carry ornaments:
opaque tokens minted from a pool shared by jointly decorated trees, so
token equality is meaningful across a pair.  The naive decoration sorts
vertices by kind and relative quasi-isometry class; neighbour refinement
splits on adjacent-ornament counts; vertex refinement splits on failed
relative comparisons.  Splits happen only on proven differences: pairs
we cannot decide stay merged and poison a completeness flag instead,
keeping any downstream "not quasi-isometric" verdict sound.
"""

import json
from dataclasses import dataclass, replace
from fractions import Fraction

from .graphs import GraphError, MarkedGraph, find_isomorphism
from .jsj import INF, cylinder_blocks, edge_multiplicity
from .labels import compare_labels
from .raags import (
    is_one_ended,
    qi_class_label,
    r_edge_status,
    reduce_to_finite_out_base,
)

# mark used for cut vertices before edges carry ornaments; distinct from
# the empty mark of non-cut vertices, which rel-QIs need not respect
NO_MARK = "-"


class TokenPool:
    """Mints ornament tokens deterministically.

    A single pool serves all decorations that must be comparable, so a
    split minted for the same parent and reason yields the same child
    token in both trees.  Vertex tokens start with "V", edge tokens with
    "E"; the two families never collide.
    """

    def __init__(self):
        self._fresh = {"V": 0, "E": 0}
        self._memo = {}
        self.provenance = {}

    def root(self, prefix, note):
        token = "%s%d" % (prefix, self._fresh[prefix])
        self._fresh[prefix] += 1
        self.provenance[token] = note
        return token

    def child(self, parent, key, note):
        if (parent, key) in self._memo:
            return self._memo[(parent, key)]
        n = sum(1 for (p, _) in self._memo if p == parent)
        token = "%s.%d" % (parent, n)
        self._memo[(parent, key)] = token
        self.provenance[token] = note
        return token

    def relstr(self, parent, ratio):
        token = "%s~s%d/%d" % (parent, ratio.numerator, ratio.denominator)
        self.provenance[token] = ("relstr", parent, str(ratio))
        return token


def strip_relstr(token):
    """Forget an appended relative stretch component, if any."""
    return token.split("~s", 1)[0]


@dataclass
class Decoration:
    gog: object
    vertex_tokens: dict  # gog vertex id -> token
    edge_tokens: dict  # gog edge id -> token
    pool: TokenPool
    generation: int = 0

    def token_of(self, item_id):
        if item_id in self.vertex_tokens:
            return self.vertex_tokens[item_id]
        return self.edge_tokens[item_id]

    def image(self):
        return frozenset(self.vertex_tokens.values()) | frozenset(
            self.edge_tokens.values())

    def to_json(self):
        return json.dumps(
            {
                "generation": self.generation,
                "vertices": self.vertex_tokens,
                "edges": self.edge_tokens,
            },
            indent=2,
            sort_keys=True,
        )


@dataclass(frozen=True)
class PeripheralSummary:
    """What a relative quasi-isometry must respect at one gog vertex.

    Cylinders: the set of (edge ornament, block label) pairs over the
    peripheral blocks, and the labels of one-ended non-peripheral
    blocks.  Two-ended and free non-peripheral factors are absorbed.
    Rigid vertices: the defining subgraph with each cut vertex marked by
    its tree edge's ornament.
    """

    kind: str
    peripheral: frozenset = frozenset()
    one_ended_np: frozenset = frozenset()
    has_unsound_labels: bool = False
    marked: MarkedGraph = None


def peripheral_summary(gog, vid, dec=None):
    vtx = gog.vertex(vid)
    g = gog.source
    if vtx.kind == "rigid":
        marks = {}
        for e in gog.edges_at(vid):
            w = gog.vertex(e.cylinder).cut_vertex
            marks[w] = dec.edge_tokens[e.id] if dec else NO_MARK
        return PeripheralSummary(
            "rigid", marked=MarkedGraph.make(g.induced(vtx.subgraph), marks))

    v = vtx.cut_vertex
    cb = cylinder_blocks(g, v)
    pairs = []
    unsound = False
    for piece, owner in cb.peripheral:
        edge = next(e for e in gog.edges_at(vid)
                    if gog.vertex(e.rigid).subgraph == owner)
        orn = dec.edge_tokens[edge.id] if dec else NO_MARK
        lbl = qi_class_label(g.induced(piece))
        unsound = unsound or not lbl.sound
        pairs.append((orn, lbl))
    one_ended = set()
    for piece in cb.non_peripheral:
        sub = g.induced(piece)
        if is_one_ended(sub):
            lbl = qi_class_label(sub)
            unsound = unsound or not lbl.sound
            one_ended.add(lbl)
    return PeripheralSummary("cylinder", frozenset(pairs), frozenset(one_ended),
                             unsound)


# -- strong relative comparison ---------------------------------------------


def strong_rel_qi_equal(a, b):
    """Three-valued relative quasi-isometry comparison of two gog
    vertices, each given as (gog, vertexId, PeripheralSummary).

    "equal" and "different" are proven; "unknown" is a refusal.
    """
    verdict, _ = _strong_cmp(a[2], b[2])
    return verdict


def _strong_cmp(sa, sb):
    if sa.kind != sb.kind:
        raise GraphError("cannot compare a %s with a %s" % (sa.kind, sb.kind))
    if sa.kind == "cylinder":
        return _cylinder_cmp(sa, sb)
    return _rigid_cmp(sa.marked, sb.marked)


def _pair_ok(p, q):
    return p[0] == q[0] and compare_labels(p[1], q[1]) != "different"


def _label_ok(x, y):
    return compare_labels(x, y) != "different"


def _unmatchable(xs, ys, ok):
    return (any(not any(ok(x, y) for y in ys) for x in xs)
            or any(not any(ok(x, y) for x in xs) for y in ys))


def _cylinder_cmp(sa, sb):
    if sa.peripheral == sb.peripheral and sa.one_ended_np == sb.one_ended_np:
        return "equal", "matching peripheral and non-peripheral factor sets"
    if _unmatchable(sa.peripheral, sb.peripheral, _pair_ok):
        return "different", "peripheral factor sets cannot correspond"
    if _unmatchable(sa.one_ended_np, sb.one_ended_np, _label_ok):
        return "different", "one-ended non-peripheral factor sets cannot correspond"
    return "unknown", "factor sets differ but are not provably distinct"


def _project_marks(marked, ledger):
    """Push cut-vertex marks down to the canonical base; None when two
    marked vertices land on the same base vertex."""
    proj = ledger.projection_to_base()
    out = {}
    hit = set()
    for v, mark in marked.mark_dict().items():
        if not mark:
            continue
        w = proj[v]
        if w in hit:
            return None
        hit.add(w)
        out[w] = mark
    return out


def _rigid_cmp(ma, mb):
    a, b = ma.graph, mb.graph
    if a.is_clique() and b.is_clique():
        if a.n == b.n and sorted(ma.mark_dict().values()) == sorted(
                mb.mark_dict().values()):
            return "equal", "equal rank and matching mark multisets"
        return "different", "free abelian rank or mark multiset mismatch"
    if a.is_clique() or b.is_clique():
        return "different", "free abelian against a non-abelian piece"
    la = reduce_to_finite_out_base(a)
    lb = reduce_to_finite_out_base(b)
    if la is not None and lb is not None:
        pa = _project_marks(ma, la)
        pb = _project_marks(mb, lb)
        if pa is None or pb is None:
            return "unknown", "marks collide under the doubling projection"
        if find_isomorphism(la.base, lb.base, marks_a=pa, marks_b=pb):
            return "equal", "mark-preserving isomorphism of canonical bases"
        return "different", "no mark-preserving isomorphism of canonical bases"
    if find_isomorphism(a, b, marks_a=ma.mark_dict(), marks_b=mb.mark_dict()):
        return "equal", "mark-preserving isomorphism of the defining subgraphs"
    if compare_labels(qi_class_label(a), qi_class_label(b)) == "different":
        return "different", "whole-group class labels differ"
    return "unknown", "outside the solved rigid families"


# -- naive decoration --------------------------------------------------------


def _components(items, related):
    """Connected components of `items` under the symmetric predicate
    `related`, in deterministic order."""
    remaining = list(items)
    comps = []
    while remaining:
        seed = remaining.pop(0)
        comp = [seed]
        changed = True
        while changed:
            changed = False
            for x in list(remaining):
                if any(related(x, y) for y in comp):
                    comp.append(x)
                    remaining.remove(x)
                    changed = True
        comps.append(comp)
    return comps


def naive_decoration(*gogs):
    """Initial decoration of one or two trees, tokens pooled.

    Vertices of the same kind share a token unless proven relatively
    different; edges share a token when their endpoints do and their
    defining subgraphs have non-distinct class labels.
    """
    pool = TokenPool()
    decs = [Decoration(gog, {}, {}, pool) for gog in gogs]

    summaries = {}
    for i, gog in enumerate(gogs):
        for v in gog.vertices:
            summaries[(i, v.id)] = peripheral_summary(gog, v.id)

    for kind in ("cylinder", "rigid"):
        items = [(i, v.id) for i, gog in enumerate(gogs)
                 for v in gog.vertices if v.kind == kind]
        rel = lambda x, y: _strong_cmp(summaries[x], summaries[y])[0] != "different"
        for comp in _components(items, rel):
            token = pool.root("V", ("naive", kind))
            for i, vid in comp:
                decs[i].vertex_tokens[vid] = token

    edge_items = [(i, e) for i, gog in enumerate(gogs) for e in gog.edges]
    cone = {}
    for i, e in edge_items:
        cone[(i, e.id)] = qi_class_label(gogs[i].source.induced(e.subgraph))

    def edge_rel(x, y):
        (i, e), (j, f) = x, y
        if decs[i].vertex_tokens[e.cylinder] != decs[j].vertex_tokens[f.cylinder]:
            return False
        if decs[i].vertex_tokens[e.rigid] != decs[j].vertex_tokens[f.rigid]:
            return False
        return compare_labels(cone[(i, e.id)], cone[(j, f.id)]) != "different"

    for comp in _components(edge_items, edge_rel):
        token = pool.root("E", ("naive", "edge"))
        for i, e in comp:
            decs[i].edge_tokens[e.id] = token

    return decs[0] if len(decs) == 1 else tuple(decs)


# -- neighbour refinement ----------------------------------------------------


def _vertex_count_key(dec, vid):
    gog = dec.gog
    counts = {}
    for e in gog.edges_at(vid):
        m = edge_multiplicity(gog, vid, e.id)
        et = dec.edge_tokens[e.id]
        counts[et] = counts.get(et, 0) + m
        other = e.rigid if vid == e.cylinder else e.cylinder
        ot = dec.vertex_tokens[other]
        counts[ot] = counts.get(ot, 0) + m
    return tuple(sorted(counts.items()))


def _edge_count_key(dec, e):
    counts = {}
    for vid in (e.cylinder, e.rigid):
        t = dec.vertex_tokens[vid]
        counts[t] = counts.get(t, 0) + 1
    return tuple(sorted(counts.items()))


def _count_json(key):
    return {t: ("inf" if c == INF else c) for t, c in key}


def _split_classes(groups, pool, prefix_note, trace, op, kind):
    """Given {parent: [(member, key), ...]}, split parents whose members
    show several keys.  Returns {member: token} for every member."""
    out = {}
    for parent in sorted(groups):
        members = groups[parent]
        keys = sorted({k for _, k in members})
        if len(keys) == 1:
            for m, _ in members:
                out[m] = parent
            continue
        assignment = {}
        for k in keys:
            token = pool.child(parent, (prefix_note, k), (op, parent))
            assignment[k] = token
        for m, k in members:
            out[m] = assignment[k]
        trace.append({
            "op": op,
            "kind": kind,
            "parent": parent,
            "reason": "count-mismatch",
            "children": {
                assignment[k]: {
                    "witness": _count_json(k),
                    "members": sorted("%d:%s" % m_ for m_, kk in members
                                      if kk == k),
                } for k in keys
            },
        })
    return out


def neighbour_refine(decs, trace=None):
    """Split ornament classes by adjacent-ornament counts, with edge
    multiplicities folded in.  Stable decorations come back unchanged."""
    decs, single = _normalize(decs)
    trace = [] if trace is None else trace

    vgroups = {}
    for i, dec in enumerate(decs):
        for v in dec.gog.vertices:
            key = _vertex_count_key(dec, v.id)
            vgroups.setdefault(dec.vertex_tokens[v.id], []).append(((i, v.id), key))
    vtok = _split_classes(vgroups, decs[0].pool, "nbr", trace, "neighbour", "vertex")

    egroups = {}
    for i, dec in enumerate(decs):
        for e in dec.gog.edges:
            key = _edge_count_key(dec, e)
            egroups.setdefault(dec.edge_tokens[e.id], []).append(((i, e.id), key))
    etok = _split_classes(egroups, decs[0].pool, "nbr", trace, "neighbour", "edge")

    out = []
    for i, dec in enumerate(decs):
        out.append(replace(
            dec,
            vertex_tokens={vid: vtok[(i, vid)] for vid in dec.vertex_tokens},
            edge_tokens={eid: etok[(i, eid)] for eid in dec.edge_tokens},
            generation=dec.generation + 1,
        ))
    return out[0] if single else tuple(out)


# -- vertex refinement -------------------------------------------------------


def _rigid_pair_carry(ma, va, mb, vb):
    """Can a relative quasi-isometry of the rigid pieces carry the cut
    vertex va to vb?"""
    a, b = ma.graph, mb.graph
    if a.is_clique() and b.is_clique():
        if a.n != b.n or sorted(ma.mark_dict().values()) != sorted(
                mb.mark_dict().values()):
            return "different"
        return "equal" if ma.mark_of(va) == mb.mark_of(vb) else "different"
    if a.is_clique() or b.is_clique():
        return "different"
    la = reduce_to_finite_out_base(a)
    lb = reduce_to_finite_out_base(b)
    if la is not None and lb is not None:
        pa = _project_marks(ma, la)
        pb = _project_marks(mb, lb)
        if pa is None or pb is None:
            return "unknown"
        pa = dict(pa)
        pb = dict(pb)
        wa = la.projection_to_base()[va]
        wb = lb.projection_to_base()[vb]
        pa[wa] = "pin|" + pa.get(wa, "")
        pb[wb] = "pin|" + pb.get(wb, "")
        if find_isomorphism(la.base, lb.base, marks_a=pa, marks_b=pb):
            return "equal"
        return "different"
    da = ma.mark_dict()
    db = mb.mark_dict()
    da[va] = "pin|" + da[va]
    db[vb] = "pin|" + db[vb]
    if find_isomorphism(a, b, marks_a=da, marks_b=db):
        return "equal"
    return "unknown"


def _edge_pair_cmp(ctx_a, ctx_b):
    """Compare two gog edges sharing an ornament: can relative
    quasi-isometries at both endpoints carry one onto the other?"""
    (dec_a, e) = ctx_a
    (dec_b, f) = ctx_b
    gog_a, gog_b = dec_a.gog, dec_b.gog
    va = gog_a.vertex(e.cylinder).cut_vertex
    vb = gog_b.vertex(f.cylinder).cut_vertex
    block_a = qi_class_label(
        gog_a.source.induced([u for u in e.subgraph if u != va]))
    block_b = qi_class_label(
        gog_b.source.induced([u for u in f.subgraph if u != vb]))

    if compare_labels(block_a, block_b) == "different":
        return "different"
    sa = peripheral_summary(gog_a, e.cylinder, dec_a)
    sb = peripheral_summary(gog_b, f.cylinder, dec_b)
    cyl = "unknown"
    if sa == sb and block_a == block_b:
        cyl = "equal"

    ra = peripheral_summary(gog_a, e.rigid, dec_a).marked
    rb = peripheral_summary(gog_b, f.rigid, dec_b).marked
    rig = _rigid_pair_carry(ra, va, rb, vb)
    if rig == "different":
        return "different"
    if cyl == "equal" and rig == "equal":
        return "equal"
    return "unknown"


def vertex_refine(decs, trace=None):
    """Split ornament classes on proven relative differences; undecided
    pairs stay merged and clear the completeness flag.

    Returns (decorations, clean) with `decorations` matching the input
    shape.
    """
    decs, single = _normalize(decs)
    trace = [] if trace is None else trace
    pool = decs[0].pool
    clean = True

    summaries = {}
    for i, dec in enumerate(decs):
        for v in dec.gog.vertices:
            summaries[(i, v.id)] = peripheral_summary(dec.gog, v.id, dec)

    vgroups = {}
    for i, dec in enumerate(decs):
        for v in dec.gog.vertices:
            vgroups.setdefault(dec.vertex_tokens[v.id], []).append((i, v.id))

    vtok = {}
    for parent in sorted(vgroups):
        members = vgroups[parent]
        verdicts = {}
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                v, _ = _strong_cmp(summaries[members[x]], summaries[members[y]])
                verdicts[(members[x], members[y])] = v

        def rel(a, b):
            return verdicts.get((a, b), verdicts.get((b, a))) != "different"

        comps = _components(members, rel)
        for comp in comps:
            for x in range(len(comp)):
                for y in range(x + 1, len(comp)):
                    v = verdicts.get((comp[x], comp[y]),
                                     verdicts.get((comp[y], comp[x])))
                    if v != "equal":
                        clean = False
        if len(comps) == 1:
            for m in members:
                vtok[m] = parent
            continue
        for idx, comp in enumerate(sorted(comps, key=lambda c: sorted(c))):
            token = pool.child(parent, ("vtx", idx), ("vertex", parent))
            for m in comp:
                vtok[m] = token
        rep = {}
        for comp in comps:
            for other in comps:
                if other is comp:
                    continue
                _, why = _strong_cmp(summaries[comp[0]], summaries[other[0]])
                rep.setdefault(vtok[comp[0]], why)
        trace.append({
            "op": "vertex",
            "kind": "vertex",
            "parent": parent,
            "reason": "relative-comparison",
            "children": {
                vtok[comp[0]]: {
                    "members": sorted("%d:%s" % m for m in comp),
                    "witness": rep[vtok[comp[0]]],
                } for comp in comps
            },
        })

    egroups = {}
    for i, dec in enumerate(decs):
        for e in dec.gog.edges:
            egroups.setdefault(dec.edge_tokens[e.id], []).append((i, e))
    etok = {}
    for parent in sorted(egroups):
        members = egroups[parent]
        verdicts = {}
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                ia, ea = members[x]
                ib, eb = members[y]
                v = _edge_pair_cmp((decs[ia], ea), (decs[ib], eb))
                verdicts[(x, y)] = v

        def erel(a, b):
            ax, bx = members.index(a), members.index(b)
            return verdicts.get((min(ax, bx), max(ax, bx))) != "different"

        comps = _components(members, erel)
        for comp in comps:
            for x in range(len(comp)):
                for y in range(x + 1, len(comp)):
                    ax = members.index(comp[x])
                    bx = members.index(comp[y])
                    if verdicts.get((min(ax, bx), max(ax, bx))) != "equal":
                        clean = False
        if len(comps) == 1:
            for m in members:
                etok[(m[0], m[1].id)] = parent
            continue
        ordered = sorted(comps, key=lambda c: sorted((i, e.id) for i, e in c))
        for idx, comp in enumerate(ordered):
            token = pool.child(parent, ("evtx", idx), ("vertex", parent))
            for i, e in comp:
                etok[(i, e.id)] = token
        trace.append({
            "op": "vertex",
            "kind": "edge",
            "parent": parent,
            "reason": "no-carrying-matching",
            "children": {
                etok[(comp[0][0], comp[0][1].id)]: {
                    "members": sorted("%d:%s" % (i, e.id) for i, e in comp),
                } for comp in ordered
            },
        })

    out = []
    for i, dec in enumerate(decs):
        out.append(replace(
            dec,
            vertex_tokens={vid: vtok[(i, vid)] for vid in dec.vertex_tokens},
            edge_tokens={eid: etok[(i, eid)] for eid in dec.edge_tokens},
            generation=dec.generation + 1,
        ))
    return (out[0] if single else tuple(out)), clean


def _normalize(decs):
    if isinstance(decs, Decoration):
        return [decs], True
    return list(decs), False


def _token_state(decs):
    return [(dec.vertex_tokens, dec.edge_tokens) for dec in decs]


def refine_to_fixpoint(decs):
    """Alternate neighbour and vertex refinement until neither splits.

    Returns (decorations, trace, clean): the trace lists every split
    with a witness, and clean is False when undecidable pairs remain
    merged at the fixed point.
    """
    decs, single = _normalize(decs)
    bound = sum(len(d.gog.vertices) + len(d.gog.edges) for d in decs) + 1
    trace = []
    clean = True
    for _ in range(bound):
        before = _token_state(decs)
        decs = list(_always_tuple(neighbour_refine(decs, trace)))
        decs_v, clean = vertex_refine(decs, trace)
        decs = list(_always_tuple(decs_v))
        if _token_state(decs) == before:
            break
    else:
        raise AssertionError("refinement failed to stabilize")
    return (decs[0] if single else tuple(decs)), trace, clean


def _always_tuple(x):
    return (x,) if isinstance(x, Decoration) else x


# -- embellishment -----------------------------------------------------------


def embellish(dec):
    """Append normalised relative stretch factors to the edge ornaments
    of a naive decoration.

    At each cylinder, if every incident edge with a rigid-geodesic block
    carries a stretch value, each such edge ornament gains the exact
    ratio of its value to the cylinder minimum.  A valueless or
    undecided block leaves the whole cylinder unannotated and clears the
    completeness flag.  Returns (decoration, clean).
    """
    gog = dec.gog
    g = gog.source
    edge_tokens = dict(dec.edge_tokens)
    clean = True
    for c in gog.cylinders():
        v = c.cut_vertex
        statuses = []
        for e in gog.edges_at(c.id):
            block = g.induced(gog.vertex(e.rigid).subgraph)
            statuses.append((e, r_edge_status(block, v)))
        r_edges = [(e, st) for e, st in statuses if st.kind == "R"]
        undecided = any(st.kind == "unknown" for _, st in statuses)
        valueless = any(st.value is None for _, st in r_edges)
        if undecided or valueless:
            clean = False
            continue
        if not r_edges:
            continue
        low = min(st.value for _, st in r_edges)
        for e, st in r_edges:
            ratio = Fraction(st.value, low)
            edge_tokens[e.id] = dec.pool.relstr(dec.edge_tokens[e.id], ratio)
    return replace(dec, edge_tokens=edge_tokens,
                   generation=dec.generation + 1), clean


# -- structure invariant -----------------------------------------------------


@dataclass(frozen=True)
class StructureInvariant:
    ornaments: tuple
    matrix: tuple  # rows of counts; entries are ints or math.inf

    def render(self):
        cells = [[""] + list(self.ornaments)]
        for orn, row in zip(self.ornaments, self.matrix):
            cells.append([orn] + ["inf" if c == INF else str(c) for c in row])
        widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
        return "\n".join(
            "  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)

    def to_json(self):
        return json.dumps(
            {
                "ornaments": list(self.ornaments),
                "matrix": [["inf" if c == INF else c for c in row]
                           for row in self.matrix],
            },
            sort_keys=True,
        )


def structure_invariant(dec):
    """Adjacency counts between ornament classes.

    Convention: vertex row against edge ornament counts incident edges
    through multiplicities; vertex row against vertex ornament counts
    neighbouring vertices the same way; edge rows count endpoints
    (0, 1 or 2); edge-edge entries are 0.  Requires a neighbour-stable
    decoration, otherwise rows would depend on the representative.
    """
    gog = dec.gog
    tokens = sorted(dec.image())
    index = {t: i for i, t in enumerate(tokens)}
    rows = {}

    def place(token, row):
        if rows.setdefault(token, row) != row:
            raise GraphError("decoration is not neighbour-stable")

    for v in gog.vertices:
        counts = {}
        for e in gog.edges_at(v.id):
            m = edge_multiplicity(gog, v.id, e.id)
            et = dec.edge_tokens[e.id]
            counts[et] = counts.get(et, 0) + m
            other = e.rigid if v.id == e.cylinder else e.cylinder
            ot = dec.vertex_tokens[other]
            counts[ot] = counts.get(ot, 0) + m
        row = tuple(counts.get(t, 0) for t in tokens)
        place(dec.vertex_tokens[v.id], row)
    for e in gog.edges:
        counts = {}
        for vid in (e.cylinder, e.rigid):
            t = dec.vertex_tokens[vid]
            counts[t] = counts.get(t, 0) + 1
        row = tuple(counts.get(t, 0) for t in tokens)
        place(dec.edge_tokens[e.id], row)

    return StructureInvariant(tuple(tokens),
                              tuple(rows[t] for t in tokens))
