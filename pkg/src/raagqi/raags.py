"""Structural analysis of graph groups through their defining graphs.

Everything here is read combinatorially off the finite graph: number of
ends, finiteness of the outer automorphism group, doublings along vertex
stars together with the stretch factors they induce, and quasi-isometry
class labels built from all of the above.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphs import (
    GraphError,
    SimplicialGraph,
    canonical_code,
    find_isomorphism,
    join_factors,
    vsorted,
)
from .labels import FiniteOutBase, Product, UnknownClass, abelian, free_product_label


def is_one_ended(g):
    """The group of g is one-ended iff g is connected with >= 2 vertices."""
    return g.n >= 2 and g.is_connected()


def out_is_finite(g):
    """Whether the outer automorphism group is finite.

    Finite exactly when the graph admits neither a transvection (a pair
    v != w with lk(v) contained in star(w)) nor a partial conjugation (a
    vertex whose closed star disconnects the rest).
    """
    for v in g.vertices:
        lv = set(g.link(v))
        for w in g.vertices:
            if w != v and lv <= set(g.star(w)):
                return False
    for w in g.vertices:
        starw = set(g.star(w))
        rest = [u for u in g.vertices if u not in starw]
        if len(rest) >= 2 and not g.induced(rest).is_connected():
            return False
    return True


def is_type_II(g):
    """Connected, and no two distinct vertices have lk(v) ∩ lk(w)
    separating the graph."""
    if not g.is_connected():
        return False
    for v, w in combinations(g.vertices, 2):
        cut = set(g.link(v)) & set(g.link(w))
        rest = [u for u in g.vertices if u not in cut]
        if len(rest) >= 2 and not g.induced(rest).is_connected():
            return False
    return True


def has_trivial_centre(g):
    """The centre is Z^k for the maximal clique join factor; trivial iff
    that factor is empty."""
    return join_factors(g)[0] == 0


def _copy_suffixes(g, outside):
    # fresh left/right suffixes; lengthened until no outside copy name
    # collides with an existing vertex
    sl, sr = ".L", ".R"
    names = set(g.vertices)
    while any(u + sl in names or u + sr in names for u in outside):
        sl, sr = "." + sl, "." + sr
    return sl, sr


def star_double(g, v):
    """Double g along the closed star of v.

    The two copies share star(v) and every other vertex u appears twice,
    as u.L and u.R.  The group of the double is the index-2 kernel of
    the map onto Z/2 killing every generator except v, so it is
    quasi-isometric to the group of g while distances along v-geodesics
    halve.  Degenerate doubles (star(v) the whole graph) are refused so
    that doubling always strictly increases the vertex count.
    """
    if not g.has_vertex(v):
        raise GraphError("no vertex %r" % v)
    if not g.is_connected():
        raise GraphError("doubling requires a connected graph")
    starset = set(g.star(v))
    outside = [u for u in g.vertices if u not in starset]
    if not outside:
        raise GraphError("star of %r covers the graph; refusing a degenerate double" % v)
    sl, sr = _copy_suffixes(g, outside)
    verts = list(g.star(v))
    for u in outside:
        verts.extend((u + sl, u + sr))
    edges = []
    for a, b in g.edges():
        if a in starset and b in starset:
            edges.append((a, b))
        elif a in starset:
            edges.extend(((a, b + sl), (a, b + sr)))
        elif b in starset:
            edges.extend(((a + sl, b), (a + sr, b)))
        else:
            edges.extend(((a + sl, b + sl), (a + sr, b + sr)))
    d = SimplicialGraph(verts, edges)
    swap = {u: u for u in starset}
    swap.update({u + sl: u + sr for u in outside})
    swap.update({u + sr: u + sl for u in outside})
    assert d.relabel(swap) == d, "side swap must be an automorphism of the double"
    return d


@dataclass(frozen=True)
class DoublingStep:
    """One doubling: the previous graph is doubled along star(vertex),
    then renamed into the next graph's vertex names.

    ``renaming`` pairs each vertex name of the freshly built double with
    its name in the next graph; restricted to the previous graph's
    vertices and left copies it is the embedding of the previous graph
    into the double.
    """

    vertex: str
    renaming: tuple

    def renaming_dict(self):
        return dict(self.renaming)


@dataclass(frozen=True)
class DoublingLedger:
    """Chain of star-doublings from a finite-Out base up to a graph.

    Replaying the steps from the base reproduces the final graph on the
    nose, which is how ledgers are validated.
    """

    base: SimplicialGraph
    steps: tuple

    def replay(self):
        """All graphs along the chain, base first."""
        graphs = [self.base]
        for step in self.steps:
            d = star_double(graphs[-1], step.vertex)
            ren = step.renaming_dict()
            if set(ren) != set(d.vertices):
                raise GraphError("ledger step renaming does not cover the double")
            graphs.append(d.relabel(ren))
        return graphs

    def final(self):
        return self.replay()[-1]

    def _walk_back(self):
        # per final vertex: (stretch, base vertex covered)
        graphs = self.replay()
        stretch = {w: Fraction(1) for w in graphs[-1].vertices}
        trace = {w: w for w in graphs[-1].vertices}
        for i in range(len(self.steps) - 1, -1, -1):
            step, prev = self.steps[i], graphs[i]
            back = {new: old for (old, new) in step.renaming}
            starset = set(prev.star(step.vertex))
            sl, sr = _copy_suffixes(prev, [u for u in prev.vertices if u not in starset])
            for w in trace:
                d = back[trace[w]]
                if d == step.vertex:
                    stretch[w] *= 2
                if prev.has_vertex(d):
                    trace[w] = d
                elif d.endswith(sl):
                    trace[w] = d[: -len(sl)]
                else:
                    trace[w] = d[: -len(sr)]
        return stretch, trace

    def stretch_table(self):
        """Stretch factor of each final-graph vertex relative to the base.

        A vertex gains a factor of 2 at exactly the steps where it is
        the doubled vertex itself; link vertices and outside copies pass
        through unchanged.  Walking the chain vertex by vertex avoids
        over-counting when an undoubled copy happens to sit over the
        same base vertex as a later doubling site.
        """
        return self._walk_back()[0]

    def projection_to_base(self):
        """Map each final-graph vertex to the base vertex it covers."""
        return self._walk_back()[1]


def _halves_iso(g, star, left, right):
    # isomorphism of the two halves fixing the shared star pointwise
    marks = {u: "anchor:" + u for u in star}
    a = g.induced(list(star) + list(left))
    b = g.induced(list(star) + list(right))
    iso = find_isomorphism(a, b, marks, marks)
    if iso is None:
        return None
    return {u: iso[u] for u in left}


def _undoublings(g):
    """All ways of writing g as star_double(base, v), as triples
    (v, base, renaming)."""
    for v in g.vertices:
        star = g.star(v)
        starset = set(star)
        rest = [u for u in g.vertices if u not in starset]
        if len(rest) < 2 or len(rest) % 2:
            continue
        comps = g.induced(rest).components()
        half = len(rest) // 2
        # no edges cross the two copies, so each half is a union of
        # components; pinning the first component to the left half kills
        # the left/right swap
        first, others = comps[0], comps[1:]
        if len(first) > half:
            continue
        for k in range(len(others) + 1):
            for pick in combinations(range(len(others)), k):
                left = list(first)
                for i in pick:
                    left.extend(others[i])
                if len(left) != half:
                    continue
                leftset = set(left)
                right = [u for u in rest if u not in leftset]
                iso = _halves_iso(g, star, left, right)
                if iso is None:
                    continue
                base = g.induced(list(star) + left)
                sl, sr = _copy_suffixes(base, vsorted(left))
                ren = [(u, u) for u in star]
                ren += [(u + sl, u) for u in left]
                ren += [(u + sr, iso[u]) for u in left]
                yield v, base, tuple(sorted(ren))


_reduce_memo = {}


def reduce_to_finite_out_base(g):
    """Search for a chain of star-doublings leading from a graph with
    finite outer automorphism group up to g.

    Returns a DoublingLedger whose final graph equals g, or None when no
    reduction was found.  None is a "don't know": only the star-doubling
    family is searched.  Ties between reductions are broken by the
    canonical code of the base, then chain length.
    """
    if not g.is_connected():
        raise GraphError("reduction requires a connected graph")
    return _reduce(g)


def _reduce(g):
    if g in _reduce_memo:
        return _reduce_memo[g]
    best = None
    if out_is_finite(g):
        # finite-Out graphs are never nontrivial doubles: the doubled
        # vertex would give a partial conjugation
        best = DoublingLedger(g, ())
    else:
        for vertex, base, renaming in _undoublings(g):
            inner = _reduce(base)
            if inner is None:
                continue
            cand = DoublingLedger(inner.base, inner.steps + (DoublingStep(vertex, renaming),))
            if best is None or _ledger_key(cand) < _ledger_key(best):
                best = cand
    _reduce_memo[g] = best
    return best


def _ledger_key(ledger):
    return (canonical_code(ledger.base), len(ledger.steps))


def stretch_of_vertex(g, v):
    """Stretch factor of the v-geodesic relative to the canonical base,
    or None when no doubling reduction is available."""
    if not g.has_vertex(v):
        raise GraphError("no vertex %r" % v)
    ledger = reduce_to_finite_out_base(g)
    if ledger is None:
        return None
    return ledger.stretch_table()[v]


@dataclass(frozen=True)
class RigidEdgeStatus:
    """Rigidity of the v-geodesic inside a block's group.

    kind "F": flexible (free abelian blocks).
    kind "R": rigid (type II with trivial centre); value carries the
        stretch factor when a doubling reduction provides one.
    kind "unknown": no cited condition applies; never guessed.
    """

    kind: str
    value: object = None

    def render(self):
        if self.kind == "R":
            return "R(%s)" % (self.value if self.value is not None else "?")
        return "F" if self.kind == "F" else "Unknown"


def r_edge_status(block, v):
    """Classify the v-geodesic of an induced block as flexible, rigid
    (with a stretch value when available) or unknown."""
    if not block.has_vertex(v):
        raise GraphError("no vertex %r" % v)
    if block.is_clique():
        return RigidEdgeStatus("F")
    if is_type_II(block) and has_trivial_centre(block):
        return RigidEdgeStatus("R", stretch_of_vertex(block, v))
    return RigidEdgeStatus("unknown")


_label_memo = {}


def qi_class_label(g):
    """Quasi-isometry class label of the group of g.

    Recursive normalization: the empty graph and cliques are abelian
    (one vertex lands in the two-ended class); disconnected graphs take
    the normal form of the free product of their components; nontrivial
    joins split off their clique rank and factor labels; graphs that
    reduce to a finite-Out base are classed by that base; everything
    else keeps its own canonical code as an unknown-class token.
    """
    if g in _label_memo:
        return _label_memo[g]
    if g.n == 0:
        lab = abelian(0)
    elif g.is_clique():
        lab = abelian(g.n)
    elif not g.is_connected():
        lab = free_product_label([qi_class_label(g.induced(c)) for c in g.components()])
    else:
        rank, factors = join_factors(g)
        if rank > 0 or len(factors) >= 2:
            lab = Product(rank, tuple(qi_class_label(f) for f in factors))
        else:
            ledger = reduce_to_finite_out_base(g)
            if ledger is not None:
                lab = FiniteOutBase(canonical_code(ledger.base))
            else:
                lab = UnknownClass(canonical_code(g))
    _label_memo[g] = lab
    return lab


_dovetail_memo = {}


def dovetail_status(g):
    """"known-dovetail" when g is derivable from cliques, trees and
    type II graphs by the closure rules (components, join factors,
    cut-vertex amalgams); otherwise "unknown", never "no"."""
    return "known-dovetail" if _dovetail(g) else "unknown"


def _dovetail(g):
    if g in _dovetail_memo:
        return _dovetail_memo[g]
    res = _dovetail_uncached(g)
    _dovetail_memo[g] = res
    return res


def _dovetail_uncached(g):
    if g.n == 0 or g.is_clique():
        return True
    if not g.is_connected():
        return all(_dovetail(g.induced(c)) for c in g.components())
    if g.m == g.n - 1:
        return True  # tree groups
    if is_type_II(g):
        return True
    rank, factors = join_factors(g)
    if rank > 0 or len(factors) >= 2:
        return all(_dovetail(f) for f in factors)
    # amalgams along a standard generator: split at a cut vertex
    for v in g.vertices:
        rest = [u for u in g.vertices if u != v]
        sub = g.induced(rest)
        comps = sub.components()
        if len(comps) >= 2:
            pieces = [g.induced(list(c) + [v]) for c in comps]
            if all(_dovetail(p) for p in pieces):
                return True
    return False
