"""Brute-force oracles used to validate the production algorithms.

Everything here trades speed for obviousness: cut vertices by deletion,
blocks by subset growth, isomorphism by permutation search, and a literal
unfolding of a graph of groups into a ball of its Bass-Serre tree.
"""

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations

from .graphs import GraphError, MarkedGraph, vkey, vsorted
from .jsj import INF, edge_multiplicity


def brute_cut_vertices(g):
    """Cut vertices by deleting each vertex and re-checking connectivity."""
    if not g.is_connected():
        raise GraphError("cut vertices are only defined for connected graphs")
    out = []
    for v in g.vertices:
        rest = [w for w in g.vertices if w != v]
        if len(rest) >= 2 and not g.induced(rest).is_connected():
            out.append(v)
    return vsorted(out)


def _is_biconnected_set(g, vs):
    """True when the induced subgraph is connected with no cut vertex.

    A single edge counts as biconnected; a single vertex does not.
    """
    sub = g.induced(vs)
    if sub.n < 2 or not sub.is_connected():
        return False
    if sub.n == 2:
        return True
    for v in vs:
        rest = [w for w in vs if w != v]
        if not g.induced(rest).is_connected():
            return False
    return True


def brute_blocks(g):
    """Maximal biconnected subgraphs by exhaustive subset search.

    Exponential; intended for graphs with at most nine or so vertices.
    """
    if not g.is_connected():
        raise GraphError("blocks are only defined for connected graphs")
    if g.n < 2:
        raise GraphError("blocks need at least two vertices")
    verts = list(g.vertices)
    candidates = []
    for size in range(2, g.n + 1):
        for vs in combinations(verts, size):
            if _is_biconnected_set(g, vs):
                candidates.append(frozenset(vs))
    blocks = [
        b for b in candidates
        if not any(b < other for other in candidates)
    ]
    out = [vsorted(b) for b in set(blocks)]
    return tuple(sorted(out, key=lambda b: (len(b), [vkey(v) for v in b])))


def brute_iso(a, b, marks_a=None, marks_b=None):
    """A mark-preserving isomorphism by permutation search, or None.

    Guarded to nine vertices; the degree and mark of each vertex prune the
    search but every surviving bijection is checked edge by edge.
    """
    mga = a if isinstance(a, MarkedGraph) else MarkedGraph.make(a, marks_a)
    mgb = b if isinstance(b, MarkedGraph) else MarkedGraph.make(b, marks_b)
    ga, gb = mga.graph, mgb.graph
    if ga.n > 9 or gb.n > 9:
        raise GraphError("brute_iso is limited to nine vertices")
    if ga.n != gb.n or ga.m != gb.m:
        return None
    va = vsorted(ga.vertices)
    vb = vsorted(gb.vertices)
    profile_a = sorted((ga.degree(v), mga.mark_of(v)) for v in va)
    profile_b = sorted((gb.degree(v), mgb.mark_of(v)) for v in vb)
    if profile_a != profile_b:
        return None
    for perm in permutations(vb):
        ok = True
        for v, w in zip(va, perm):
            if ga.degree(v) != gb.degree(w) or mga.mark_of(v) != mgb.mark_of(w):
                ok = False
                break
        if not ok:
            continue
        mapping = dict(zip(va, perm))
        if all(gb.has_edge(mapping[u], mapping[v]) for (u, v) in ga.edges()):
            return mapping
    return None


# --------------------------------------------------------------------------
# finite windows on the tree a decomposition unfolds to


@dataclass
class BallNode:
    """One lift in the unfolded ball.

    hop is the distance from the root in quotient steps; an edge lift
    carries the hop of its far endpoint.
    """

    id: int
    kind: str  # "vertex" | "edge"
    qid: str
    hop: int
    parent: int = None
    children: tuple = ()


class BallUnfolding:
    """A rooted radius-r piece of the tree covering a decomposition.

    Every lift of a quotient vertex gets, per incident quotient edge,
    as many edge lifts as the local multiplicity says, with infinite
    fan-out truncated at the declared cap (recorded in .truncated)."""

    def __init__(self, gog, dec, radius, cap, root, nodes, truncated):
        self.gog = gog
        self.dec = dec
        self.radius = radius
        self.cap = cap
        self.root = root
        self.nodes = nodes
        self.truncated = truncated
        self._adj = {}
        for n in nodes:
            self._adj.setdefault(n.id, [])
            if n.parent is not None:
                self._adj[n.id].append(n.parent)
            self._adj[n.id].extend(n.children)

    def node(self, nid):
        return self.nodes[nid]

    def neighbours(self, nid):
        return tuple(self._adj[nid])

    def interior(self, margin=1):
        """Ids of nodes at least margin quotient hops from the rim."""
        return [n.id for n in self.nodes if n.hop <= self.radius - margin]

    def initial_colours(self):
        out = {}
        for n in self.nodes:
            if n.kind == "vertex":
                out[n.id] = self.dec.vertex_tokens[n.qid]
            else:
                out[n.id] = self.dec.edge_tokens[n.qid]
        return out


def unfold_ball(gog, dec, r, cap=5, root=None):
    """Unfold the decomposition into the ball of radius r around a lift
    of the root vertex, expanding multiplicities into sibling lifts."""
    if not 0 <= r <= 4:
        raise GraphError("ball radius is limited to 4")
    if not 2 <= cap <= 5:
        raise GraphError("fan-out cap is limited to 5")
    if root is None:
        root = min((v.id for v in gog.vertices), key=vkey)
    gog.vertex(root)
    nodes = [BallNode(0, "vertex", root, 0)]
    truncated = False
    queue = [(0, None)]
    while queue:
        nid, via = queue.pop(0)
        node = nodes[nid]
        if node.hop == r:
            continue
        kids = []
        for e in gog.edges_at(node.qid):
            m = edge_multiplicity(gog, node.qid, e.id)
            copies = cap if m == INF else int(m)
            truncated = truncated or m == INF
            if e.id == via:
                copies -= 1
            other = e.rigid if e.cylinder == node.qid else e.cylinder
            for _ in range(copies):
                eid = len(nodes)
                nodes.append(BallNode(eid, "edge", e.id, node.hop + 1, nid))
                vid = len(nodes)
                nodes.append(
                    BallNode(vid, "vertex", other, node.hop + 1, eid,
                             ()))
                nodes[eid].children = (vid,)
                kids.append(eid)
                queue.append((vid, e.id))
        node.children = tuple(kids)
    return BallUnfolding(gog, dec, r, cap, root, nodes, truncated)


def refine_on_ball(ball, rounds=None):
    """Literal neighbour refinement on the ball.

    Counts at or above the fan-out cap are compared as an infinity
    bucket, matching the truncation done while unfolding.  Runs the
    given number of rounds, or until the partition is stable.  Returns
    node id -> class index, classes numbered by smallest member."""
    colours = ball.initial_colours()

    def bucket(c):
        return "inf" if c >= ball.cap else c

    def grouping(cols):
        groups = {}
        for nid, col in cols.items():
            groups.setdefault(col, set()).add(nid)
        return frozenset(frozenset(g) for g in groups.values())

    done = 0
    while rounds is None or done < rounds:
        sigs = {}
        for n in ball.nodes:
            counts = Counter(colours[nb] for nb in ball.neighbours(n.id))
            sigs[n.id] = (colours[n.id],
                          tuple(sorted(((str(col), bucket(c))
                                        for col, c in counts.items()))))
        if grouping(sigs) == grouping(colours):
            break
        colours = sigs
        done += 1
    classes = sorted(
        ({nid for nid, col in colours.items() if col == c}
         for c in set(colours.values())),
        key=min)
    return {nid: i for i, cls in enumerate(classes) for nid in cls}
