"""Finite simplicial graphs: links, blocks, joins, canonical forms.

Vertices are opaque strings.  Graphs are immutable; every operation returns
a new graph or a sorted tuple of vertex names.  The sort order used
throughout is (length, lexicographic), so purely numeric names come out in
numeric order and all reports are reproducible byte for byte.
"""

import json
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx


class GraphError(ValueError):
    """Raised when data violates the simplicial-graph invariants."""


class ParseError(GraphError):
    """Malformed textual input; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


def vkey(v):
    """Deterministic sort key for vertex names: length, then lexicographic."""
    return (len(v), v)


def vsorted(vs):
    return tuple(sorted(vs, key=vkey))


class SimplicialGraph:
    """A finite graph with no loops and no multiple edges.

    `vertices` preserves construction order (used for display); equality and
    hashing ignore it and compare the vertex set and edge set.
    """

    __slots__ = ("vertices", "_adj", "_hash", "_nxg")

    def __init__(self, vertices, edges):
        vertices = tuple(str(v) for v in vertices)
        adj = {}
        for v in vertices:
            if v in adj:
                raise GraphError("duplicate vertex %r" % v)
            adj[v] = set()
        for e in edges:
            u, v = e
            u, v = str(u), str(v)
            if u == v:
                raise GraphError("self-loop at %r" % u)
            if u not in adj:
                raise GraphError("edge (%r, %r) uses unknown vertex %r" % (u, v, u))
            if v not in adj:
                raise GraphError("edge (%r, %r) uses unknown vertex %r" % (u, v, v))
            adj[u].add(v)
            adj[v].add(u)
        self.vertices = vertices
        self._adj = {v: frozenset(adj[v]) for v in vertices}
        self._hash = None
        self._nxg = None

    # -- basic queries ----------------------------------------------------

    @property
    def n(self):
        return len(self.vertices)

    def has_vertex(self, v):
        return v in self._adj

    def has_edge(self, u, v):
        return v in self._adj.get(u, ())

    def link(self, v):
        """Open neighbourhood lk(v), sorted."""
        if v not in self._adj:
            raise GraphError("unknown vertex %r" % v)
        return vsorted(self._adj[v])

    def star(self, v):
        """Closed neighbourhood star(v) = lk(v) + {v}, sorted."""
        if v not in self._adj:
            raise GraphError("unknown vertex %r" % v)
        return vsorted(set(self._adj[v]) | {v})

    def degree(self, v):
        return len(self._adj[v])

    def edges(self):
        """All edges as sorted pairs, in deterministic order."""
        out = []
        for v in self._adj:
            for w in self._adj[v]:
                if vkey(v) < vkey(w):
                    out.append((v, w))
        return tuple(sorted(out, key=lambda e: (vkey(e[0]), vkey(e[1]))))

    @property
    def m(self):
        return len(self.edges())

    # -- derived graphs ---------------------------------------------------

    def induced(self, vs):
        vs = set(vs)
        unknown = vs - set(self.vertices)
        if unknown:
            raise GraphError("unknown vertices %r" % vsorted(unknown)[:3])
        keep = [v for v in self.vertices if v in vs]
        edges = [(u, v) for (u, v) in self.edges() if u in vs and v in vs]
        return SimplicialGraph(keep, edges)

    def complement(self):
        verts = self.vertices
        edges = []
        for i, u in enumerate(verts):
            for v in verts[i + 1:]:
                if not self.has_edge(u, v):
                    edges.append((u, v))
        return SimplicialGraph(verts, edges)

    def relabel(self, mapping):
        """Rename vertices by `mapping`; names must stay pairwise distinct."""
        verts = [mapping[v] for v in self.vertices]
        edges = [(mapping[u], mapping[v]) for (u, v) in self.edges()]
        return SimplicialGraph(verts, edges)

    def to_nx(self):
        if self._nxg is None:
            g = nx.Graph()
            g.add_nodes_from(self.vertices)
            g.add_edges_from(self.edges())
            self._nxg = g
        return self._nxg

    # -- whole-graph predicates --------------------------------------------

    def is_clique(self):
        n = self.n
        return len(self.edges()) == n * (n - 1) // 2

    def is_connected(self):
        if self.n == 0:
            return False
        return nx.is_connected(self.to_nx())

    def components(self):
        """Connected components as sorted tuples, ordered by least vertex."""
        comps = [vsorted(c) for c in nx.connected_components(self.to_nx())]
        return tuple(sorted(comps, key=lambda c: vkey(c[0])))

    def diameter(self):
        if not self.is_connected():
            raise GraphError("diameter requires a connected graph")
        return nx.diameter(self.to_nx()) if self.n > 1 else 0

    # -- value semantics ----------------------------------------------------

    def _key(self):
        return (frozenset(self.vertices), frozenset(self.edges()))

    def __eq__(self, other):
        if not isinstance(other, SimplicialGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return "SimplicialGraph(%d vertices, %d edges)" % (self.n, self.m)


@dataclass(frozen=True)
class MarkedGraph:
    """A graph with a total map from vertices to mark strings.

    Unmarked constructions use the empty string.  `marks` is stored as a
    sorted tuple of pairs so the object stays hashable.
    """

    graph: SimplicialGraph
    marks: tuple

    @staticmethod
    def make(graph, marks=None):
        marks = dict(marks or {})
        for v in marks:
            if not graph.has_vertex(v):
                raise GraphError("mark on unknown vertex %r" % v)
        full = tuple((v, str(marks.get(v, ""))) for v in vsorted(graph.vertices))
        return MarkedGraph(graph, full)

    def mark_of(self, v):
        return dict(self.marks)[v]

    def mark_dict(self):
        return dict(self.marks)


# -- parsing and serialization ---------------------------------------------


def parse_graph(text, fmt="edge-list"):
    """Parse a graph description.

    The edge-list format has one leading count line `n` (vertices are then
    named "0" .. "n-1") followed by one `u v` line per edge.  Blank lines and
    lines starting with '#' are ignored.  The json format is an object
    {"vertices": [...], "edges": [[u, v], ...]}.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if fmt == "edge-list":
        return _parse_edge_list(text)
    if fmt == "json":
        return _parse_json_graph(text)
    raise ParseError("unknown graph format %r" % fmt)


def _parse_edge_list(text):
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1 or not parts[0].lstrip("-").isdigit():
                raise ParseError("expected a vertex count, got %r" % line, lineno)
            n = int(parts[0])
            if n < 0:
                raise ParseError("vertex count must be non-negative", lineno)
            continue
        if len(parts) != 2:
            raise ParseError("malformed edge line %r" % line, lineno)
        for p in parts:
            if not p.isdigit():
                raise ParseError("malformed edge line %r" % line, lineno)
        u, v = parts
        if int(u) >= n or int(v) >= n:
            raise ParseError("unknown vertex in edge %r (count is %d)" % (line, n), lineno)
        if u == v:
            raise ParseError("self-loop at vertex %s" % u, lineno)
        key = frozenset((u, v))
        if key in seen:
            raise ParseError("duplicate edge %s %s" % (u, v), lineno)
        seen.add(key)
        edges.append((u, v))
    if n is None:
        raise ParseError("empty input: expected a vertex count line")
    return SimplicialGraph([str(i) for i in range(n)], edges)


def _parse_json_graph(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid json: %s" % exc.msg, exc.lineno)
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    if "vertices" not in data or "edges" not in data:
        raise ParseError("object needs 'vertices' and 'edges'")
    verts = [str(v) for v in data["vertices"]]
    if len(set(verts)) != len(verts):
        raise ParseError("duplicate vertex name")
    vset = set(verts)
    edges = []
    seen = set()
    for i, e in enumerate(data["edges"]):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ParseError("edges[%d]: expected a pair" % i)
        u, v = str(e[0]), str(e[1])
        if u == v:
            raise ParseError("edges[%d]: self-loop at %r" % (i, u))
        if u not in vset or v not in vset:
            raise ParseError("edges[%d]: unknown vertex" % i)
        key = frozenset((u, v))
        if key in seen:
            raise ParseError("edges[%d]: duplicate edge (%s, %s)" % (i, u, v))
        seen.add(key)
        edges.append((u, v))
    return SimplicialGraph(verts, edges)


def graph_to_json(g):
    return json.dumps(
        {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]},
        sort_keys=True,
    )


def graph_to_edge_list(g):
    """Positional edge-list form; vertex i is g.vertices[i]."""
    index = {v: i for i, v in enumerate(g.vertices)}
    lines = [str(g.n)]
    pairs = sorted((min(index[u], index[v]), max(index[u], index[v])) for (u, v) in g.edges())
    lines.extend("%d %d" % p for p in pairs)
    return "\n".join(lines) + "\n"


# -- connectivity substructures ---------------------------------------------


def cut_vertices(g):
    """Cut vertices (articulation points) of a connected graph, sorted."""
    if not g.is_connected():
        raise GraphError("cut vertices are only defined for connected graphs")
    return vsorted(nx.articulation_points(g.to_nx()))


def maximal_biconnected_subgraphs(g):
    """Maximal biconnected subgraphs (blocks) of a connected graph.

    Single edges count as blocks, so the blocks cover every edge.  Returned
    as sorted vertex tuples in deterministic order.
    """
    if not g.is_connected():
        raise GraphError("blocks are only defined for connected graphs")
    if g.n < 2:
        raise GraphError("blocks need at least two vertices")
    blocks = [vsorted(b) for b in nx.biconnected_components(g.to_nx())]
    return tuple(sorted(blocks, key=lambda b: (len(b), [vkey(v) for v in b])))


def join_factors(g):
    """Split g as a join: a clique part and the non-join factors.

    Returns (clique_rank, factors) where the factors are the induced
    subgraphs on the connected components of the complement that have at
    least two vertices; singleton components together form the clique part.
    The RAAG is then Z^clique_rank x the direct product of the factors.
    """
    comp = g.complement()
    rank = 0
    factors = []
    for c in comp.components():
        if len(c) == 1:
            rank += 1
        else:
            factors.append(g.induced(c))
    factors.sort(key=lambda f: (f.n, [vkey(v) for v in vsorted(f.vertices)]))
    return rank, factors


# -- canonical forms ----------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _wl_refine(adj, colors):
    """Iterated neighbourhood colour refinement until stable."""
    n = len(colors)
    while True:
        sig = [
            (colors[i], tuple(sorted(colors[j] for j in adj[i])))
            for i in range(n)
        ]
        order = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = tuple(order[s] for s in sig)
        if new == colors:
            return colors
        colors = new


def _canonical_pair(mg):
    """Return (code, ordering) realizing the canonical form of a MarkedGraph.

    The code is a byte string; equal codes characterize mark-preserving
    isomorphism.  The search refines colours, individualizes one vertex of
    the first non-singleton colour class, and minimizes over the branches,
    pruning branches equivalent under automorphisms found along the way.
    """
    g = mg.graph
    verts = vsorted(g.vertices)
    n = len(verts)
    index = {v: i for i, v in enumerate(verts)}
    adj = [sorted(index[w] for w in g.link(v)) for v in verts]
    marks = [mg.mark_of(v) for v in verts]
    mark_order = {m: k for k, m in enumerate(sorted(set(marks)))}
    init = tuple(mark_order[m] for m in marks)

    def code_for(order):
        pos = {v: i for i, v in enumerate(order)}
        pairs = sorted(
            (min(pos[i], pos[j]), max(pos[i], pos[j]))
            for i in range(n)
            for j in adj[i]
            if i < j
        )
        head = "%d;%s;" % (n, "\x1f".join(marks[i] for i in order))
        body = ",".join("%d-%d" % p for p in pairs)
        return (head + body).encode("utf-8")

    best = [None, None]
    uf = _UnionFind(n)

    def search(colors):
        colors = _wl_refine(adj, colors)
        cells = {}
        for i, c in enumerate(colors):
            cells.setdefault(c, []).append(i)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(range(n), key=lambda i: colors[i])
            code = code_for(order)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            elif code == best[0]:
                # two orderings realizing the same form compose to an
                # automorphism; record it for orbit pruning
                perm = {best[1][k]: order[k] for k in range(n)}
                for a, b in perm.items():
                    uf.union(a, b)
            return
        tried = []
        for m in target:
            if any(uf.find(m) == uf.find(t) for t in tried):
                continue
            tried.append(m)
            bumped = tuple(
                (colors[i], 0 if i == m else 1) for i in range(n)
            )
            order = {s: k for k, s in enumerate(sorted(set(bumped)))}
            search(tuple(order[s] for s in bumped))

    if n == 0:
        return b"0;;", []
    search(init)
    return best[0], [verts[i] for i in best[1]]


@lru_cache(maxsize=None)
def _canonical_cached(mg):
    return _canonical_pair(mg)


def canonical_code(g, marks=None):
    """Canonical form of a graph with optional marks.

    Two marked graphs get equal codes exactly when a mark-preserving
    isomorphism exists between them.
    """
    if isinstance(g, MarkedGraph):
        mg = g
    else:
        mg = MarkedGraph.make(g, marks)
    return _canonical_cached(mg)[0]


def find_isomorphism(a, b, marks_a=None, marks_b=None):
    """A mark-preserving isomorphism a -> b as a dict, or None.

    Accepts SimplicialGraph plus mark dicts, or MarkedGraph values.
    """
    mga = a if isinstance(a, MarkedGraph) else MarkedGraph.make(a, marks_a)
    mgb = b if isinstance(b, MarkedGraph) else MarkedGraph.make(b, marks_b)
    code_a, order_a = _canonical_cached(mga)
    code_b, order_b = _canonical_cached(mgb)
    if code_a != code_b:
        return None
    mapping = {order_a[i]: order_b[i] for i in range(len(order_a))}
    ga, gb = mga.graph, mgb.graph
    for v in ga.vertices:
        if mga.mark_of(v) != mgb.mark_of(mapping[v]):
            return None
    for (u, v) in ga.edges():
        if not gb.has_edge(mapping[u], mapping[v]):
            return None
    if ga.m != gb.m:
        return None
    return mapping
