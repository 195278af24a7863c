"""Visual tree-of-cylinders decomposition of a one-ended graph group.

The decomposition is read directly off the defining graph: cylinders sit
at cut vertices and carry the group of the closed star; rigid vertices
are the maximal biconnected subgraphs that either contain two cut
vertices or stick out of every cut vertex's star.  Edges join a cylinder
to each rigid piece through its cut vertex.
"""

import json
import math
from dataclasses import dataclass, field

from .graphs import (
    GraphError,
    SimplicialGraph,
    cut_vertices,
    graph_to_json,
    maximal_biconnected_subgraphs,
    parse_graph,
    vkey,
    vsorted,
)

INF = math.inf


@dataclass(frozen=True)
class GogVertex:
    id: str
    kind: str  # "cylinder" or "rigid"
    subgraph: tuple  # sorted vertex names of the defining subgraph
    cut_vertex: str = None  # set on cylinders only


@dataclass(frozen=True)
class GogEdge:
    id: str
    cylinder: str  # id of the cylinder endpoint
    rigid: str  # id of the rigid endpoint
    subgraph: tuple  # the shared star, star(v) within the rigid subgraph


@dataclass(frozen=True)
class GraphOfGroups:
    source: SimplicialGraph
    vertices: tuple
    edges: tuple
    trivial: bool = False
    _by_id: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {v.id: v for v in self.vertices})

    def vertex(self, vid):
        return self._by_id[vid]

    def edges_at(self, vid):
        return tuple(e for e in self.edges if vid in (e.cylinder, e.rigid))

    def cylinders(self):
        return tuple(v for v in self.vertices if v.kind == "cylinder")

    def rigids(self):
        return tuple(v for v in self.vertices if v.kind == "rigid")

    def subgraph_of(self, vid):
        return self.source.induced(self.vertex(vid).subgraph)


@dataclass(frozen=True)
class CylinderBlocks:
    """Decomposition of lk(v) at a cut vertex into blocks.

    Each block is the link of v within one maximal biconnected subgraph
    through v.  Peripheral blocks come from rigid pieces of the tree of
    cylinders and are paired with them; the cylinder group is
    Z x (free product of the block groups).
    """

    cut_vertex: str
    peripheral: tuple  # pairs (block vertex names, owning rigid subgraph)
    non_peripheral: tuple  # block vertex name tuples


def _rigid_members(g, cuts, blocks):
    """The maximal biconnected subgraphs that are rigid vertices: those
    with two cut vertices, or not inside any cut vertex's star."""
    cutset = set(cuts)
    chosen = []
    for b in blocks:
        bset = set(b)
        if len(bset & cutset) >= 2:
            chosen.append(b)
            continue
        if not any(bset <= set(g.star(v)) for v in cuts):
            chosen.append(b)
    return chosen


def _cyl_id(v):
    return "cyl:%s" % v


def _rig_id(block):
    return "rig:%s" % "|".join(block)


def build_jsj(g):
    """Tree-of-cylinders graph of groups for a connected graph with at
    least three vertices.

    When the graph has no cut vertex, or some closed star covers it, the
    tree is a single point: the result is flagged trivial and holds one
    vertex (the whole graph as a rigid piece, or that cylinder).
    """
    if g.n < 3:
        raise GraphError("need at least 3 vertices, got %d" % g.n)
    if not g.is_connected():
        raise GraphError("tree of cylinders requires a connected graph")
    cuts = cut_vertices(g)
    allv = vsorted(g.vertices)
    if not cuts:
        vtx = GogVertex(_rig_id(tuple(allv)), "rigid", tuple(allv))
        return GraphOfGroups(g, (vtx,), (), trivial=True)
    covering = [v for v in allv if len(g.star(v)) == g.n]
    if covering:
        v = covering[0]
        vtx = GogVertex(_cyl_id(v), "cylinder", tuple(g.star(v)), cut_vertex=v)
        return GraphOfGroups(g, (vtx,), (), trivial=True)

    blocks = maximal_biconnected_subgraphs(g)
    cutset = set(cuts)
    for b in blocks:
        assert set(b) & cutset, "every block meets a cut vertex once one exists"
    rigid_blocks = _rigid_members(g, cuts, blocks)
    assert rigid_blocks, "nontrivial tree of cylinders has a rigid piece"

    vertices = [GogVertex(_cyl_id(v), "cylinder", tuple(g.star(v)), cut_vertex=v)
                for v in cuts]
    vertices += [GogVertex(_rig_id(b), "rigid", tuple(b)) for b in rigid_blocks]
    edges = []
    for b in rigid_blocks:
        bset = set(b)
        sub = g.induced(b)
        for v in cuts:
            if v in bset:
                shared = tuple(sub.star(v))
                edges.append(GogEdge("edge:%s@%s" % (v, "|".join(b)),
                                     _cyl_id(v), _rig_id(b), shared))
    vertices.sort(key=lambda x: x.id)
    edges.sort(key=lambda e: e.id)
    gog = GraphOfGroups(g, tuple(vertices), tuple(edges))

    # a tree: connected and one fewer edge than vertices
    assert len(gog.edges) == len(gog.vertices) - 1
    assert _is_connected_gog(gog)
    for e in gog.edges:
        cyl, rig = gog.vertex(e.cylinder), gog.vertex(e.rigid)
        assert set(e.subgraph) == set(cyl.subgraph) & set(rig.subgraph)
    covered = set()
    for v in gog.vertices:
        covered |= set(v.subgraph)
    assert covered == set(g.vertices)
    for v in cuts:
        cb = cylinder_blocks(g, v)
        # peripheral blocks match incident tree edges one for one, and a
        # cylinder never carries a single splitting edge in total
        assert len(cb.peripheral) == len(gog.edges_at(_cyl_id(v)))
        assert len(cb.peripheral) >= 1
        assert len(cb.peripheral) + len(cb.non_peripheral) >= 2
    return gog


def _is_connected_gog(gog):
    if not gog.vertices:
        return False
    seen = {gog.vertices[0].id}
    frontier = [gog.vertices[0].id]
    while frontier:
        cur = frontier.pop()
        for e in gog.edges_at(cur):
            for nxt in (e.cylinder, e.rigid):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    return len(seen) == len(gog.vertices)


def cylinder_blocks(g, v):
    """Split lk(v) into peripheral and non-peripheral blocks at a cut
    vertex v."""
    cuts = cut_vertices(g)
    if v not in cuts:
        raise GraphError("%r is not a cut vertex" % v)
    blocks = maximal_biconnected_subgraphs(g)
    rigid_blocks = {b for b in _rigid_members(g, cuts, blocks)}
    peripheral = []
    non_peripheral = []
    seen = []
    for b in blocks:
        if v not in set(b):
            continue
        piece = tuple(u for u in g.induced(b).link(v))
        seen.extend(piece)
        if b in rigid_blocks:
            peripheral.append((piece, b))
        else:
            assert g.induced(piece).is_connected(), \
                "non-peripheral blocks have connected links"
            non_peripheral.append(piece)
    assert sorted(seen, key=vkey) == list(g.link(v)), "blocks partition the link"
    peripheral.sort(key=lambda pb: tuple(vkey(u) for u in pb[0]))
    non_peripheral.sort(key=lambda p: tuple(vkey(u) for u in p))
    return CylinderBlocks(v, tuple(peripheral), tuple(non_peripheral))


def edge_multiplicity(gog, vertex_id, edge_id):
    """Number of edges of the edge's orbit at one lift of the vertex in
    the tree the decomposition unfolds to: 1 or infinity.

    At a cylinder star(v): 1 exactly when the rigid piece sees the whole
    link of v.  At a rigid piece: 1 exactly when v is adjacent to all of
    it.  Everything proper has infinite index, hence infinitely many
    copies.
    """
    edge = next((e for e in gog.edges if e.id == edge_id), None)
    if edge is None or vertex_id not in (edge.cylinder, edge.rigid):
        raise GraphError("edge %r not incident to %r" % (edge_id, vertex_id))
    vtx = gog.vertex(vertex_id)
    g = gog.source
    v = gog.vertex(edge.cylinder).cut_vertex
    rigid = gog.vertex(edge.rigid)
    if vtx.kind == "cylinder":
        rig_link = set(g.induced(rigid.subgraph).link(v))
        return 1 if rig_link == set(g.link(v)) else INF
    return 1 if set(edge.subgraph) == set(rigid.subgraph) else INF


def _mult_str(m):
    return "inf" if m == INF else str(m)


def export_json(gog):
    """Stable JSON form; gog_from_json inverts it."""
    doc = {
        "source": json.loads(graph_to_json(gog.source)),
        "trivial": gog.trivial,
        "vertices": [
            {
                "id": v.id,
                "kind": v.kind,
                "subgraph": list(v.subgraph),
                **({"cutVertex": v.cut_vertex} if v.cut_vertex is not None else {}),
            }
            for v in gog.vertices
        ],
        "edges": [
            {
                "id": e.id,
                "cylinder": e.cylinder,
                "rigid": e.rigid,
                "subgraph": list(e.subgraph),
                "multiplicities": {
                    "atCylinder": _mult_str(edge_multiplicity(gog, e.cylinder, e.id)),
                    "atRigid": _mult_str(edge_multiplicity(gog, e.rigid, e.id)),
                },
            }
            for e in gog.edges
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def gog_from_json(text):
    doc = json.loads(text)
    source = parse_graph(json.dumps(doc["source"]), fmt="json")
    vertices = tuple(
        GogVertex(v["id"], v["kind"], tuple(v["subgraph"]), v.get("cutVertex"))
        for v in doc["vertices"]
    )
    edges = tuple(
        GogEdge(e["id"], e["cylinder"], e["rigid"], tuple(e["subgraph"]))
        for e in doc["edges"]
    )
    return GraphOfGroups(source, vertices, edges, trivial=doc["trivial"])


def export_dot(gog):
    """GraphViz rendering: boxes for cylinders, ellipses for rigid
    pieces, edges labelled by their shared subgraphs."""
    lines = ["graph tree_of_cylinders {"]
    for v in gog.vertices:
        shape = "box" if v.kind == "cylinder" else "ellipse"
        label = "%s\\n{%s}" % (v.kind, ",".join(v.subgraph))
        lines.append('  "%s" [shape=%s, label="%s"];' % (v.id, shape, label))
    for e in gog.edges:
        lines.append('  "%s" -- "%s" [label="{%s}"];'
                     % (e.cylinder, e.rigid, ",".join(e.subgraph)))
    lines.append("}")
    return "\n".join(lines) + "\n"
