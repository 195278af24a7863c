"""Shared example graphs for the test suite.

The names describe shape, not provenance: pentagons glued at a vertex,
doubled pentagons, clique trees, and the small path-plus-clique pairs used
by the comparison tests.
"""

import random

from raagqi.graphs import SimplicialGraph


def path(n):
    vs = [str(i) for i in range(n)]
    return SimplicialGraph(vs, [(str(i), str(i + 1)) for i in range(n - 1)])


def cycle(n):
    vs = [str(i) for i in range(n)]
    return SimplicialGraph(vs, [(str(i), str((i + 1) % n)) for i in range(n)])


def clique(n):
    vs = [str(i) for i in range(n)]
    return SimplicialGraph(vs, [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]])


def pentagon():
    return cycle(5)


def square():
    return cycle(4)


def star_graph(m):
    """A central vertex joined to m leaves."""
    vs = ["c"] + ["x%d" % i for i in range(m)]
    return SimplicialGraph(vs, [("c", v) for v in vs[1:]])


def pentagon_at(v, suffix):
    """A pentagon through the vertex v, other vertices tagged by `suffix`."""
    a, b, c, d = ("a" + suffix, "b" + suffix, "c" + suffix, "d" + suffix)
    verts = [v, a, b, c, d]
    edges = [(v, a), (a, b), (b, c), (c, d), (d, v)]
    return verts, edges


def two_pentagons():
    """Two pentagons sharing the single vertex v."""
    v1, e1 = pentagon_at("v", "1")
    v2, e2 = pentagon_at("v", "2")
    verts = v1 + [x for x in v2 if x != "v"]
    return SimplicialGraph(verts, e1 + e2)


def doubled_pentagon():
    """The double of a pentagon along the closed star of v.

    Seven vertices: v, its two pentagon neighbours n1 and n2, and two copies
    of the far pair, m1-m2 and p1-p2.  The RAAG on this graph is the index
    two subgroup of the pentagon RAAG killing v in Z/2.
    """
    verts = ["v", "n1", "n2", "m1", "m2", "p1", "p2"]
    edges = [
        ("v", "n1"), ("v", "n2"),
        ("n1", "m1"), ("m1", "m2"), ("m2", "n2"),
        ("n1", "p1"), ("p1", "p2"), ("p2", "n2"),
    ]
    return SimplicialGraph(verts, edges)


def pentagon_plus_doubled_pentagon():
    """A pentagon and a doubled pentagon glued at the single vertex v."""
    base = doubled_pentagon()
    v1, e1 = pentagon_at("v", "1")
    verts = list(base.vertices) + [x for x in v1 if x != "v"]
    return SimplicialGraph(verts, list(base.edges()) + e1)


def pentagons_leaf_triangle():
    """Two pentagons, a leaf, and a triangle, all glued at v."""
    g = two_pentagons()
    verts = list(g.vertices) + ["leaf", "t1", "t2"]
    edges = list(g.edges()) + [("v", "leaf"), ("v", "t1"), ("v", "t2"), ("t1", "t2")]
    return SimplicialGraph(verts, edges)


def pentagon_leaf_edge_triangle():
    """Pentagon 0-1-2-3-4, leaf 5 at 0, bridge 0-6, triangle 6-7-8."""
    verts = [str(i) for i in range(9)]
    edges = [
        ("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "0"),
        ("0", "5"),
        ("0", "6"),
        ("6", "7"), ("7", "8"), ("6", "8"),
    ]
    return SimplicialGraph(verts, edges)


def path_plus_k4():
    """Path 0-1-2-3-4 with {3,4,5,6} completed to a 4-clique."""
    verts = [str(i) for i in range(7)]
    edges = [
        ("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"),
        ("3", "5"), ("3", "6"), ("4", "5"), ("4", "6"), ("5", "6"),
    ]
    return SimplicialGraph(verts, edges)


def path_plus_k4_plus_ear():
    """path_plus_k4 with an extra vertex c joined to 0 and 1."""
    base = path_plus_k4()
    verts = list(base.vertices) + ["c"]
    edges = list(base.edges()) + [("c", "0"), ("c", "1")]
    return SimplicialGraph(verts, edges)


def triangle_tree():
    """A tree of four 3-cliques with eight pendant edges, 17 vertices.

    Two triangles share the centre c; two more triangles hang off r1 and
    r2; pendant edges make every clique vertex a cut vertex.
    """
    verts = [
        "c", "l1", "l2", "r1", "r2",
        "r1a", "r1b", "r2a", "r2b",
        "cp", "l1p1", "l1p2", "l2p", "r1ap", "r1bp", "r2ap", "r2bp",
    ]
    edges = [
        ("c", "l1"), ("c", "l2"), ("l1", "l2"),
        ("c", "r1"), ("c", "r2"), ("r1", "r2"),
        ("r1", "r1a"), ("r1", "r1b"), ("r1a", "r1b"),
        ("r2", "r2a"), ("r2", "r2b"), ("r2a", "r2b"),
        ("c", "cp"),
        ("l1", "l1p1"), ("l1", "l1p2"),
        ("l2", "l2p"),
        ("r1a", "r1ap"), ("r1b", "r1bp"),
        ("r2a", "r2ap"), ("r2b", "r2bp"),
    ]
    return SimplicialGraph(verts, edges)


def random_clique_tree(n, max_vertices, seed):
    """A random n-clique tree-graded graph with at most max_vertices vertices.

    Grows a tree of n-cliques glued at shared vertices, then attaches one
    pendant edge to every clique vertex that is not yet a cut vertex.
    """
    from collections import Counter

    rng = random.Random(seed)
    counter = [0]

    def fresh():
        counter[0] += 1
        return "w%d" % counter[0]

    def clique_owner_counts(cliques):
        owner = Counter()
        for c in cliques:
            for v in c:
                owner[v] += 1
        return owner

    verts = [fresh() for _ in range(n)]
    edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]]
    clique_vertices = list(verts)
    cliques = [list(verts)]
    # each added clique costs n - 1 vertices; each clique vertex not yet
    # shared will cost one more for its pendant edge
    while True:
        owner = clique_owner_counts(cliques)
        needed = sum(1 for v in clique_vertices if owner[v] == 1)
        budget = max_vertices - len(verts) - needed
        if budget < n - 1 or rng.random() < 0.35:
            break
        root = rng.choice(clique_vertices)
        new = [fresh() for _ in range(n - 1)]
        block = [root] + new
        verts.extend(new)
        edges.extend((a, b) for i, a in enumerate(block) for b in block[i + 1:])
        clique_vertices.extend(new)
        cliques.append(block)
    owner = clique_owner_counts(cliques)
    for v in list(clique_vertices):
        if owner[v] == 1:
            leaf = fresh()
            verts.append(leaf)
            edges.append((v, leaf))
    g = SimplicialGraph(verts, edges)
    assert g.n <= max_vertices, g.n
    return g


def random_connected_graph(n, seed):
    """A random connected graph on vertices "0".."n-1"."""
    rng = random.Random(seed)
    vs = [str(i) for i in range(n)]
    edges = set()
    order = vs[:]
    rng.shuffle(order)
    for i in range(1, n):
        j = rng.randrange(i)
        a, b = order[i], order[j]
        edges.add((min(a, b), max(a, b)))
    extra = rng.randrange(0, max(1, n * (n - 1) // 3))
    for _ in range(extra):
        a, b = rng.sample(vs, 2)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return SimplicialGraph(vs, sorted(edges))
