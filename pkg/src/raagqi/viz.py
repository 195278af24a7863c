"""Rendering of defining graphs and trees of cylinders to image files.

Layouts are seeded or deterministic by construction, so re-rendering the
same input produces the same picture.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .graphs import vsorted


def _nx_graph(g):
    G = nx.Graph()
    G.add_nodes_from(vsorted(g.vertices))
    G.add_edges_from(sorted(tuple(sorted(e)) for e in g.edges()))
    return G


def render_graph(g, out_path, title="defining graph"):
    """Draw the simplicial graph to out_path (format by extension)."""
    G = _nx_graph(g)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    if G.number_of_nodes():
        pos = nx.spring_layout(G, seed=0)
        nx.draw_networkx(G, pos, ax=ax, node_color="#cfe3f5",
                         edgecolors="#334455", node_size=650, font_size=9)
    ax.set_title(title)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_gog(gog, out_path, title="tree of cylinders"):
    """Draw the tree of cylinders: square cylinder nodes labelled by
    their cut vertex, round rigid nodes labelled by their subgraph."""
    G = nx.Graph()
    labels = {}
    cylinders, rigids = [], []
    for v in gog.vertices:
        G.add_node(v.id)
        if v.kind == "cylinder":
            cylinders.append(v.id)
            labels[v.id] = "star %s" % v.cut_vertex
        else:
            rigids.append(v.id)
            text = ",".join(v.subgraph)
            if len(text) > 12:
                text = text[:10] + ".."
            labels[v.id] = "{%s}" % text
    for e in gog.edges:
        G.add_edge(e.cylinder, e.rigid)
    if G.number_of_nodes() > 2:
        pos = nx.kamada_kawai_layout(G)
    else:
        pos = {nid: (float(i), 0.0) for i, nid in enumerate(sorted(G))}
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    nx.draw_networkx_edges(G, pos, ax=ax)
    nx.draw_networkx_nodes(G, pos, nodelist=cylinders, node_shape="s",
                           node_color="#f5e1c0", edgecolors="#775533",
                           node_size=1100, ax=ax)
    nx.draw_networkx_nodes(G, pos, nodelist=rigids, node_shape="o",
                           node_color="#cfe3f5", edgecolors="#334455",
                           node_size=1100, ax=ax)
    nx.draw_networkx_labels(G, pos, labels=labels, font_size=7, ax=ax)
    ax.set_title(title)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
