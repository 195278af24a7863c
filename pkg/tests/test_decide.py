"""Move certificates, tree-graded detection, verdicts, corpus classification."""

import json
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from raagqi.decide import (
    Factor,
    TypeI,
    TypeII,
    TypeIII,
    Verdict,
    classify_corpus,
    compare,
    cylinder_group_str,
    detect_n_clique_tree_graded,
    free_product_nf,
    move_certificate,
    raag_str,
    replay_moves,
)
from raagqi.graphs import GraphError, SimplicialGraph
from raagqi.labels import FreeNonAbelian, abelian
from raagqi.raags import qi_class_label

from fixtures import (
    clique,
    cycle,
    path,
    path_plus_k4,
    path_plus_k4_plus_ear,
    pentagon,
    pentagon_leaf_edge_triangle,
    pentagon_plus_doubled_pentagon,
    pentagons_leaf_triangle,
    random_connected_graph,
    square,
    star_graph,
    triangle_tree,
    two_pentagons,
)


def disjoint(*graphs):
    verts, edges = [], []
    for i, g in enumerate(graphs):
        m = {v: "%s_%d" % (v, i) for v in g.vertices}
        verts += [m[v] for v in g.vertices]
        edges += [(m[u], m[v]) for u, v in g.edges()]
    return SimplicialGraph(verts, edges)


def edge_glued_pentagons():
    """Two pentagons sharing a single edge.  Biconnected, not a join,
    not a star double, so its class label is an unsound iso token."""
    return SimplicialGraph(
        list("01234567"),
        [("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "0"),
         ("1", "5"), ("5", "6"), ("6", "7"), ("7", "0")])


def tri_with_leaves():
    return SimplicialGraph(
        ["a", "b", "c", "la", "lb", "lc"],
        [("a", "b"), ("b", "c"), ("a", "c"),
         ("a", "la"), ("b", "lb"), ("c", "lc")])


F = FreeNonAbelian()
Z = abelian(1)


# --------------------------------------------------------------------------
# move certificates


def test_free_to_free_certificate_has_three_moves():
    src = [Factor("F2", F), Factor("F2", F)]
    dst = [Factor("F3", F), Factor("F3", F), Factor("Z", Z)]
    cert = move_certificate(src, dst)
    assert [type(mv) for mv in cert] == [TypeII, TypeII, TypeIII]
    assert cert[2].action == "add" and cert[2].factor.display == "Z"
    assert replay_moves(src, cert) == Counter(dst)


def test_identical_multisets_get_the_empty_certificate():
    fs = [Factor("P", qi_class_label(pentagon())), Factor("Z", Z)]
    assert move_certificate(fs, list(fs)) == []


def test_no_certificate_across_distinct_normal_forms():
    z2 = Factor("Z^2", abelian(2))
    z3 = Factor("Z^3", abelian(3))
    assert move_certificate([z2], [z3]) is None
    # one end versus infinitely many
    assert move_certificate([z2, Factor("Z", Z)], [z2]) is None


def test_no_certificate_when_an_unsound_factor_blocks_the_match():
    u = Factor("U", qi_class_label(edge_glued_pentagons()))
    p = Factor("P", qi_class_label(pentagon()))
    assert move_certificate([u, u], [p, u]) is None


def test_surplus_one_ended_factor_merges():
    z2 = Factor("Z^2", abelian(2))
    f = Factor("F", F)
    cert = move_certificate([z2, z2, f], [z2, f])
    assert cert == [TypeI("merge", z2)]
    assert replay_moves([z2, z2, f], cert) == Counter([z2, f])


def test_replay_rejects_bad_moves():
    z2 = Factor("Z^2", abelian(2))
    with pytest.raises(GraphError):
        replay_moves([Factor("Z", Z)], [TypeIII("remove", Factor("F2", F))])
    with pytest.raises(GraphError):
        replay_moves([z2], [TypeII(z2, Factor("Z^3", abelian(3)))])
    with pytest.raises(GraphError):
        replay_moves([z2], [TypeI("merge", z2)])
    with pytest.raises(GraphError):
        replay_moves([z2], [TypeIII("remove", z2)])
    with pytest.raises(GraphError):
        replay_moves([Factor("Z", Z)], [TypeI("duplicate", z2)])


_OPTIONS = [
    Factor("Z", Z), Factor("Z'", Z),
    Factor("F2", F), Factor("F3", F),
    Factor("Z^2", abelian(2)), Factor("Z^2'", abelian(2)),
    Factor("Z^3", abelian(3)),
    Factor("P", qi_class_label(pentagon())),
    Factor("P'", qi_class_label(pentagon())),
    Factor("U", qi_class_label(edge_glued_pentagons())),
]


@given(st.lists(st.sampled_from(_OPTIONS), max_size=6),
       st.lists(st.sampled_from(_OPTIONS), max_size=6))
@settings(max_examples=100, deadline=None)
def test_certificates_exist_exactly_on_equal_normal_forms(src, dst):
    """A certificate is produced iff the normal forms provably agree,
    and replaying any prefix of it stays inside that normal form."""
    nfa = free_product_nf([f.label for f in src])
    nfb = free_product_nf([f.label for f in dst])
    cert = move_certificate(src, dst)
    assert (cert is not None) == (nfa.sound_vs(nfb) == "equal")
    if cert is None:
        return
    assert replay_moves(src, cert) == Counter(dst)
    for k in range(len(cert) + 1):
        state = replay_moves(src, cert[:k])
        nfk = free_product_nf([f.label for f in state.elements()])
        assert nfk.sound_vs(nfb) == "equal"


# --------------------------------------------------------------------------
# clique tree-graded detection


def test_detection_on_the_known_shapes():
    assert detect_n_clique_tree_graded(triangle_tree()) == 3
    assert detect_n_clique_tree_graded(tri_with_leaves()) == 3
    assert detect_n_clique_tree_graded(path(4)) == 2
    assert detect_n_clique_tree_graded(path(7)) == 2


def test_detection_rejects_non_tree_graded_graphs():
    assert detect_n_clique_tree_graded(pentagon()) is None
    assert detect_n_clique_tree_graded(clique(4)) is None
    assert detect_n_clique_tree_graded(cycle(6)) is None
    # too small a diameter
    assert detect_n_clique_tree_graded(star_graph(3)) is None
    assert detect_n_clique_tree_graded(disjoint(path(4), path(4))) is None


def test_detection_rejects_mixed_block_sizes():
    g = SimplicialGraph(
        ["t1", "t2", "t3", "l2", "l3", "a", "b"],
        [("t1", "t2"), ("t2", "t3"), ("t1", "t3"),
         ("t2", "l2"), ("t3", "l3"), ("t1", "a"), ("a", "b")])
    assert detect_n_clique_tree_graded(g) is None


# --------------------------------------------------------------------------
# witness rendering


def test_group_rendering():
    assert raag_str(clique(3)) == "Z^3"
    assert raag_str(SimplicialGraph(["a", "b"], [])) == "F2"
    assert cylinder_group_str(path_plus_k4_plus_ear(), "1") == "Z x (Z * Z^2)"
    assert (cylinder_group_str(pentagons_leaf_triangle(), "v")
            == "Z x (F2 * F2 * Z * Z^2)")


# --------------------------------------------------------------------------
# verdict plumbing


def test_verdict_rejects_unknown_tags():
    with pytest.raises(GraphError):
        Verdict("Maybe", [], {})


def test_exit_codes():
    assert Verdict("EquivalentAndQI", [], {}).exit_code == 0
    assert Verdict("EquivalentDovetailUnknown", [], {}).exit_code == 3
    assert Verdict("WeaklyEquivalentNotEquivalent", [], {}).exit_code == 1
    assert Verdict("NotWeaklyEquivalent", [], {}).exit_code == 1
    assert Verdict("Unknown", [], {}).exit_code == 3
    assert Verdict("NotWeaklyEquivalent", [], {}).not_qi
    assert not Verdict("Unknown", [], {}).not_qi


# --------------------------------------------------------------------------
# compare: degenerate and trivial-tree cases


def test_finite_and_two_ended_inputs():
    empty = SimplicialGraph([], [])
    assert compare(empty, empty).tag == "EquivalentAndQI"
    assert compare(clique(1), clique(1)).tag == "EquivalentAndQI"
    assert compare(clique(1), pentagon()).tag == "NotWeaklyEquivalent"
    assert compare(empty, clique(1)).tag == "NotWeaklyEquivalent"


def test_small_one_ended_inputs():
    assert compare(clique(2), clique(2)).tag == "EquivalentAndQI"
    # Z x F2 and Z x F3 carry the same product label
    assert compare(path(3), star_graph(3)).tag == "EquivalentAndQI"


def test_whole_graph_rigid_comparisons():
    assert compare(pentagon(), pentagon()).tag == "EquivalentAndQI"
    assert compare(pentagon(), square()).tag == "NotWeaklyEquivalent"
    v = compare(pentagon(), edge_glued_pentagons())
    assert v.tag == "Unknown"
    assert v.exit_code == 3


def test_unsound_labels_with_equal_codes_still_decide():
    g = edge_glued_pentagons()
    h = g.relabel({v: "x%s" % v for v in g.vertices})
    assert compare(g, h).tag == "EquivalentAndQI"


def test_point_tree_against_nontrivial_tree():
    v = compare(pentagon(), pentagon_leaf_edge_triangle())
    assert v.tag == "NotWeaklyEquivalent"
    assert any("point" in w for w in v.witnesses)
    assert compare(star_graph(3), path(4)).tag == "NotWeaklyEquivalent"


def test_tree_graded_fast_path():
    v = compare(triangle_tree(), tri_with_leaves())
    assert v.tag == "EquivalentAndQI"
    assert any("3-clique" in w for w in v.witnesses)
    assert compare(path(4), path(7)).tag == "EquivalentAndQI"
    w = compare(tri_with_leaves(), path(4))
    assert w.tag == "NotWeaklyEquivalent"
    assert w.exit_code == 1


def test_doubled_pentagon_matches_its_base():
    from fixtures import doubled_pentagon
    assert compare(pentagon(), doubled_pentagon()).tag == "EquivalentAndQI"


# --------------------------------------------------------------------------
# compare: the decorated-tree pipeline


def test_cylinder_mismatch_is_witnessed():
    v = compare(path_plus_k4(), path_plus_k4_plus_ear())
    assert v.tag == "NotWeaklyEquivalent"
    assert v.exit_code == 1
    assert any("Z x (Z * Z^2)" in w for w in v.witnesses)
    assert v.report["equal"]["naive"] is False


def test_non_peripheral_abelian_factor_is_witnessed():
    v = compare(pentagons_leaf_triangle(), two_pentagons())
    assert v.tag == "NotWeaklyEquivalent"
    assert any("Z^2" in w for w in v.witnesses)


def test_stretch_factors_separate_weakly_equivalent_trees():
    v = compare(two_pentagons(), pentagon_plus_doubled_pentagon())
    assert v.tag == "WeaklyEquivalentNotEquivalent"
    assert v.exit_code == 1
    assert v.report["equal"]["naive"] is True
    assert v.report["equal"]["embellished"] is False
    assert sorted(v.report["stretchSets"]["A"].values()) == [["1/1", "1/1"]]
    assert sorted(v.report["stretchSets"]["B"].values()) == [["1/1", "2/1"]]
    assert any("relative stretch multiset" in w for w in v.witnesses)
    ledger = v.report["stretchLedgers"]["B"]
    assert any("2" in entry["stretch"].values() for entry in ledger.values())


def test_equivalent_nontrivial_trees_pass_the_gate():
    g = two_pentagons()
    h = g.relabel({v: "x%s" % v for v in g.vertices})
    v = compare(g, h)
    assert v.tag == "EquivalentAndQI"
    assert v.report["dovetail"] == {"A": "known-dovetail", "B": "known-dovetail"}


# --------------------------------------------------------------------------
# compare: free products


def test_ends_gate():
    assert compare(pentagon(), disjoint(pentagon(), clique(1))).tag \
        == "NotWeaklyEquivalent"
    assert compare(clique(1), disjoint(clique(1), clique(1))).tag \
        == "NotWeaklyEquivalent"


def test_free_groups_of_different_ranks_match():
    v = compare(disjoint(clique(1), clique(1)),
                disjoint(*[clique(1)] * 5))
    assert v.tag == "EquivalentAndQI"
    assert len(v.report["certificates"]) == 3
    assert all(c["move"] == "III" and c["action"] == "add"
               for c in v.report["certificates"])


def test_extra_flat_factor_is_not_free():
    v = compare(disjoint(clique(1), clique(1)),
                disjoint(clique(1), clique(2)))
    assert v.tag == "NotWeaklyEquivalent"


def test_extra_line_factor_is_absorbed():
    v = compare(disjoint(pentagon(), clique(1)),
                disjoint(pentagon(), clique(1), clique(1)))
    assert v.tag == "EquivalentAndQI"
    assert len(v.report["certificates"]) == 1
    assert v.report["certificates"][0]["move"] == "III"


def test_factor_comparison_recurses_into_the_pipeline():
    v = compare(disjoint(triangle_tree(), clique(1)),
                disjoint(tri_with_leaves(), clique(1)))
    assert v.tag == "EquivalentAndQI"


def test_unmatched_factor_found_by_recursion():
    v = compare(disjoint(edge_glued_pentagons(), clique(1)),
                disjoint(edge_glued_pentagons(), path(4), clique(1)))
    assert v.tag == "NotWeaklyEquivalent"
    assert any("no counterpart" in w for w in v.witnesses)


def pentagon_hexagon_glued():
    return SimplicialGraph(
        [str(i) for i in range(9)],
        [("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "0"),
         ("1", "5"), ("5", "6"), ("6", "7"), ("7", "8"), ("8", "0")])


def test_undecidable_factor_comparison_stays_unknown():
    # a product label against an unsound token is still decisive, so the
    # undecided case needs two distinct unsound tokens
    v = compare(disjoint(edge_glued_pentagons(), clique(1)),
                disjoint(pentagon_hexagon_glued(), clique(1)))
    assert v.tag == "Unknown"
    w = compare(disjoint(edge_glued_pentagons(), clique(1)),
                disjoint(square(), clique(1)))
    assert w.tag == "NotWeaklyEquivalent"


# --------------------------------------------------------------------------
# hygiene: symmetry, determinism, serialization


@pytest.mark.parametrize("make_a,make_b", [
    (path_plus_k4, path_plus_k4_plus_ear),
    (pentagons_leaf_triangle, two_pentagons),
    (two_pentagons, pentagon_plus_doubled_pentagon),
    (pentagon, edge_glued_pentagons),
])
def test_verdict_tags_are_symmetric(make_a, make_b):
    assert compare(make_a(), make_b()).tag == compare(make_b(), make_a()).tag


def test_reports_are_deterministic():
    one = compare(two_pentagons(), pentagon_plus_doubled_pentagon()).to_json()
    two = compare(two_pentagons(), pentagon_plus_doubled_pentagon()).to_json()
    assert one == two
    doc = json.loads(one)
    assert doc["verdict"] == "WeaklyEquivalentNotEquivalent"
    assert doc["witnesses"]


def test_relabelling_never_produces_a_negative_verdict():
    for n, seed in ((5, 0), (6, 1), (7, 2), (8, 3)):
        g = random_connected_graph(n, seed)
        h = g.relabel({v: "y%s" % v for v in g.vertices})
        assert not compare(g, h).not_qi


# --------------------------------------------------------------------------
# corpus classification


def test_classify_corpus_partitions_and_records_verdicts():
    out = classify_corpus([pentagon(), clique(5), path(4), path(7)])
    assert out["classes"] == [["g000"], ["g001"], ["g002", "g003"]]
    assert out["verdicts"]["g002|g003"] == "EquivalentAndQI"
    assert out["unknownPairs"] == []


def test_classify_corpus_checks_names():
    with pytest.raises(GraphError):
        classify_corpus([pentagon()], names=["a", "b"])
