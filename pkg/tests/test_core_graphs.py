import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from subset_currents.core_graphs import (GammaGraph, circle, components, core, disjoint_union,
                                         empty_graph, fold, is_cyclically_reduced, is_folded,
                                         isomorphic, link, marking_from_pairs,
                                         random_folded_graph, rose, subgroup_graph,
                                         validate_marking, wedge_of_paths)
from subset_currents.errors import GraphFormatError, MarkingError, NotFoldedError

from conftest import MARKINGS


def test_validate_markings(rose2, theta_graph):
    assert validate_marking(rose2) == 2
    assert validate_marking(theta_graph) == 2
    assert validate_marking(rose(3)) == 3


def test_single_edge_marking_rejected():
    g = marking_from_pairs(2, [("x", 0, 1)])
    with pytest.raises(MarkingError) as exc:
        validate_marking(g)
    assert exc.value.reason == "degree"


def test_degree_two_allowed_on_request():
    # a circle of two edges with a loop at each vertex: degrees 4, 4
    g = marking_from_pairs(3, [("x", 0, 1), ("y", 1, 2), ("z", 2, 0), ("w", 0, 0)])
    with pytest.raises(MarkingError):
        validate_marking(g)
    assert validate_marking(g, allow_degree_2=True) == 2


def test_disconnected_marking():
    g = marking_from_pairs(2, [("a", 0, 0), ("b", 0, 0), ("c", 1, 1), ("d", 1, 1)])
    with pytest.raises(MarkingError) as exc:
        validate_marking(g)
    assert exc.value.reason == "disconnected"


def test_rank_one_marking():
    g = marking_from_pairs(1, [("a", 0, 0)])
    with pytest.raises(MarkingError) as exc:
        validate_marking(g)
    assert exc.value.reason == "degree"


def test_duplicate_names_break_involution():
    with pytest.raises(MarkingError):
        marking_from_pairs(1, [("a", 0, 0, "b"), ("b", 0, 0)])


def test_links(rose2):
    a, A, b, B = (rose2.label(x) for x in "aAbB")
    identity = GammaGraph(rose2, (0,), ((0, 0, a), (0, 0, b)))
    assert link(identity, 0) == Counter({a: 1, A: 1, b: 1, B: 1})
    assert link(circle(rose2, "a"), 0) == Counter({a: 1, A: 1})
    wedge = wedge_of_paths(rose2, ["a", "a"])
    assert link(wedge, 0) == Counter({a: 2, A: 2})


def test_folded(rose2):
    assert is_folded(circle(rose2, "ab"))
    assert not is_folded(wedge_of_paths(rose2, ["a", "a"]))
    assert is_folded(subgroup_graph(rose2, ["aa", "b"]))


def test_fold_examples(rose2, rose3):
    assert isomorphic(fold(wedge_of_paths(rose2, ["a", "a"])), circle(rose2, "a"))
    d = fold(wedge_of_paths(rose3, ["ab", "ac"]))
    assert is_folded(d)
    assert d.num_vertices == 2 and d.num_edges == 3


def test_fold_idempotent(rose2):
    d = subgroup_graph(rose2, ["aab", "bA"])
    assert fold(d) == d


def test_core_examples(rose2):
    d = circle(rose2, "ab")
    assert core(d) == d
    a = rose2.label("a")
    b = rose2.label("b")
    hanging = GammaGraph(rose2, (0, 0), ((0, 0, a), (0, 1, b)))
    assert isomorphic(core(hanging), circle(rose2, "a"))
    tree = GammaGraph(rose2, (0, 0, 0), ((0, 1, a), (1, 2, b)))
    assert core(tree).is_empty()
    with pytest.raises(NotFoldedError):
        core(wedge_of_paths(rose2, ["a", "a"]))


def test_subgroup_graphs(rose2):
    assert subgroup_graph(rose2, ["a", "b"]).num_vertices == 1
    d = subgroup_graph(rose2, ["a"])
    assert d.num_vertices == 1 and d.num_edges == 1
    h = subgroup_graph(rose2, ["aa", "b", "abA"])
    assert h.num_vertices == 2 and h.betti == 3
    assert is_cyclically_reduced(h)


def test_isomorphic_examples(rose2):
    d = subgroup_graph(rose2, ["aab", "bA"])
    assert isomorphic(d, d)
    assert not isomorphic(circle(rose2, "aa"), circle(rose2, "a"))
    assert isomorphic(circle(rose2, "ab"), circle(rose2, "ba"))
    assert not isomorphic(circle(rose2, "ab"), circle(rose2, "aB"))


def test_components(rose2):
    d = disjoint_union([circle(rose2, "a"), circle(rose2, "ab"), circle(rose2, "a")])
    parts = components(d)
    assert sorted(p.num_vertices for p in parts) == [1, 1, 2]
    assert isomorphic(d, disjoint_union([circle(rose2, "ba"), circle(rose2, "a"),
                                         circle(rose2, "a")]))
    assert not isomorphic(d, disjoint_union([circle(rose2, "ab"), circle(rose2, "aa")]))


def test_edge_label_must_respect_types(theta_graph):
    x = theta_graph.label("x")
    with pytest.raises(GraphFormatError):
        GammaGraph(theta_graph, (0, 0), ((0, 1, x),))


def test_empty_graph_not_cyclically_reduced(rose2):
    # the empty graph carries no counting current and is rejected downstream
    assert not is_cyclically_reduced(empty_graph(rose2))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), name=st.sampled_from(sorted(MARKINGS)),
       n=st.integers(1, 8))
def test_core_properties(seed, name, n):
    g = MARKINGS[name]
    d = random_folded_graph(g, n, random.Random(seed))
    assert is_folded(d)
    c = core(d)
    assert c.is_empty() or is_cyclically_reduced(c)
    assert c.betti == d.betti
    if not c.is_empty():
        assert core(c) == c


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), name=st.sampled_from(sorted(MARKINGS)))
def test_isomorphic_under_relabeling(seed, name):
    rng = random.Random(seed)
    g = MARKINGS[name]
    d = random_folded_graph(g, rng.randint(1, 7), rng)
    perm = list(range(d.num_vertices))
    rng.shuffle(perm)
    vt = [0] * d.num_vertices
    for v, x in enumerate(d.vertex_type):
        vt[perm[v]] = x
    edges = [(perm[o], perm[t], lab) for o, t, lab in d.edges]
    rng.shuffle(edges)
    # flip some edges to their reverse orientation
    edges = [(t, o, lab ^ 1) if rng.random() < 0.5 else (o, t, lab) for o, t, lab in edges]
    e = GammaGraph(g, tuple(vt), tuple(edges))
    assert isomorphic(d, e)


def test_fold_matches_subgroup_membership(rose2):
    d = subgroup_graph(rose2, ["ab", "ba"])
    assert d.betti == 2
    assert is_cyclically_reduced(d)


def test_theta_subgroup(theta_graph):
    d = subgroup_graph(theta_graph, [["x", "Y"], ["x", "Z"]])
    assert d.num_vertices == 2 and d.num_edges == 3
    assert isomorphic(d, GammaGraph(theta_graph, (0, 1), tuple(
        (0, 1, theta_graph.label(n)) for n in "xyz")))
