import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from subset_currents.core_graphs import GammaGraph, circle, disjoint_union, subgroup_graph
from subset_currents.errors import NotCyclicallyReducedError, PreconditionError
from subset_currents.trees import (GammaTree, RoundGraph, admissible_extensions, ball,
                                   enumerate_round)
from subset_currents.weights import (WeightSystem, check_switch, occurrences, radius,
                                     radius_from, subtree_weight, weights_of)

from conftest import MARKINGS, random_graphs
from oracles import brute_occurrences, brute_switch_violations, child_class_signature
from test_trees import path, star


def test_occurrence_examples(rose2):
    ca = circle(rose2, "a")
    for r in (1, 2, 3):
        assert occurrences(path(rose2, "a" * (2 * r)), ca) == 1
    assert occurrences(star(rose2, "ab"), ca) == 0


def test_ball_occurs_at_least_once():
    for _, d in random_graphs(20, 6, seed=5):
        for u in range(d.num_vertices):
            assert occurrences(ball(d, u, 2).tree, d) >= 1


def test_occurrences_need_folded(rose2):
    from subset_currents.core_graphs import wedge_of_paths
    from subset_currents.errors import NotFoldedError
    with pytest.raises(NotFoldedError):
        occurrences(path(rose2, "a"), wedge_of_paths(rose2, ["a", "a"]))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), name=st.sampled_from(sorted(MARKINGS)))
def test_occurrences_match_brute_force(seed, name):
    rng = random.Random(seed)
    g = MARKINGS[name]
    from subset_currents.core_graphs import random_cyclically_reduced
    d = random_cyclically_reduced(g, 4, rng)
    # random subtree: a random sub-ball around a random vertex
    u = rng.randrange(d.num_vertices)
    b = ball(d, u, 2).tree
    keep = {0}
    for o, t, lab in b.edges:
        if o in keep and rng.random() < 0.6:
            keep.add(t)
    if len(keep) == 1:
        keep.add(b.edges[0][1])
    ids = {v: i for i, v in enumerate(sorted(keep))}
    k = GammaTree(g, tuple(b.vertex_type[v] for v in sorted(keep)),
                  tuple((ids[o], ids[t], lab) for o, t, lab in b.edges if o in ids and t in ids))
    assert occurrences(k, d) == brute_occurrences(k, d)


def test_weights_examples(rose2):
    t = weights_of(circle(rose2, "a"), 2)
    assert len(t) == 1
    assert t[RoundGraph(path(rose2, "aaaa"), 2, 2).key()] == 1
    full = GammaGraph(rose2, (0,), ((0, 0, 0), (0, 0, 2)))
    t = weights_of(full, 2)
    assert list(t.entries) == [ball(full, 0, 2).key()]
    assert t.total() == 1
    with pytest.raises(NotCyclicallyReducedError):
        weights_of(GammaGraph(rose2, (0, 0), ((0, 1, 0),)), 2)


def test_weights_additive_over_components(rose2):
    d1, d2 = circle(rose2, "ab"), subgroup_graph(rose2, ["aab", "bA"])
    assert weights_of(disjoint_union([d1, d2]), 3) == weights_of(d1, 3) + weights_of(d2, 3)


def test_vertex_count_and_switch_on_random_graphs():
    for _, d in random_graphs(60, 8, seed=1):
        for r in (2, 3):
            t = weights_of(d, r)
            assert t.total() == d.num_vertices
            assert check_switch(t) == []
            for key, value in t.items():
                assert value == occurrences(RoundGraph.from_key(d.marking, key).tree, d)


def test_check_switch_agrees_with_explicit_completions(rose2, theta_graph):
    rng = random.Random(2)
    for g in (rose2, theta_graph):
        keys = list(enumerate_round(g, 2))
        for _ in range(40):
            entries = {k: Fraction(rng.randint(1, 3)) for k in rng.sample(keys, rng.randint(1, 4))}
            t = WeightSystem(g, 2, entries)
            ours = {v.key: (v.origin_sum, v.terminus_sum) for v in check_switch(t)}
            assert ours == brute_switch_violations(t)


def test_single_entry_perturbation(rose2):
    d = subgroup_graph(rose2, ["aab", "bA"])
    t = weights_of(d, 2)
    for key in t.entries:
        sig = {c: s for c, s in child_class_signature(key, rose2).items() if s}
        bumped = WeightSystem(rose2, 2, {**t.entries, key: t[key] + 1})
        assert {v.key for v in check_switch(bumped)} == set(sig)


def test_zero_system_balanced(rose2):
    assert check_switch(WeightSystem(rose2, 2, {})) == []


def test_weight_system_validation(rose2):
    with pytest.raises(Exception):
        WeightSystem(rose2, 2, {"(0()2())": Fraction(1)})
    with pytest.raises(ValueError):
        WeightSystem(rose2, 1, {})
    with pytest.raises(TypeError):
        WeightSystem(rose2, 2, {RoundGraph(path(rose2, "aaaa"), 2, 2).key(): 0.5})


def test_radius_examples(rose2):
    assert radius(path(rose2, "a"))[0] == 1
    assert radius(path(rose2, "aaaa")) == (2, 2)
    assert radius(star(rose2, "aAb")) == (1, 0)


def test_subtree_weight_examples(rose2):
    t = weights_of(circle(rose2, "a"), 2)
    k = RoundGraph(path(rose2, "aaaa"), 2, 2)
    assert subtree_weight(k.tree, 2, t) == 1
    assert subtree_weight(path(rose2, "a"), 0, t) == 1
    assert subtree_weight(path(rose2, "a"), 1, t) == 1
    with pytest.raises(PreconditionError):
        subtree_weight(path(rose2, "aaaaa"), 0, t)


def test_subtree_weight_equals_occurrences():
    rng = random.Random(7)
    for _, d in random_graphs(30, 6, seed=3):
        r = rng.choice([2, 3])
        t = weights_of(d, r)
        u = rng.randrange(d.num_vertices)
        b = ball(d, u, r).tree
        keep = {0}
        for o, tt, lab in b.edges:
            if o in keep and rng.random() < 0.5:
                keep.add(tt)
        if len(keep) == 1:
            keep.add(b.edges[0][1])
        ids = {v: i for i, v in enumerate(sorted(keep))}
        k = GammaTree(d.marking, tuple(b.vertex_type[v] for v in sorted(keep)),
                      tuple((ids[o], ids[x], lab) for o, x, lab in b.edges
                            if o in ids and x in ids))
        truth = occurrences(k, d)
        for v in range(k.num_vertices):
            if radius_from(k, v) <= r:
                assert subtree_weight(k, v, t) == truth


def test_kirchhoff_single_step():
    for _, d in random_graphs(15, 6, seed=9):
        t = weights_of(d, 3)
        k = ball(d, 0, 1).tree
        e = next(e for e in range(2 * k.num_edges) if k.degree(k.terminus(e)) == 1)
        ext = admissible_extensions(k, e, 1)
        assert subtree_weight(k, 0, t) == sum(subtree_weight(x, 0, t) for x in ext)
