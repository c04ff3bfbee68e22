"""Brute-force reference computations used to check the library.

These deliberately avoid the library's shape encodings and memoized
enumerations: they work on explicit vertex maps and edge subsets.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

from subset_currents.core_graphs import GammaGraph, MarkingGraph
from subset_currents.trees import GammaTree, RoundGraph, child, completions


def _link(d: GammaGraph, x: int) -> Counter:
    c = Counter()
    for o, t, lab in d.edges:
        if o == x:
            c[lab] += 1
        if t == x:
            c[lab ^ 1] += 1
    return c


def brute_occurrences(k: GammaGraph, d: GammaGraph) -> int:
    """Count all vertex maps k -> d that are label-preserving graph morphisms
    with link equality at the non-terminal vertices of k.

    Backtracking over the vertices of k; a partial map is dropped as soon as
    an edge between assigned vertices has no image.
    """
    d_edges = Counter((o, t, lab) for o, t, lab in d.edges)
    for o, t, lab in d.edges:
        d_edges[(t, o, lab ^ 1)] += 1
    n = k.num_vertices
    inner = {u for u in range(n) if sum(_link(k, u).values()) >= 2}
    d_links = [_link(d, x) for x in range(d.num_vertices)]
    k_links = [_link(k, u) for u in range(n)]
    nbrs = [[] for _ in range(n)]
    for o, t, lab in k.edges:
        nbrs[t].append((o, lab))  # o -> t labeled lab
        nbrs[o].append((t, lab ^ 1))
    f = [None] * n

    def ok(u, x):
        if d.vertex_type[x] != k.vertex_type[u]:
            return False
        if u in inner and (set(k_links[u]) != set(d_links[x]) or max(d_links[x].values()) > 1):
            return False
        return all(d_edges[(f[w], x, lab)] for w, lab in nbrs[u] if f[w] is not None)

    def place(u):
        if u == n:
            return 1
        total = 0
        for x in range(d.num_vertices):
            if ok(u, x):
                f[u] = x
                total += place(u + 1)
                f[u] = None
        return total

    return place(0)


def cover_ball_edges(g: MarkingGraph, r: int):
    """Explicit radius-r ball around a vertex of the universal cover of a one-vertex marking.

    Returns a list of ``(parent index, label, depth)`` for every edge, parents
    are edge indices (-1 for the root).
    """
    edges = []
    frontier = [(-1, None)]
    for depth in range(1, r + 1):
        nxt = []
        for parent, came in frontier:
            for lab in range(g.num_oriented):
                if came is not None and lab == came ^ 1:
                    continue
                edges.append((parent, lab, depth))
                nxt.append((len(edges) - 1, lab))
        frontier = nxt
    return edges


def brute_round_count(g: MarkingGraph, r: int) -> int:
    """Number of grade-r round subtrees of the cover ball around its root.

    Only the deepest edges are chosen freely; a choice is valid iff the
    ancestors it forces give every non-leaf vertex at least one child and the
    root at least two children.
    """
    edges = cover_ball_edges(g, r)
    deepest = [i for i, e in enumerate(edges) if e[2] == r]
    count = 0
    for mask in range(1, 2 ** len(deepest)):
        chosen = {deepest[i] for i in range(len(deepest)) if mask >> i & 1}
        closed = set(chosen)
        for i in chosen:
            p = edges[i][0]
            while p >= 0 and p not in closed:
                closed.add(p)
                p = edges[p][0]
        roots = sum(1 for i in closed if edges[i][0] == -1)
        if roots >= 2:
            count += 1
    return count


def brute_switch_violations(t) -> dict[str, tuple[Fraction, Fraction]]:
    """Semi-round classes (by oriented key of the materialized child) whose two
    explicit completion sums differ."""
    g = t.marking
    seen = set()
    bad = {}
    for key in t.entries:
        k = RoundGraph.from_key(g, key)
        for e in range(2 * k.tree.num_edges):
            if k.tree.origin(e) != k.center:
                continue
            j = child(k, e)
            if j.key() in seen:
                continue
            seen.add(j.key())
            o_sum = sum((t[c.key()] for c in completions(j, "origin")), Fraction(0))
            t_sum = sum((t[c.key()] for c in completions(j, "terminus")), Fraction(0))
            if j.reversed_storage():
                # report sides relative to the canonical axis orientation
                o_sum, t_sum = t_sum, o_sum
            if o_sum != t_sum:
                bad[j.key()] = (o_sum, t_sum)
    return bad


def child_class_signature(key: str, g: MarkingGraph) -> Counter:
    """Signed count of the semi-round classes of the children of one round graph."""
    k = RoundGraph.from_key(g, key)
    sig = Counter()
    for e in range(2 * k.tree.num_edges):
        if k.tree.origin(e) == k.center:
            j = child(k, e)
            sig[j.key()] += -1 if j.reversed_storage() else 1
    return sig


def extension_count(g: MarkingGraph, label: int, m: int) -> int:
    """Direct recursion over nonempty subsets of continuations."""
    if m == 0:
        return 1
    conts = [e for e in g.star(g.terminus(label)) if e != label ^ 1]
    total = 0
    for size in range(1, len(conts) + 1):
        for subset in itertools.combinations(conts, size):
            prod = 1
            for c in subset:
                prod *= extension_count(g, c, m - 1)
            total += prod
    return total


def permuted(tree: GammaTree, perm: list[int]) -> GammaTree:
    """Same tree with vertex ids renamed by ``perm`` and edges listed in reverse."""
    n = tree.num_vertices
    vt = [0] * n
    for v in range(n):
        vt[perm[v]] = tree.vertex_type[v]
    edges = tuple((perm[o], perm[t], lab) for o, t, lab in reversed(tree.edges))
    return GammaTree(tree.marking, tuple(vt), edges)

