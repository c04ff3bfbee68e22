"""Marking graphs and finite Gamma-graphs.

A marking graph ``Gamma`` has oriented edges numbered ``0 .. 2E-1``; the
edge-pair ``i`` consists of oriented edges ``2i`` and ``2i + 1`` and the
inverse of an oriented edge ``e`` is ``e ^ 1``.  A Gamma-graph stores its
edge-pairs as ``(origin, terminus, label)`` triples where ``label`` is an
oriented edge of the marking; the reverse orientation carries ``label ^ 1``.
Oriented edges of a Gamma-graph follow the same ``2i`` / ``2i + 1`` scheme.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GraphFormatError, MarkingError, NotFoldedError


def inverse(e: int) -> int:
    return e ^ 1


@dataclass(frozen=True)
class MarkingGraph:
    """The finite graph Gamma fixing the identification of F_N with pi_1."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    names: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) != 2 * len(self.edges):
            raise GraphFormatError("need one name per oriented edge")
        if len(set(self.names)) != len(self.names):
            raise MarkingError("broken involution", "oriented edge names must be distinct")
        for o, t in self.edges:
            if not (0 <= o < self.num_vertices and 0 <= t < self.num_vertices):
                raise GraphFormatError(f"edge endpoint out of range: {(o, t)}")

    @property
    def num_oriented(self) -> int:
        return 2 * len(self.edges)

    def origin(self, e: int) -> int:
        o, t = self.edges[e >> 1]
        return t if e & 1 else o

    def terminus(self, e: int) -> int:
        o, t = self.edges[e >> 1]
        return o if e & 1 else t

    @cached_property
    def stars(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.num_vertices)]
        for e in range(self.num_oriented):
            out[self.origin(e)].append(e)
        return tuple(tuple(s) for s in out)

    def star(self, v: int) -> tuple[int, ...]:
        return self.stars[v]

    def degree(self, v: int) -> int:
        return len(self.stars[v])

    @property
    def betti(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: e for e, name in enumerate(self.names)}

    def label(self, x: int | str) -> int:
        """Oriented edge id for a name (ints pass through after a range check)."""
        if isinstance(x, str):
            try:
                return self._index[x]
            except KeyError:
                raise GraphFormatError(f"unknown label {x!r}") from None
        if not 0 <= x < self.num_oriented:
            raise GraphFormatError(f"unknown label {x!r}")
        return x

    def name(self, e: int) -> str:
        return self.names[e]

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for e in self.stars[v]:
                w = self.terminus(e)
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.num_vertices


def _inverse_name(name: str) -> str:
    swapped = name.swapcase()
    return swapped if swapped != name else name + "'"


def marking_from_pairs(num_vertices: int, pairs: Sequence[tuple]) -> MarkingGraph:
    """Build a marking from ``(name, origin, terminus[, inverse_name])`` rows."""
    edges = []
    names = []
    for row in pairs:
        name, o, t = row[:3]
        inv = row[3] if len(row) > 3 else _inverse_name(name)
        edges.append((o, t))
        names.extend([name, inv])
    return MarkingGraph(num_vertices, tuple(edges), tuple(names))


def rose(n: int, letters: str = "abcdefghijklmnopqrstuvwxyz") -> MarkingGraph:
    """The N-rose: one vertex, ``n`` loops named a, b, ... with inverses A, B, ..."""
    return marking_from_pairs(1, [(letters[i], 0, 0) for i in range(n)])


def theta() -> MarkingGraph:
    """Two vertices joined by three edges x, y, z (from 0 to 1)."""
    return marking_from_pairs(2, [("x", 0, 1), ("y", 0, 1), ("z", 0, 1)])


def validate_marking(g: MarkingGraph, allow_degree_2: bool = False) -> int:
    """Return the rank N of pi_1(g); raise :class:`MarkingError` on the first violation."""
    for e in range(g.num_oriented):
        if g.origin(e ^ 1) != g.terminus(e):
            raise MarkingError("broken involution", f"edge {g.name(e)}")
    if not g.is_connected():
        raise MarkingError("disconnected")
    min_degree = 2 if allow_degree_2 else 3
    for v in range(g.num_vertices):
        if g.degree(v) < min_degree:
            raise MarkingError("degree", f"vertex {v} has degree {g.degree(v)} < {min_degree}")
    if g.betti < 2:
        raise MarkingError("betti", f"first betti number {g.betti} < 2")
    return g.betti


@dataclass(frozen=True)
class GammaGraph:
    """A finite graph with a label morphism to the marking graph.

    ``edges[i] = (origin, terminus, label)`` describes oriented edge ``2i``;
    oriented edge ``2i + 1`` runs backwards with label ``label ^ 1``.
    """

    marking: MarkingGraph
    vertex_type: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        g = self.marking
        n = len(self.vertex_type)
        for x in self.vertex_type:
            if not 0 <= x < g.num_vertices:
                raise GraphFormatError(f"vertex type {x} not a vertex of the marking")
        for o, t, lab in self.edges:
            if not (0 <= o < n and 0 <= t < n):
                raise GraphFormatError(f"edge endpoint out of range: {(o, t)}")
            if not 0 <= lab < g.num_oriented:
                raise GraphFormatError(f"unknown label {lab}")
            if g.origin(lab) != self.vertex_type[o] or g.terminus(lab) != self.vertex_type[t]:
                raise GraphFormatError(
                    f"edge {(o, t)} labeled {g.name(lab)} does not respect vertex types"
                )

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_type)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def betti(self) -> int:
        return self.num_edges - self.num_vertices + len(components_of(self))

    def origin(self, oe: int) -> int:
        o, t, _ = self.edges[oe >> 1]
        return t if oe & 1 else o

    def terminus(self, oe: int) -> int:
        o, t, _ = self.edges[oe >> 1]
        return o if oe & 1 else t

    def label(self, oe: int) -> int:
        return self.edges[oe >> 1][2] ^ (oe & 1)

    @cached_property
    def out(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per vertex: ``(label, neighbour, oriented edge id)`` for every outgoing edge."""
        out = [[] for _ in range(self.num_vertices)]
        for i, (o, t, lab) in enumerate(self.edges):
            out[o].append((lab, t, 2 * i))
            out[t].append((lab ^ 1, o, 2 * i + 1))
        return tuple(tuple(sorted(row)) for row in out)

    @cached_property
    def step(self) -> tuple[dict[int, int], ...]:
        """Per vertex: label -> neighbour.  Meaningful only for folded graphs."""
        return tuple({lab: w for lab, w, _ in row} for row in self.out)

    def degree(self, v: int) -> int:
        return len(self.out[v])

    def is_empty(self) -> bool:
        return self.num_vertices == 0


def empty_graph(g: MarkingGraph) -> GammaGraph:
    return GammaGraph(g, (), ())


def link(d: GammaGraph, x: int) -> Counter:
    """Number of outgoing edges at ``x`` per marking label."""
    if not 0 <= x < d.num_vertices:
        raise KeyError(f"unknown vertex {x}")
    return Counter(lab for lab, _, _ in d.out[x])


def is_folded(d: GammaGraph) -> bool:
    for row in d.out:
        labels = [lab for lab, _, _ in row]
        if len(labels) != len(set(labels)):
            return False
    return True


def is_cyclically_reduced(d: GammaGraph) -> bool:
    return (not d.is_empty() and is_folded(d)
            and all(d.degree(v) >= 2 for v in range(d.num_vertices)))


def _relabel(d: GammaGraph, keep: Iterable[int], edges: Iterable[tuple[int, int, int]]):
    keep = sorted(keep)
    new_id = {v: i for i, v in enumerate(keep)}
    vt = tuple(d.vertex_type[v] for v in keep)
    es = tuple((new_id[o], new_id[t], lab) for o, t, lab in edges)
    return GammaGraph(d.marking, vt, es)


def fold(d: GammaGraph) -> GammaGraph:
    """Stallings folding: identify edges sharing origin and label until none remain."""
    parent = list(range(d.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a == b:
            return False
        if b < a:
            a, b = b, a
        parent[b] = a
        return True

    oriented = []
    for o, t, lab in d.edges:
        oriented.append((o, lab, t))
        oriented.append((t, lab ^ 1, o))
    changed = True
    while changed:
        changed = False
        seen = {}
        for o, lab, t in oriented:
            key = (find(o), lab)
            if key in seen:
                changed |= union(seen[key], t)
                seen[key] = find(seen[key])
            else:
                seen[key] = find(t)

    merged = []
    done = set()
    for o, t, lab in d.edges:
        o, t = find(o), find(t)
        # one representative orientation per edge-pair: the even label
        rep = (o, t, lab) if lab % 2 == 0 else (t, o, lab ^ 1)
        if rep not in done:
            done.add(rep)
            merged.append((o, t, lab))
    roots = {find(v) for v in range(d.num_vertices)}
    return _relabel(d, roots, merged)


def core(d: GammaGraph) -> GammaGraph:
    """Prune degree <= 1 vertices repeatedly; result is empty or cyclically reduced."""
    if not is_folded(d):
        raise NotFoldedError("core expects a folded graph")
    deg = [d.degree(v) for v in range(d.num_vertices)]
    alive = [True] * d.num_vertices
    todo = deque(v for v in range(d.num_vertices) if deg[v] <= 1)
    while todo:
        v = todo.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for _, w, _ in d.out[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    todo.append(w)
    keep = [v for v in range(d.num_vertices) if alive[v]]
    edges = [(o, t, lab) for o, t, lab in d.edges if alive[o] and alive[t]]
    return _relabel(d, keep, edges)


def wedge_of_paths(g: MarkingGraph, loops: Sequence[Sequence[int | str]]) -> GammaGraph:
    """Unfolded wedge of closed edge-paths of ``g`` at a common base vertex."""
    loops = [[g.label(x) for x in loop] for loop in loops]
    loops = [loop for loop in loops if loop]
    if not loops:
        raise GraphFormatError("need at least one nonempty loop")
    base = g.origin(loops[0][0])
    vt = [base]
    edges = []
    for loop in loops:
        if g.origin(loop[0]) != base:
            raise GraphFormatError("loops must start at a common base vertex")
        for a, b in zip(loop, loop[1:]):
            if g.terminus(a) != g.origin(b):
                raise GraphFormatError(f"not an edge-path: {g.name(a)} then {g.name(b)}")
        if g.terminus(loop[-1]) != base:
            raise GraphFormatError("path is not closed")
        prev = 0
        for i, lab in enumerate(loop):
            if i == len(loop) - 1:
                nxt = 0
            else:
                nxt = len(vt)
                vt.append(g.terminus(lab))
            edges.append((prev, nxt, lab))
            prev = nxt
    return GammaGraph(g, tuple(vt), tuple(edges))


def subgroup_graph(g: MarkingGraph, loops: Sequence[Sequence[int | str]]) -> GammaGraph:
    """Core graph of the subgroup generated by the given closed paths."""
    return core(fold(wedge_of_paths(g, loops)))


def circle(g: MarkingGraph, word: Sequence[int | str]) -> GammaGraph:
    """A simple cycle reading ``word`` (a closed edge-path of ``g``)."""
    word = [g.label(x) for x in word]
    n = len(word)
    if n == 0:
        raise GraphFormatError("empty word")
    for i in range(n):
        if g.terminus(word[i]) != g.origin(word[(i + 1) % n]):
            raise GraphFormatError("word is not a closed edge-path")
    vt = tuple(g.origin(lab) for lab in word)
    edges = tuple((i, (i + 1) % n, lab) for i, lab in enumerate(word))
    return GammaGraph(g, vt, edges)


def disjoint_union(graphs: Sequence[GammaGraph]) -> GammaGraph:
    if not graphs:
        raise ValueError("need at least one graph")
    g = graphs[0].marking
    vt = []
    edges = []
    for d in graphs:
        if d.marking != g:
            raise ValueError("graphs over different markings")
        off = len(vt)
        vt.extend(d.vertex_type)
        edges.extend((o + off, t + off, lab) for o, t, lab in d.edges)
    return GammaGraph(g, tuple(vt), tuple(edges))


def components_of(d: GammaGraph) -> list[list[int]]:
    """Vertex sets of connected components, ordered by smallest vertex."""
    seen = [False] * d.num_vertices
    comps = []
    for s in range(d.num_vertices):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        todo = [s]
        while todo:
            v = todo.pop()
            for _, w, _ in d.out[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    todo.append(w)
        comps.append(sorted(comp))
    return comps


def components(d: GammaGraph) -> list[GammaGraph]:
    result = []
    for comp in components_of(d):
        members = set(comp)
        edges = [e for e in d.edges if e[0] in members]
        result.append(_relabel(d, comp, edges))
    return result


def _anchored_iso(d1: GammaGraph, d2: GammaGraph, x: int, y: int) -> bool:
    """Try to extend x -> y to a label-preserving isomorphism of connected folded graphs."""
    if d1.vertex_type[x] != d2.vertex_type[y]:
        return False
    phi = {x: y}
    used = {y}
    todo = [x]
    while todo:
        u = todo.pop()
        s1, s2 = d1.step[u], d2.step[phi[u]]
        if s1.keys() != s2.keys():
            return False
        for lab, w in s1.items():
            z = s2[lab]
            if w in phi:
                if phi[w] != z:
                    return False
            else:
                if z in used:
                    return False
                phi[w] = z
                used.add(z)
                todo.append(w)
    return len(phi) == d1.num_vertices == d2.num_vertices


def isomorphic(d1: GammaGraph, d2: GammaGraph) -> bool:
    """Label-preserving isomorphism test for folded (possibly disconnected) graphs."""
    if not (is_folded(d1) and is_folded(d2)):
        raise NotFoldedError("isomorphic expects folded graphs")
    if d1.marking != d2.marking:
        return False
    if (d1.num_vertices, d1.num_edges) != (d2.num_vertices, d2.num_edges):
        return False
    left = components(d1)
    right = components(d2)
    if sorted((c.num_vertices, c.num_edges) for c in left) != sorted(
        (c.num_vertices, c.num_edges) for c in right
    ):
        return False
    # component isomorphism is an equivalence relation, so greedy matching is exact
    for c1 in left:
        for j, c2 in enumerate(right):
            if (c1.num_vertices, c1.num_edges) != (c2.num_vertices, c2.num_edges):
                continue
            if any(_anchored_iso(c1, c2, 0, y) for y in range(c2.num_vertices)):
                del right[j]
                break
        else:
            return False
    return True


def random_folded_graph(g: MarkingGraph, n: int, rng: random.Random,
                        density: float = 0.8) -> GammaGraph:
    """Random folded graph on ``n`` vertices built from partial injections per edge-pair."""
    vt = tuple(rng.randrange(g.num_vertices) for _ in range(n))
    by_type = [[v for v in range(n) if vt[v] == x] for x in range(g.num_vertices)]
    edges = []
    for i, (o, t) in enumerate(g.edges):
        src = list(by_type[o])
        dst = list(by_type[t])
        rng.shuffle(dst)
        for u, w in zip(src, dst):
            if rng.random() < density:
                edges.append((u, w, 2 * i))
    return GammaGraph(g, vt, tuple(edges))


def random_cyclically_reduced(g: MarkingGraph, max_vertices: int, rng: random.Random,
                              density: float | None = None, attempts: int = 1000) -> GammaGraph:
    """Nonempty random cyclically reduced graph with at most ``max_vertices`` vertices.

    Raises ValueError when ``attempts`` samples all have an empty core (for
    instance when no cyclically reduced graph that small exists).
    """
    for _ in range(attempts):
        n = rng.randint(1, max_vertices)
        dens = density if density is not None else rng.uniform(0.5, 1.0)
        d = core(random_folded_graph(g, n, rng, dens))
        if not d.is_empty():
            return d
    raise ValueError(f"no nonempty core found in {attempts} samples with <= {max_vertices} vertices")
