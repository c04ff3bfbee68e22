"""Finite folded Gamma-trees, round and semi-round graphs, and their canonical keys.

Translation classes of finite subtrees of the universal cover are handled
through *shapes*: a rooted folded tree is the nested tuple

    shape = ((label, child_shape), ...)      # sorted by label

listing the outgoing labels below a vertex (the edge towards the parent is
omitted).  Foldedness makes sibling labels distinct, so sorting by label is a
canonical order and the shape determines the rooted tree up to label-preserving
isomorphism.  Keys are the string encodings of shapes:

    vertex-rooted:  "(" + "".join(f"{label}{encode(child)}") + ")"
    axis-rooted:    "|{label}" + encode(origin_half) + encode(terminus_half)
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .core_graphs import GammaGraph, MarkingGraph, is_cyclically_reduced, is_folded
from .errors import BudgetExceeded, GraphFormatError, NotCyclicallyReducedError

Shape = tuple  # tuple[tuple[int, "Shape"], ...]

DEFAULT_BUDGET = 10**6


# --- shapes and keys ---------------------------------------------------------

def encode(shape: Shape) -> str:
    return "(" + "".join(f"{lab}{encode(sub)}" for lab, sub in shape) + ")"


def axis_encode(label: int, o_half: Shape, t_half: Shape) -> str:
    return f"|{label}{encode(o_half)}{encode(t_half)}"


def _parse(s: str, i: int) -> tuple[Shape, int]:
    if s[i] != "(":
        raise GraphFormatError(f"bad key at offset {i}: {s[:40]!r}")
    i += 1
    items = []
    while s[i] != ")":
        j = i
        while s[j].isdigit():
            j += 1
        if j == i:
            raise GraphFormatError(f"bad key at offset {i}: {s[:40]!r}")
        label = int(s[i:j])
        sub, i = _parse(s, j)
        if items and items[-1][0] >= label:
            raise GraphFormatError("key is not canonical: sibling labels out of order")
        items.append((label, sub))
    return tuple(items), i + 1


def decode(key: str) -> Shape:
    try:
        shape, end = _parse(key, 0)
    except IndexError:
        raise GraphFormatError(f"truncated key {key[:40]!r}") from None
    if end != len(key):
        raise GraphFormatError(f"trailing data in key {key[:40]!r}")
    return shape


def decode_axis(key: str) -> tuple[int, Shape, Shape]:
    if not key.startswith("|"):
        raise GraphFormatError(f"not an axis key: {key[:40]!r}")
    j = 1
    while key[j].isdigit():
        j += 1
    label = int(key[1:j])
    try:
        o_half, i = _parse(key, j)
        t_half, end = _parse(key, i)
    except IndexError:
        raise GraphFormatError(f"truncated key {key[:40]!r}") from None
    if end != len(key):
        raise GraphFormatError("trailing data in axis key")
    return label, o_half, t_half


def depth_range(shape: Shape) -> tuple[int, int]:
    """(min, max) depth of the leaves below the root of ``shape``."""
    if not shape:
        return 0, 0
    lo, hi = zip(*(depth_range(sub) for _, sub in shape))
    return min(lo) + 1, max(hi) + 1


def truncate(shape: Shape, depth: int) -> Shape:
    if depth == 0:
        return ()
    return tuple((lab, truncate(sub, depth - 1)) for lab, sub in shape)


def semi_round_class(label: int, o_half: Shape, t_half: Shape) -> tuple[str, bool]:
    """Canonical key of an axis-rooted tree and whether it is stored reversed.

    The class is filed under the orientation with the smaller encoding; the flag
    is True when the given orientation is the other one.
    """
    fwd = axis_encode(label, o_half, t_half)
    rev = axis_encode(label ^ 1, t_half, o_half)
    return (fwd, False) if fwd < rev else (rev, True)


def child_classes(shape: Shape, grade: int) -> list[tuple[int, str, bool]]:
    """For a round shape of ``grade``: ``(label, class key, flag)`` per center edge."""
    out = []
    for lab, sub in shape:
        rest = truncate(tuple(c for c in shape if c[0] != lab), grade - 1)
        key, flag = semi_round_class(lab, rest, sub)
        out.append((lab, key, flag))
    return out


def check_round_shape(g: MarkingGraph, shape: Shape, grade: int) -> None:
    """Raise unless ``shape`` is a folded round shape of ``grade`` over ``g``."""
    if len(shape) < 2:
        raise GraphFormatError("round graph center must have degree >= 2")
    if depth_range(shape) != (grade, grade):
        raise GraphFormatError(f"leaves not all at distance {grade} from center")
    _check_labels(g, shape, None)


def _check_labels(g: MarkingGraph, shape: Shape, incoming: int | None) -> None:
    for lab, sub in shape:
        if not 0 <= lab < g.num_oriented:
            raise GraphFormatError(f"unknown label {lab}")
        if incoming is None:
            if g.origin(lab) != g.origin(shape[0][0]):
                raise GraphFormatError("center edges start at different vertex types")
        else:
            if g.origin(lab) != g.terminus(incoming) or lab == incoming ^ 1:
                raise GraphFormatError("shape is not a reduced labeled tree")
        _check_labels(g, sub, lab)


# --- materialized trees ------------------------------------------------------

@dataclass(frozen=True)
class GammaTree(GammaGraph):
    """A folded Gamma-graph whose carrier is a finite tree with at least one edge."""

    def __post_init__(self):
        super().__post_init__()
        if self.num_edges < 1:
            raise GraphFormatError("a Gamma-tree needs at least one edge")
        if self.num_edges != self.num_vertices - 1:
            raise GraphFormatError("not a tree: edge count")
        if not is_folded(self):
            raise GraphFormatError("a Gamma-tree must be folded")
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for _, w, _ in self.out[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != self.num_vertices:
            raise GraphFormatError("not a tree: disconnected")

    @classmethod
    def from_graph(cls, d: GammaGraph) -> "GammaTree":
        return cls(d.marking, d.vertex_type, d.edges)

    def distances(self, source: int) -> list[int]:
        dist = [-1] * self.num_vertices
        dist[source] = 0
        todo = deque([source])
        while todo:
            v = todo.popleft()
            for _, w, _ in self.out[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    todo.append(w)
        return dist

    def leaves(self) -> list[int]:
        return [v for v in range(self.num_vertices) if self.degree(v) == 1]


def shape_of(tree: GammaGraph, root: int, parent: int | None = None) -> Shape:
    """Shape of ``tree`` rooted at ``root`` (``parent`` side excluded)."""
    return tuple(sorted(
        (lab, shape_of(tree, w, root)) for lab, w, _ in tree.out[root] if w != parent
    ))


def canonical_key(tree: GammaTree, vertex: int) -> str:
    """Key of ``tree`` rooted at a vertex; equal keys iff rooted label-isomorphic."""
    if not 0 <= vertex < tree.num_vertices:
        raise KeyError(f"root {vertex} not in tree")
    return encode(shape_of(tree, vertex))


def axis_halves(tree: GammaTree, edge: int) -> tuple[int, Shape, Shape]:
    if not 0 <= edge < 2 * tree.num_edges:
        raise KeyError(f"edge {edge} not in tree")
    o, t = tree.origin(edge), tree.terminus(edge)
    return tree.label(edge), shape_of(tree, o, t), shape_of(tree, t, o)


def axis_key(tree: GammaTree, edge: int) -> str:
    """Key of ``tree`` rooted at an oriented edge (origin half, then terminus half)."""
    return axis_encode(*axis_halves(tree, edge))


def tree_from_shape(g: MarkingGraph, shape: Shape, root_type: int | None = None,
                    above: int | None = None) -> GammaTree:
    """Materialize a shape; vertex 0 is the root.

    ``above`` is the label of an extra edge entering the root from a new vertex
    (used for axis-rooted trees); that vertex becomes vertex 1 and the edge is
    edge-pair 0, oriented towards the root.
    """
    if root_type is None:
        root_type = g.terminus(above) if above is not None else g.origin(shape[0][0])
    vt = [root_type]
    edges = []
    if above is not None:
        vt.append(g.origin(above))
        edges.append((1, 0, above))
    todo = [(0, shape)]
    while todo:
        v, sh = todo.pop()
        for lab, sub in sh:
            w = len(vt)
            vt.append(g.terminus(lab))
            edges.append((v, w, lab))
            todo.append((w, sub))
    return GammaTree(g, tuple(vt), tuple(edges))


def graft(tree: GammaTree, vertex: int, shape: Shape) -> GammaTree:
    """Attach ``shape`` below ``vertex``; labels already present at ``vertex`` clash."""
    g = tree.marking
    vt = list(tree.vertex_type)
    edges = list(tree.edges)
    todo = [(vertex, shape)]
    while todo:
        v, sh = todo.pop()
        for lab, sub in sh:
            w = len(vt)
            vt.append(g.terminus(lab))
            edges.append((v, w, lab))
            todo.append((w, sub))
    return GammaTree(g, tuple(vt), tuple(edges))


@dataclass(frozen=True)
class RoundGraph:
    """A tree whose leaves all lie at distance ``grade`` from ``center``."""

    tree: GammaTree
    center: int
    grade: int

    def __post_init__(self):
        if self.grade < 1:
            raise GraphFormatError("grade must be >= 1")
        dist = self.tree.distances(self.center)
        if self.tree.degree(self.center) < 2:
            raise GraphFormatError("center must have degree >= 2")
        if any(dist[u] != self.grade for u in self.tree.leaves()):
            raise GraphFormatError(f"leaves not all at distance {self.grade} from center")

    def shape(self) -> Shape:
        return shape_of(self.tree, self.center)

    def key(self) -> str:
        return canonical_key(self.tree, self.center)

    @classmethod
    def from_key(cls, g: MarkingGraph, key: str) -> "RoundGraph":
        shape = decode(key)
        grade = depth_range(shape)[1]
        check_round_shape(g, shape, grade)
        return cls(tree_from_shape(g, shape), 0, grade)


def round_centers(tree: GammaTree) -> list[tuple[int, int]]:
    """All ``(vertex, r)`` with every leaf at distance exactly ``r`` from ``vertex``."""
    leaves = tree.leaves()
    out = []
    for v in range(tree.num_vertices):
        dist = tree.distances(v)
        ds = {dist[u] for u in leaves if u != v}
        if tree.degree(v) >= 2 and len(ds) == 1:
            out.append((v, ds.pop()))
    return out


@dataclass(frozen=True)
class SemiRoundGraph:
    """A tree whose leaves are all at distance ``grade - 1/2`` from the midpoint of ``axis``."""

    tree: GammaTree
    axis: int
    grade: int

    def __post_init__(self):
        if self.grade < 2:
            raise GraphFormatError("semi-round grade must be >= 2")
        t = self.tree
        o, term = t.origin(self.axis), t.terminus(self.axis)
        do, dt = t.distances(o), t.distances(term)
        for u in t.leaves():
            # leaf on the origin side iff it is closer to the origin
            near = do[u] if do[u] < dt[u] else dt[u]
            if near != self.grade - 1:
                raise GraphFormatError("semi-round leaf at wrong distance from axis")

    def halves(self) -> tuple[int, Shape, Shape]:
        return axis_halves(self.tree, self.axis)

    def oriented_key(self) -> str:
        return axis_key(self.tree, self.axis)

    def key(self) -> str:
        return semi_round_class(*self.halves())[0]

    def reversed_storage(self) -> bool:
        """True when this instance's axis is opposite to the canonical one."""
        return semi_round_class(*self.halves())[1]


# --- operations --------------------------------------------------------------

def continuations(g: MarkingGraph, label: int) -> tuple[int, ...]:
    """Labels ``e'`` such that ``label, e'`` is a reduced edge-path in the cover."""
    g.label(label)
    return tuple(e for e in g.star(g.terminus(label)) if e != label ^ 1)


def child(k: RoundGraph, e: int) -> SemiRoundGraph:
    """The semi-round ball of radius ``r - 1/2`` around the midpoint of center edge ``e``."""
    t = k.tree
    if t.origin(e) != k.center:
        raise ValueError("edge does not start at the center")
    if k.grade < 2:
        raise ValueError("children need grade >= 2")
    # vertices in the branch through e keep full depth, others are cut at grade - 1
    branch = set()
    todo = [t.terminus(e)]
    while todo:
        v = todo.pop()
        branch.add(v)
        for _, w, _ in t.out[v]:
            if w != k.center and w not in branch:
                todo.append(w)
    dist = t.distances(k.center)
    keep = [v for v in range(t.num_vertices) if v in branch or dist[v] <= k.grade - 1]
    new_id = {v: i for i, v in enumerate(keep)}
    edges = []
    axis = None
    for i, (o, term, lab) in enumerate(t.edges):
        if o in new_id and term in new_id:
            if i == e >> 1:
                axis = 2 * len(edges) + (e & 1)
            edges.append((new_id[o], new_id[term], lab))
    sub = GammaTree(t.marking, tuple(t.vertex_type[v] for v in keep), tuple(edges))
    return SemiRoundGraph(sub, axis, k.grade)


@lru_cache(maxsize=None)
def _branches(g: MarkingGraph, label: int, depth: int) -> tuple[Shape, ...]:
    """All shapes hanging below an edge ``label`` with every leaf exactly ``depth`` further."""
    if depth == 0:
        return ((),)
    options = []
    conts = continuations(g, label)
    for size in range(1, len(conts) + 1):
        for subset in itertools.combinations(conts, size):
            for subs in itertools.product(*(_branches(g, c, depth - 1) for c in subset)):
                options.append(tuple(zip(subset, subs)))
    return tuple(options)


def branch_count(g: MarkingGraph, label: int, depth: int) -> int:
    """Number of shapes :func:`_branches` would list, by the product formula."""
    if depth == 0:
        return 1
    total = 1
    for c in continuations(g, label):
        total *= 1 + branch_count(g, c, depth - 1)
    return total - 1


def admissible_extensions(k: GammaTree, e: int, m: int) -> list[GammaTree]:
    """All trees ``k ∪ U`` with ``U`` hanging at the terminal vertex ``t(e)``,
    every leaf of ``U`` other than ``t(e)`` exactly ``m`` away from it."""
    if k.degree(k.terminus(e)) != 1:
        raise ValueError("edge is not terminal")
    if m < 1:
        raise ValueError("m must be >= 1")
    v = k.terminus(e)
    return [graft(k, v, shape) for shape in _branches(k.marking, k.label(e), m)]


def completions(j: SemiRoundGraph, side: str) -> list[RoundGraph]:
    """Round graphs of the same grade centered at one axis endpoint, containing ``j``.

    ``side`` is ``"origin"`` or ``"terminus"``; each terminal edge of ``j`` on
    that side is extended by a nonempty set of continuations.
    """
    if side not in ("origin", "terminus"):
        raise ValueError("side must be 'origin' or 'terminus'")
    label, o_half, t_half = j.halves()
    if side == "terminus":
        label, o_half, t_half = label ^ 1, t_half, o_half
    g = j.tree.marking
    out = []
    for near in _extend_leaves(g, o_half, None):
        shape = tuple(sorted(near + ((label, t_half),)))
        out.append(RoundGraph(tree_from_shape(g, shape), 0, j.grade))
    return out


def class_completions(g: MarkingGraph, key: str) -> tuple[list[str], list[str]]:
    """Keys of the completions of a semi-round class at its origin and terminus."""
    label, o_half, t_half = decode_axis(key)
    sides = []
    for lab, near, far in ((label, o_half, t_half), (label ^ 1, t_half, o_half)):
        sides.append([encode(tuple(sorted(ext + ((lab, far),))))
                      for ext in _extend_leaves(g, near, None)])
    return sides[0], sides[1]


def _extend_leaves(g: MarkingGraph, shape: Shape, incoming: int | None) -> list[Shape]:
    """Every way of giving each leaf of ``shape`` a nonempty set of continuations."""
    if not shape and incoming is not None:
        return list(_branches(g, incoming, 1))
    per_child = [[(lab, s) for s in _extend_leaves(g, sub, lab)] for lab, sub in shape]
    return [tuple(combo) for combo in itertools.product(*per_child)]


def enumerate_round(g: MarkingGraph, r: int, budget: int = DEFAULT_BUDGET) -> Iterator[str]:
    """Stream the keys of all grade-``r`` round-graph classes over ``g``."""
    if r < 1:
        raise ValueError("grade must be >= 1")
    seen = set()
    for v in range(g.num_vertices):
        star = g.star(v)
        for size in range(2, len(star) + 1):
            for subset in itertools.combinations(star, size):
                for subs in itertools.product(*(_branches(g, c, r - 1) for c in subset)):
                    key = encode(tuple(zip(subset, subs)))
                    if key in seen:
                        continue
                    seen.add(key)
                    if len(seen) > budget:
                        raise BudgetExceeded(f"more than {budget} round-graph classes")
                    yield key


def round_class_count(g: MarkingGraph, r: int) -> int:
    """Closed-form number of grade-``r`` round-graph classes."""
    total = 0
    for v in range(g.num_vertices):
        star = g.star(v)
        counts = [branch_count(g, c, r - 1) for c in star]
        for size in range(2, len(star) + 1):
            for subset in itertools.combinations(counts, size):
                prod = 1
                for c in subset:
                    prod *= c
                total += prod
    return total


def ball(d: GammaGraph, u: int, r: int) -> RoundGraph:
    """Tree of non-backtracking paths of length <= r from ``u`` in a cyclically reduced graph."""
    if not is_cyclically_reduced(d):
        raise NotCyclicallyReducedError("ball expects a cyclically reduced graph")
    if r < 1:
        raise ValueError("radius must be >= 1")
    vt = [d.vertex_type[u]]
    edges = []
    frontier = [(0, u, None)]  # (tree vertex, graph vertex, label used to arrive)
    for _ in range(r):
        nxt = []
        for tv, x, came in frontier:
            for lab, y, _ in d.out[x]:
                if came is not None and lab == came ^ 1:
                    continue
                w = len(vt)
                vt.append(d.vertex_type[y])
                edges.append((tv, w, lab))
                nxt.append((w, y, lab))
        frontier = nxt
    return RoundGraph(GammaTree(d.marking, tuple(vt), tuple(edges)), 0, r)


def ball_keys(d: GammaGraph, r: int) -> list[str]:
    """Center-rooted key of the radius-``r`` ball at every vertex of ``d``.

    Encodes directly from the graph, memoized on (vertex, arrival label, depth);
    ``d`` must be folded with minimum degree 2.
    """
    memo: dict[tuple[int, int, int], str] = {}
    out = d.out

    def enc(x: int, came: int, depth: int) -> str:
        key = (x, came, depth)
        s = memo.get(key)
        if s is None:
            if depth == 0:
                s = "()"
            else:
                back = came ^ 1
                s = "(" + "".join(
                    f"{lab}{enc(y, lab, depth - 1)}" for lab, y, _ in out[x] if lab != back
                ) + ")"
            memo[key] = s
        return s

    # out rows are sorted by label, which is the canonical sibling order
    return [enc(u, -2, r) for u in range(d.num_vertices)]
