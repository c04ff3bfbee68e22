"""Occurrence counts, weight systems on round graphs, and switch conditions."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterator, Mapping

from .core_graphs import GammaGraph, MarkingGraph, is_cyclically_reduced, is_folded
from .errors import NotCyclicallyReducedError, NotFoldedError, PreconditionError
from .trees import (GammaTree, Shape, ball_keys, check_round_shape, child_classes, decode,
                    shape_of)


@dataclass(frozen=True, eq=False)
class WeightSystem:
    """Sparse nonnegative exact weights on grade-``grade`` round-graph classes.

    Absent keys have weight 0; zero entries are dropped on construction.
    """

    marking: MarkingGraph
    grade: int
    entries: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.grade < 2:
            raise ValueError("weight systems need grade >= 2")
        clean = {}
        for key, value in self.entries.items():
            if not isinstance(value, Rational):
                raise TypeError(f"weights must be exact rationals, got {value!r}")
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"negative weight {value} for {key}")
            if value:
                clean[key] = value
        object.__setattr__(self, "entries", dict(sorted(clean.items())))
        for key, shape in self.shapes.items():
            check_round_shape(self.marking, shape, self.grade)

    @cached_property
    def shapes(self) -> dict[str, Shape]:
        return {key: decode(key) for key in self.entries}

    def __getitem__(self, key: str) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def __eq__(self, other):
        if not isinstance(other, WeightSystem):
            return NotImplemented
        return (self.marking == other.marking and self.grade == other.grade
                and self.entries == other.entries)

    def __repr__(self):
        return f"WeightSystem(grade={self.grade}, support={len(self)}, total={self.total()})"

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.values())

    def scaled(self, c) -> "WeightSystem":
        c = Fraction(c)
        return WeightSystem(self.marking, self.grade, {k: c * v for k, v in self.items()})

    def __add__(self, other: "WeightSystem") -> "WeightSystem":
        if (self.marking, self.grade) != (other.marking, other.grade):
            raise ValueError("weight systems over different markings or grades")
        merged = dict(self.entries)
        for k, v in other.items():
            merged[k] = merged.get(k, 0) + v
        return WeightSystem(self.marking, self.grade, merged)


def occurrences(k: GammaTree, d: GammaGraph) -> int:
    """Number of label-preserving maps ``k -> d`` that are local bijections at
    every vertex of ``k`` of degree >= 2."""
    if not is_folded(d):
        raise NotFoldedError("occurrences expects a folded target")
    anchor = 0
    ktype = k.vertex_type[anchor]
    kstep = k.step
    dstep = d.step
    count = 0
    for u in range(d.num_vertices):
        if d.vertex_type[u] != ktype:
            continue
        image = {anchor: u}
        todo = [anchor]
        ok = True
        while todo and ok:
            x = todo.pop()
            y = image[x]
            links = dstep[y]
            if len(kstep[x]) >= 2 and kstep[x].keys() != links.keys():
                ok = False
                break
            for lab, w in kstep[x].items():
                z = links.get(lab)
                if z is None:
                    ok = False
                    break
                if w not in image:
                    image[w] = z
                    todo.append(w)
        if ok:
            count += 1
    return count


def weights_of(d: GammaGraph, r: int) -> WeightSystem:
    """Counting weights of a cyclically reduced graph on grade-``r`` round graphs."""
    if not is_cyclically_reduced(d):
        raise NotCyclicallyReducedError("weights_of expects a nonempty cyclically reduced graph")
    counts = Counter(ball_keys(d, r))
    return WeightSystem(d.marking, r, {k: Fraction(v) for k, v in counts.items()})


@dataclass(frozen=True)
class Violation:
    """A semi-round class whose two completion sums differ."""

    key: str
    origin_sum: Fraction
    terminus_sum: Fraction


def switch_sums(t: WeightSystem) -> dict[str, list[Fraction]]:
    """Per semi-round class reachable from the support: [origin-side, terminus-side] sums.

    A round graph contributes to the origin side of its child class at a center
    edge when that child is stored in its canonical orientation, otherwise to the
    terminus side.
    """
    sums: dict[str, list[Fraction]] = defaultdict(lambda: [Fraction(0), Fraction(0)])
    for key, value in t.items():
        for _, ckey, flag in child_classes(t.shapes[key], t.grade):
            sums[ckey][flag] += value
    return dict(sums)


def check_switch(t: WeightSystem) -> list[Violation]:
    """Unbalanced semi-round classes, sorted by key; empty means the system is in Q."""
    return [Violation(k, s[0], s[1]) for k, s in sorted(switch_sums(t).items()) if s[0] != s[1]]


def radius_from(k: GammaTree, v: int) -> int:
    dist = k.distances(v)
    return max(dist[u] for u in k.leaves())


def radius(k: GammaTree) -> tuple[int, int]:
    """(radius, lowest-numbered vertex realizing it)."""
    best = None
    for v in range(k.num_vertices):
        rv = radius_from(k, v)
        if best is None or rv < best[0]:
            best = (rv, v)
    return best


def _embeds(small: Shape, big: Shape, root: bool, root_terminal: bool) -> bool:
    if not small:
        return True
    big_map = dict(big)
    if root and root_terminal:
        if small[0][0] not in big_map:
            return False
    elif len(small) != len(big) or any(lab not in big_map for lab, _ in small):
        return False
    return all(_embeds(sub, big_map[lab], False, False) for lab, sub in small)


def subtree_weight(k: GammaTree, v: int, t: WeightSystem) -> Fraction:
    """Weight of an arbitrary subtree ``k`` of radius at most the grade.

    Sums ``t`` over the round graphs centered at ``v`` obtained by hanging
    admissible trees at every terminal edge of ``k``.  A support round graph is
    such an extension exactly when ``k`` rooted at ``v`` embeds at its center with
    full links at the non-terminal vertices of ``k``.
    """
    if radius_from(k, v) > t.grade:
        raise PreconditionError(
            f"subtree has R(k, v) = {radius_from(k, v)} > grade {t.grade}")
    small = shape_of(k, v)
    root_terminal = k.degree(v) == 1
    return sum((value for key, value in t.items()
                if _embeds(small, t.shapes[key], True, root_terminal)), Fraction(0))
