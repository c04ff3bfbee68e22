"""Realizing integral weight systems by cyclically reduced Gamma-graphs.

Each unit of weight on a round graph ``K`` becomes one vertex carrying a copy
of the half-link at the center of ``K``.  Every spoke of a half-link is decorated
with the class of the semi-round child of ``K`` along that spoke, plus a flag
telling which axis orientation the spoke sits on.  Spokes with the same class
and opposite flags are matched and glued into edges.  The switch conditions
say exactly that the two sides of every class have equal size.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core_graphs import GammaGraph, MarkingGraph, is_cyclically_reduced, isomorphic
from .errors import PreconditionError, SwitchConditionError
from .trees import GammaTree, Shape, _branches, child_classes, encode, tree_from_shape
from .weights import WeightSystem, check_switch, weights_of


@dataclass(frozen=True)
class Spoke:
    label: int
    child_key: str
    reversed: bool


@dataclass(frozen=True)
class DecoratedHalfLink:
    key: str
    copy: int
    vertex_type: int
    spokes: tuple[Spoke, ...]


def half_links(t: WeightSystem) -> list[DecoratedHalfLink]:
    """One decorated half-link per unit of weight, ordered by (key, copy)."""
    out = []
    for key in sorted(t.entries):
        shape = t.shapes[key]
        spokes = tuple(Spoke(*c) for c in child_classes(shape, t.grade))
        vtype = t.marking.origin(shape[0][0])
        for i in range(int(t[key])):
            out.append(DecoratedHalfLink(key, i, vtype, spokes))
    return out


def _check_realizable(t: WeightSystem) -> None:
    if t.grade < 2:
        raise PreconditionError("realization needs grade >= 2")
    if not t.entries:
        raise PreconditionError("zero weight system has no realization")
    if not t.is_integral():
        bad = next(k for k, v in t.items() if v.denominator != 1)
        raise PreconditionError(f"non-integral weight {t[bad]} on {bad}")
    violations = check_switch(t)
    if violations:
        raise SwitchConditionError(violations)


def realize(t: WeightSystem, seed: int | None = None) -> GammaGraph:
    """A cyclically reduced graph whose grade-r counting weights equal ``t``.

    Without ``seed`` the matching pairs spokes in (key, copy, spoke) order;
    with a seed one side of each class is shuffled first.
    """
    _check_realizable(t)
    links = half_links(t)
    sides: dict[str, tuple[list, list]] = defaultdict(lambda: ([], []))
    for v, hl in enumerate(links):
        for spoke in hl.spokes:
            sides[spoke.child_key][spoke.reversed].append((v, spoke.label))

    rng = random.Random(seed) if seed is not None else None
    edges = []
    for ckey in sorted(sides):
        near, far = sides[ckey]
        # guaranteed by the switch condition
        assert len(near) == len(far), ckey
        if rng is not None:
            rng.shuffle(far)
        for (v, lab), (w, back) in zip(near, far):
            assert back == lab ^ 1
            edges.append((v, w, lab))
    return GammaGraph(t.marking, tuple(hl.vertex_type for hl in links), tuple(edges))


def verify_realization(t: WeightSystem, d: GammaGraph) -> bool:
    if d.is_empty():
        return not t.entries
    if not is_cyclically_reduced(d):
        return False
    return weights_of(d, t.grade) == t


# --- integral currents -------------------------------------------------------

Oracle = Callable[[GammaTree], int]


def _as_weight(value) -> int:
    if isinstance(value, Fraction) and value.denominator == 1:
        value = value.numerator
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise PreconditionError(f"oracle returned non-integral weight {value!r}")
    if value < 0:
        raise PreconditionError(f"oracle returned negative weight {value}")
    return value


def _leaf_paths(shape: Shape, prefix=()) -> list[tuple[int, ...]]:
    if not shape:
        return [prefix]
    out = []
    for lab, sub in shape:
        out.extend(_leaf_paths(sub, prefix + (lab,)))
    return out


def _replace_at(shape: Shape, path: tuple[int, ...], new: Shape) -> Shape:
    if not path:
        return new
    head = path[0]
    return tuple((lab, _replace_at(sub, path[1:], new) if lab == head else sub)
                 for lab, sub in shape)


class _Querier:
    def __init__(self, oracle: Oracle, marking: MarkingGraph):
        self.oracle = oracle
        self.marking = marking
        self.count = 0

    def __call__(self, shape: Shape) -> int:
        self.count += 1
        return _as_weight(self.oracle(tree_from_shape(self.marking, shape)))


def _grade_one(query: _Querier) -> dict[Shape, int]:
    g = query.marking
    out = {}
    for v in range(g.num_vertices):
        star = g.star(v)
        for size in range(2, len(star) + 1):
            for subset in itertools.combinations(star, size):
                shape = tuple((lab, ()) for lab in subset)
                w = query(shape)
                if w:
                    out[shape] = w
    return out


def _deepen(query: _Querier, shape: Shape, weight: int) -> dict[Shape, int]:
    """Split one round graph into its one-level-deeper round extensions.

    Leaves are extended one at a time and only positive-weight branches are
    kept, so the cost is linear in the weight rather than exponential in the
    number of leaves.
    """
    g = query.marking
    states = [(shape, weight)]
    for path in _leaf_paths(shape):
        incoming = path[-1]
        nxt = []
        for cur, w in states:
            total = 0
            for ext in _branches(g, incoming, 1):
                cand = _replace_at(cur, path, ext)
                cw = query(cand)
                total += cw
                if cw:
                    nxt.append((cand, cw))
            if total != w:
                raise PreconditionError(
                    f"oracle is not additive: {encode(cur)} has weight {w} but its "
                    f"one-step extensions sum to {total}")
        states = nxt
    return dict(states)


@dataclass
class ReconstructionReport:
    """Outcome of realizing an integer-valued current grade by grade."""

    grades: list[int] = field(default_factory=list)
    weights: list[WeightSystem] = field(default_factory=list)
    graphs: list[GammaGraph] = field(default_factory=list)
    vertex_counts: list[int] = field(default_factory=list)
    weights_match: list[bool] = field(default_factory=list)
    final_matches: dict[int, bool] = field(default_factory=dict)
    isomorphism_classes: list[list[int]] = field(default_factory=list)
    queries: int = 0

    @property
    def final(self) -> GammaGraph:
        return self.graphs[-1]

    @property
    def constant_vertex_count(self) -> bool:
        return len(set(self.vertex_counts)) == 1

    def as_dict(self) -> dict:
        return {
            "grades": self.grades,
            "vertex_counts": self.vertex_counts,
            "weights_match": self.weights_match,
            "final_matches": {str(k): v for k, v in self.final_matches.items()},
            "isomorphism_classes": self.isomorphism_classes,
            "oracle_queries": self.queries,
        }


def reconstruct(oracle: Oracle, marking: MarkingGraph, r_max: int,
                seed: int | None = None) -> ReconstructionReport:
    """Realize the grade-r truncations of an integer-valued current for r = 2..r_max.

    ``oracle`` maps a :class:`GammaTree` to its (integer) weight.  Only the
    support is explored, by deepening positive-weight round graphs one leaf at a
    time.  The report lists vertex counts and which grades gave isomorphic
    graphs; stabilization beyond ``r_max`` is not asserted.
    """
    if r_max < 2:
        raise ValueError("r_max must be >= 2")
    query = _Querier(oracle, marking)
    current = _grade_one(query)
    total = sum(current.values())
    if total == 0:
        raise PreconditionError("oracle is the zero current")

    report = ReconstructionReport()
    for r in range(2, r_max + 1):
        nxt: dict[Shape, int] = {}
        for shape, w in current.items():
            nxt.update(_deepen(query, shape, w))
        current = nxt
        theta = WeightSystem(marking, r, {encode(s): Fraction(w) for s, w in current.items()})
        if theta.total() != total:
            raise PreconditionError(
                f"vertex count not constant: grade {r} total {theta.total()} != {total}")
        d = realize(theta, seed)
        report.grades.append(r)
        report.weights.append(theta)
        report.graphs.append(d)
        report.vertex_counts.append(d.num_vertices)
        report.weights_match.append(weights_of(d, r) == theta)

    final = report.final
    for r, theta in zip(report.grades, report.weights):
        report.final_matches[r] = weights_of(final, r) == theta
    for r, d in zip(report.grades, report.graphs):
        for cls in report.isomorphism_classes:
            if isomorphic(report.graphs[report.grades.index(cls[0])], d):
                cls.append(r)
                break
        else:
            report.isomorphism_classes.append([r])
    report.queries = query.count
    return report

