"""Rational approximation of weight systems and realization of the result.

A real-valued target on grade-r round graphs is replaced by a nearby exact
rational point of the switch-condition cone, the denominators are cleared, and
the resulting integral system is realized.  The pair ``(m, graph)`` stands for
the current ``(1/m) * mu_graph``, a nonnegative rational combination of the
counting currents of the components of ``graph``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from numbers import Rational, Real
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import linprog

from .core_graphs import GammaGraph, MarkingGraph, components
from .errors import BudgetExceeded, PreconditionError, RationalizationError
from .linalg import rref
from .realization import realize
from .trees import check_round_shape, child_classes, class_completions, decode
from .weights import WeightSystem, weights_of

log = logging.getLogger(__name__)

MAX_DENOMINATOR_EXPONENT = 60


@dataclass
class SwitchMatrix:
    """Integer matrix of the switch conditions: ``A @ theta == 0`` iff balanced."""

    rows: list[str]
    columns: list[str]
    entries: list[dict[int, int]]

    def apply(self, values: Mapping[str, object]) -> list:
        vec = [values.get(k, 0) for k in self.columns]
        return [sum(v * vec[j] for j, v in r.items()) for r in self.entries]

    def dense(self) -> list[list[int]]:
        out = []
        for r in self.entries:
            row = [0] * len(self.columns)
            for j, v in r.items():
                row[j] = v
            out.append(row)
        return out


def closure(marking: MarkingGraph, support: Iterable[str], grade: int,
            budget: int = 10**5) -> list[str]:
    """Smallest key set containing ``support`` and all completions of its children."""
    seen = set(support)
    todo = list(seen)
    visited_rows = set()
    while todo:
        key = todo.pop()
        for _, ckey, _ in child_classes(decode(key), grade):
            if ckey in visited_rows:
                continue
            visited_rows.add(ckey)
            near, far = class_completions(marking, ckey)
            for k in near + far:
                if k not in seen:
                    seen.add(k)
                    if len(seen) > budget:
                        raise BudgetExceeded(f"closure exceeds {budget} round-graph classes")
                    todo.append(k)
    return sorted(seen)


def switch_matrix(marking: MarkingGraph, support: Iterable[str], grade: int,
                  closed: bool = True, budget: int = 10**5) -> SwitchMatrix:
    """Rows: semi-round classes met by the columns; columns: ``support`` (closed or not).

    Entry +1 when the column's child in that class sits on the origin side,
    -1 on the terminus side.
    """
    support = sorted(set(support))
    for key in support:
        check_round_shape(marking, decode(key), grade)
    columns = closure(marking, support, grade, budget) if closed else support
    row_index: dict[str, int] = {}
    entries: list[dict[int, int]] = []
    for j, key in enumerate(columns):
        for _, ckey, flag in child_classes(decode(key), grade):
            i = row_index.get(ckey)
            if i is None:
                i = row_index[ckey] = len(entries)
                entries.append({})
            entries[i][j] = entries[i].get(j, 0) + (-1 if flag else 1)
    order = sorted(row_index, key=row_index.get)
    cleaned = [{j: v for j, v in r.items() if v} for r in entries]
    return SwitchMatrix(order, columns, cleaned)


class _Kernel:
    """Parametrization of ker(A) by its free coordinates."""

    def __init__(self, a: SwitchMatrix):
        n = len(a.columns)
        self.pivots, self.reduced = rref(a.entries, n)
        pset = set(self.pivots)
        self.free = [j for j in range(n) if j not in pset]
        self.n = n

    def complete(self, free_values: Mapping[int, Fraction]) -> list[Fraction]:
        x = [Fraction(0)] * self.n
        for j, v in free_values.items():
            x[j] = v
        for p, row in zip(self.pivots, self.reduced):
            x[p] = -sum((c * free_values[j] for j, c in row.items() if j != p), Fraction(0))
        return x

    def rounded(self, target: list[float], bound: int) -> list[Fraction]:
        """Kernel point whose free coordinates are best approximations with denominator <= bound."""
        return self.complete({j: Fraction(target[j]).limit_denominator(bound) for j in self.free})


def _sup_error(x: list[Fraction], target: list[float]) -> float:
    return max((abs(float(xi) - ti) for xi, ti in zip(x, target)), default=0.0)


def _positive_kernel_point(a: SwitchMatrix, kernel: _Kernel, scale: float) -> list[Fraction] | None:
    """Exact kernel point with all coordinates > 0, or None if the face has none."""
    n = len(a.columns)
    # variables: theta (n), s; maximize s subject to A theta = 0, theta >= s, sum theta = scale
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.zeros((len(a.entries) + 1, n + 1))
    for i, row in enumerate(a.entries):
        for j, v in row.items():
            a_eq[i, j] = v
    a_eq[-1, :n] = 1.0
    b_eq = np.zeros(len(a.entries) + 1)
    b_eq[-1] = scale
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n + [(None, scale)], method="highs")
    if res.status != 0 or res.x[-1] <= 0:
        return None
    p = list(res.x[:n])
    for k in range(MAX_DENOMINATOR_EXPONENT):
        x = kernel.rounded(p, 2**k)
        if all(v > 0 for v in x):
            return x
    return None


def rationalize(target: Mapping[str, Real], marking: MarkingGraph, grade: int,
                eps: float) -> WeightSystem:
    """Exact rational point of the switch cone within ``eps`` (sup norm) of ``target``.

    Works on the face spanned by the target's support.  Free kernel coordinates
    are replaced by best rational approximations with denominators bounded by
    1, 2, 4, ...; the first bound meeting the error and sign constraints wins.
    If the error bound is met but some coordinate stays negative, the point is
    mixed with a strictly positive kernel point using the smallest coefficient
    that restores nonnegativity.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    for k, v in target.items():
        if v < -10 * eps:
            raise PreconditionError(f"target has negative weight {v} on {k}")
    support = sorted(k for k, v in target.items() if v > 0)
    if not support:
        raise PreconditionError("target is zero")
    a = switch_matrix(marking, support, grade, closed=False)

    if all(isinstance(target[k], Rational) for k in support):
        exact = {k: Fraction(target[k]) for k in support}
        if not any(a.apply(exact)):
            return WeightSystem(marking, grade, exact)

    values = [float(target[k]) for k in support]
    residual = max((abs(r) for r in a.apply(dict(zip(support, values)))), default=0.0)
    if residual > 10 * eps:
        raise PreconditionError(
            f"target violates switch conditions by {residual:.3g} > tolerance {10 * eps:.3g}")

    kernel = _Kernel(a)
    best = None
    closest = float("inf")
    for k in range(MAX_DENOMINATOR_EXPONENT):
        x = kernel.rounded(values, 2**k)
        err = _sup_error(x, values)
        closest = min(closest, err)
        if err <= eps:
            if all(v >= 0 for v in x) and any(x):
                return WeightSystem(marking, grade, dict(zip(support, x)))
            best = x
    if best is None:
        raise RationalizationError("no rational kernel point within eps", achieved=closest)

    positive = _positive_kernel_point(a, kernel, sum(values))
    if positive is None:
        raise RationalizationError("face has no strictly positive point to mix with",
                                   achieved=_sup_error(best, values))
    lam = max(-xi / (pi - xi) for xi, pi in zip(best, positive) if xi < 0)
    mixed = [(1 - lam) * xi + lam * pi for xi, pi in zip(best, positive)]
    err = _sup_error(mixed, values)
    log.debug("mixed with positive kernel point, coefficient %s, error %g", lam, err)
    if err > eps:
        raise RationalizationError(f"nonnegative point found only at distance {err:.3g}",
                                   achieved=err)
    return WeightSystem(marking, grade, dict(zip(support, mixed)))


@dataclass
class ApproximationResult:
    denominator: int
    graph: GammaGraph
    theta: WeightSystem
    errors: dict[str, float] = field(default_factory=dict)

    @property
    def error(self) -> float:
        return max(self.errors.values(), default=0.0)

    @property
    def component_count(self) -> int:
        return len(components(self.graph))

    def report(self) -> dict:
        return {
            "denominator": self.denominator,
            "error": self.error,
            "components": self.component_count,
            "vertices": self.graph.num_vertices,
            "errors": self.errors,
        }


def approximate_by_rational_current(target: Mapping[str, Real], marking: MarkingGraph,
                                    grade: int, eps: float,
                                    seed: int | None = None) -> ApproximationResult:
    """Find ``(m, graph)`` with ``(1/m) * weights_of(graph) == theta'`` within ``eps`` of target."""
    theta = rationalize(target, marking, grade, eps)
    m = lcm(*(v.denominator for v in theta.entries.values()))
    d = realize(theta.scaled(m), seed)
    achieved = weights_of(d, grade).scaled(Fraction(1, m))
    if achieved != theta:
        raise AssertionError("realization does not reproduce the rational weights")
    errors = {}
    for key in sorted(set(target) | set(theta.entries)):
        want = target.get(key, 0)
        got = achieved[key]
        if isinstance(want, Rational):
            errors[key] = float(abs(Fraction(want) - got))
        else:
            errors[key] = abs(float(got) - float(want))
    return ApproximationResult(m, d, theta, errors)
