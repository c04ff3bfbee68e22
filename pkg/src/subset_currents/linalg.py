"""Exact rational row reduction and kernels for small sparse integer matrices."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def rref(rows: Sequence[dict[int, int]], ncols: int) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Reduced row echelon form of an integer matrix given as sparse rows.

    Elimination is fraction-free (integer row combinations, rows kept primitive);
    the pivot rows are normalized to leading 1 only at the end.  Returns the
    pivot columns and the matching reduced rows.
    """
    work = [_primitive({j: v for j, v in r.items() if v}) for r in rows]
    work = [r for r in work if r]
    pivots: list[int] = []
    reduced: list[dict[int, int]] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(work) if r.get(col)), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        p = prow[col]
        new_work = []
        for r in work:
            a = r.get(col)
            if a:
                combo = {j: p * r.get(j, 0) - a * prow.get(j, 0) for j in set(r) | set(prow)}
                r = _primitive({j: v for j, v in combo.items() if v})
            if r:
                new_work.append(r)
        work = new_work
        for i, r in enumerate(reduced):
            a = r.get(col)
            if a:
                combo = {j: p * r.get(j, 0) - a * prow.get(j, 0) for j in set(r) | set(prow)}
                reduced[i] = _primitive({j: v for j, v in combo.items() if v})
        pivots.append(col)
        reduced.append(prow)
    out = []
    for col, r in zip(pivots, reduced):
        lead = r[col]
        out.append({j: Fraction(v, lead) for j, v in r.items()})
    return pivots, out


def kernel_basis(rows: Sequence[dict[int, int]], ncols: int) -> list[list[Fraction]]:
    """Basis of the rational kernel, one vector per free column (1 there, 0 at other free columns)."""
    pivots, red = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for p, r in zip(pivots, red):
            vec[p] = -r.get(f, Fraction(0))
        basis.append(vec)
    return basis


def apply(rows: Sequence[dict[int, int]], vec: Sequence) -> list:
    return [sum(v * vec[j] for j, v in r.items()) for r in rows]
