"""Line-oriented text formats for markings, graphs, trees, and weight tables.

Every document is a sequence of sections introduced by ``[name]`` lines;
blank lines and ``#`` comments are ignored.  Graph, tree, and weight documents
embed their marking so each file is self-describing.  See ``docs/formats.md``.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from pathlib import Path

from .core_graphs import GammaGraph, MarkingGraph
from .errors import GraphFormatError
from .trees import GammaTree, RoundGraph, SemiRoundGraph
from .weights import WeightSystem


def _sections(text: str) -> dict[str, list[list[str]]]:
    out: dict[str, list[list[str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current in out:
                raise GraphFormatError(f"line {lineno}: duplicate section [{current}]")
            out[current] = []
        elif current is None:
            raise GraphFormatError(f"line {lineno}: content before first section")
        else:
            out[current].append(line.split())
    return out


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected integer {what}, got {tok!r}") from None


# --- marking -----------------------------------------------------------------

def marking_lines(g: MarkingGraph) -> list[str]:
    lines = ["[marking]", f"vertices {g.num_vertices}"]
    for i, (o, t) in enumerate(g.edges):
        lines.append(f"edge {g.names[2 * i]} {g.names[2 * i + 1]} {o} {t}")
    return lines


def _parse_marking(rows: list[list[str]]) -> MarkingGraph:
    n = None
    edges, names = [], []
    for row in rows:
        if row[0] == "vertices" and len(row) == 2:
            n = _int(row[1], "vertex count")
        elif row[0] == "edge" and len(row) == 5:
            names.extend(row[1:3])
            edges.append((_int(row[3], "origin"), _int(row[4], "terminus")))
        else:
            raise GraphFormatError(f"bad marking line: {' '.join(row)}")
    if n is None:
        raise GraphFormatError("marking needs a 'vertices' line")
    return MarkingGraph(n, tuple(edges), tuple(names))


def marking_hash(g: MarkingGraph) -> str:
    return hashlib.sha256("\n".join(marking_lines(g)).encode()).hexdigest()[:16]


def dump_marking(g: MarkingGraph) -> str:
    return "\n".join(marking_lines(g)) + "\n"


def load_marking(text: str) -> MarkingGraph:
    secs = _sections(text)
    if "marking" not in secs:
        raise GraphFormatError("missing [marking] section")
    return _parse_marking(secs["marking"])


# --- graphs and trees ----------------------------------------------------------

def _graph_lines(d: GammaGraph) -> list[str]:
    g = d.marking
    lines = [f"vertex {v} {x}" for v, x in enumerate(d.vertex_type)]
    lines += [f"edge {i} {o} {t} {g.name(lab)}" for i, (o, t, lab) in enumerate(d.edges)]
    return lines


def _parse_graph(g: MarkingGraph, rows: list[list[str]]):
    verts, edges, extra = {}, {}, []
    for row in rows:
        if row[0] == "vertex" and len(row) == 3:
            vid = _int(row[1], "vertex id")
            if vid in verts:
                raise GraphFormatError(f"duplicate vertex {vid}")
            verts[vid] = _int(row[2], "vertex type")
        elif row[0] == "edge" and len(row) == 5:
            eid = _int(row[1], "edge id")
            if eid in edges:
                raise GraphFormatError(f"duplicate edge {eid}")
            edges[eid] = (_int(row[2], "origin"), _int(row[3], "terminus"), g.label(row[4]))
        else:
            extra.append(row)
    vid_map = {v: i for i, v in enumerate(sorted(verts))}
    eid_map = {e: i for i, e in enumerate(sorted(edges))}
    try:
        es = tuple((vid_map[o], vid_map[t], lab) for _, (o, t, lab) in sorted(edges.items()))
    except KeyError as exc:
        raise GraphFormatError(f"edge references unknown vertex {exc.args[0]}") from None
    vt = tuple(verts[v] for v in sorted(verts))
    return vt, es, vid_map, eid_map, extra


def dump_graph(d: GammaGraph) -> str:
    return "\n".join(marking_lines(d.marking) + ["[graph]"] + _graph_lines(d)) + "\n"


def load_graph(text: str) -> GammaGraph:
    secs = _sections(text)
    g = _parse_marking(secs.get("marking", []))
    if "graph" not in secs:
        raise GraphFormatError("missing [graph] section")
    vt, es, _, _, extra = _parse_graph(g, secs["graph"])
    if extra:
        raise GraphFormatError(f"bad graph line: {' '.join(extra[0])}")
    return GammaGraph(g, vt, es)


def dump_tree(obj: GammaTree | RoundGraph | SemiRoundGraph) -> str:
    if isinstance(obj, RoundGraph):
        tree, tail = obj.tree, [f"center {obj.center}", f"grade {obj.grade}"]
    elif isinstance(obj, SemiRoundGraph):
        sign = "-" if obj.axis & 1 else "+"
        tree, tail = obj.tree, [f"axis {obj.axis >> 1} {sign}", f"grade {obj.grade}"]
    else:
        tree, tail = obj, []
    return "\n".join(marking_lines(tree.marking) + ["[tree]"] + _graph_lines(tree) + tail) + "\n"


def load_tree(text: str):
    """Returns a :class:`GammaTree`, or a round / semi-round graph when the
    document has a ``center`` / ``axis`` line together with ``grade``."""
    secs = _sections(text)
    g = _parse_marking(secs.get("marking", []))
    if "tree" not in secs:
        raise GraphFormatError("missing [tree] section")
    vt, es, vid_map, eid_map, extra = _parse_graph(g, secs["tree"])
    tree = GammaTree(g, vt, es)
    fields = {row[0]: row[1:] for row in extra}
    unknown = set(fields) - {"center", "axis", "grade"}
    if unknown:
        raise GraphFormatError(f"unknown tree fields {sorted(unknown)}")
    grade = _int(fields["grade"][0], "grade") if "grade" in fields else None
    if "center" in fields:
        center = vid_map[_int(fields["center"][0], "center")]
        if grade is None:
            return tree, center
        return RoundGraph(tree, center, grade)
    if "axis" in fields:
        args = fields["axis"]
        axis = 2 * eid_map[_int(args[0], "axis edge")] + (1 if args[1:] == ["-"] else 0)
        if grade is None:
            raise GraphFormatError("axis requires a grade")
        return SemiRoundGraph(tree, axis, grade)
    return tree


# --- weight tables -----------------------------------------------------------

def key_hash(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()[:16]


def _format_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def dump_table(g: MarkingGraph, grade: int, values) -> str:
    lines = marking_lines(g) + ["[weights]", f"marking-hash {marking_hash(g)}", f"grade {grade}"]
    for key in sorted(values):
        lines.append(f"row {key_hash(key)} {key} {_format_value(values[key])}")
    return "\n".join(lines) + "\n"


def dump_weights(t: WeightSystem) -> str:
    return dump_table(t.marking, t.grade, t.entries)


def _parse_value(tok: str):
    if any(c in tok for c in ".eE") or tok.lower() in ("inf", "nan"):
        return float(tok)
    try:
        return Fraction(tok)
    except ValueError:
        raise GraphFormatError(f"bad weight value {tok!r}") from None


def load_table(text: str) -> tuple[MarkingGraph, int, dict]:
    """Marking, grade, and raw values (Fraction or float) of a weight table."""
    secs = _sections(text)
    g = _parse_marking(secs.get("marking", []))
    if "weights" not in secs:
        raise GraphFormatError("missing [weights] section")
    grade = None
    values = {}
    for row in secs["weights"]:
        if row[0] == "grade" and len(row) == 2:
            grade = _int(row[1], "grade")
        elif row[0] == "marking-hash" and len(row) == 2:
            if row[1] != marking_hash(g):
                raise GraphFormatError("marking hash does not match embedded marking")
        elif row[0] == "row" and len(row) == 4:
            _, h, key, val = row
            if h != key_hash(key):
                raise GraphFormatError(f"key hash mismatch for {key[:40]}")
            if key in values:
                raise GraphFormatError(f"duplicate key {key[:40]}")
            values[key] = _parse_value(val)
        else:
            raise GraphFormatError(f"bad weights line: {' '.join(row)}")
    if grade is None:
        raise GraphFormatError("weight table needs a grade")
    return g, grade, values


def load_weights(text: str) -> WeightSystem:
    g, grade, values = load_table(text)
    if any(isinstance(v, float) for v in values.values()):
        raise GraphFormatError("exact weight table contains floating-point values")
    return WeightSystem(g, grade, values)


def read_text(path: str | Path) -> str:
    return Path(path).read_text()


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)
