"""Command-line interface.

Exit codes: 0 ok, 1 usage or malformed input, 2 a mathematical precondition
or check failed (a JSON report on stdout names it), 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import formats
from .approximation import approximate_by_rational_current
from .core_graphs import is_cyclically_reduced, isomorphic, subgroup_graph, validate_marking
from .errors import (BudgetExceeded, CurrentsError, MarkingError, NotCyclicallyReducedError,
                     NotFoldedError, PreconditionError, RationalizationError,
                     SwitchConditionError)
from .realization import realize, reconstruct, verify_realization
from .symbolic_words import WordWeightSystem, check_word_switch, realize_words, word_weights
from .trees import RoundGraph, SemiRoundGraph
from .weights import check_switch, occurrences, radius_from, subtree_weight, weights_of

MEANINGS = {
    "switch-condition": "the weights of the round graphs completing a semi-round class on its "
                        "origin side must equal those completing it on its terminus side; "
                        "otherwise the weights are not finitely additive and define no current",
    "word-switch-condition": "every (m-1)-block must have equal right- and left-extension "
                             "sums for the block counts to come from cyclic words",
    "marking": "the marking graph must be connected, with paired inverse edges, every vertex "
               "of degree at least 3, and free fundamental group of rank at least 2",
    "folded": "a Gamma-graph must be folded: its label map is injective on every link",
    "cyclically-reduced": "a graph representing a current must be folded with every vertex "
                          "of degree at least 2",
    "realization": "the graph's counting weights must equal the given table exactly",
    "rational-approximation": "a nonnegative rational point of the switch cone must exist "
                              "within eps of the target",
    "precondition": "a mathematical precondition of the operation does not hold",
}


def _frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class CommandResult:
    code: int = 0
    report: dict = field(default_factory=dict)


class CommandFailure(Exception):
    def __init__(self, code: int, invariant: str, detail: str, **extra):
        super().__init__(detail)
        self.result = CommandResult(code, {
            "status": "error",
            "invariant": invariant,
            "meaning": MEANINGS.get(invariant, ""),
            "detail": detail,
            **extra,
        })


def _violation(invariant: str, detail: str, **extra) -> CommandFailure:
    return CommandFailure(2, invariant, detail, **extra)


def _switch_report(violations) -> list[dict]:
    return [{"semi_round_class": v.key, "origin_sum": _frac(v.origin_sum),
             "terminus_sum": _frac(v.terminus_sum)} for v in violations]


def _parse_word(g, text: str) -> list[str]:
    return text.split() if any(c.isspace() for c in text) else list(text)


def _load_reduced_graph(path: str):
    d = formats.load_graph(formats.read_text(path))
    if not is_cyclically_reduced(d):
        raise NotCyclicallyReducedError(f"{path} is not cyclically reduced")
    return d


def _emit_table(text: str, out: str | None, summary: dict) -> dict:
    if out:
        formats.write_text(out, text)
        return summary
    sys.stdout.write(text)
    for k, v in summary.items():
        sys.stdout.write(f"# {k} {v}\n")
    return {}


# --- subcommands ---------------------------------------------------------------

def cmd_validate_marking(args) -> CommandResult:
    g = formats.load_marking(formats.read_text(args.marking))
    n = validate_marking(g, allow_degree_2=args.allow_degree_2)
    return CommandResult(0, {"status": "ok", "rank": n, "hash": formats.marking_hash(g)})


def cmd_subgroup_graph(args) -> CommandResult:
    g = formats.load_marking(formats.read_text(args.marking))
    validate_marking(g, allow_degree_2=args.allow_degree_2)
    d = subgroup_graph(g, [_parse_word(g, w) for w in args.gen])
    text = formats.dump_graph(d)
    if args.out:
        formats.write_text(args.out, text)
        return CommandResult(0, {"status": "ok", "vertices": d.num_vertices,
                                 "edges": d.num_edges, "rank": d.betti})
    sys.stdout.write(text)
    return CommandResult(0, {})


def cmd_weights(args) -> CommandResult:
    d = _load_reduced_graph(args.graph)
    t = weights_of(d, args.grade)
    summary = {"rows": len(t), "total": _frac(t.total()), "vertices": d.num_vertices}
    return CommandResult(0, _emit_table(formats.dump_weights(t), args.out, summary))


def cmd_check_switch(args) -> CommandResult:
    t = formats.load_weights(formats.read_text(args.weights))
    violations = check_switch(t)
    if violations:
        raise _violation("switch-condition",
                         f"{len(violations)} unbalanced semi-round class(es)",
                         violations=_switch_report(violations))
    return CommandResult(0, {"status": "ok", "rows": len(t), "total": _frac(t.total())})


def cmd_subtree_weight(args) -> CommandResult:
    t = formats.load_weights(formats.read_text(args.weights))
    loaded = formats.load_tree(formats.read_text(args.tree))
    if isinstance(loaded, SemiRoundGraph):
        raise formats.GraphFormatError("subtree-weight needs a vertex, not an axis")
    if isinstance(loaded, RoundGraph):
        tree, center = loaded.tree, loaded.center
    elif isinstance(loaded, tuple):
        tree, center = loaded
    else:
        tree, center = loaded, None
    v = args.vertex if args.vertex is not None else center
    if v is None:
        raise formats.GraphFormatError("no vertex given (use --vertex or a 'center' line)")
    if tree.marking != t.marking:
        raise formats.GraphFormatError("tree and weight table use different markings")
    w = subtree_weight(tree, v, t)
    return CommandResult(0, {"status": "ok", "weight": _frac(w), "vertex": v,
                             "radius": radius_from(tree, v)})


def cmd_realize(args) -> CommandResult:
    t = formats.load_weights(formats.read_text(args.weights))
    d = realize(t, args.seed)
    text = formats.dump_graph(d)
    if args.out:
        formats.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return CommandResult(0, {"status": "ok", "vertices": d.num_vertices,
                             "edges": d.num_edges, "total": _frac(t.total())}
                         if args.out else {})


def cmd_verify(args) -> CommandResult:
    t = formats.load_weights(formats.read_text(args.weights))
    d = formats.load_graph(formats.read_text(args.graph))
    if not verify_realization(t, d):
        raise _violation("realization", "graph weights differ from the table")
    return CommandResult(0, {"status": "ok", "vertices": d.num_vertices})


def cmd_reconstruct(args) -> CommandResult:
    hidden = _load_reduced_graph(args.graph)
    rep = reconstruct(lambda k: occurrences(k, hidden), hidden.marking, args.rmax, args.seed)
    if args.out:
        formats.write_text(args.out, formats.dump_graph(rep.final))
    report = {"status": "ok", **rep.as_dict(),
              "hidden_vertices": hidden.num_vertices,
              "final_isomorphic_to_hidden": isomorphic(rep.final, hidden)}
    if not all(rep.weights_match):
        raise _violation("realization", "a grade's realization does not reproduce its weights",
                         **report)
    return CommandResult(0, report)


def cmd_approximate(args) -> CommandResult:
    g, grade, values = formats.load_table(formats.read_text(args.target))
    res = approximate_by_rational_current(values, g, grade, args.eps, args.seed)
    report = {"status": "ok", "m": res.denominator, "max_error": res.error,
              "components": res.component_count, "vertices": res.graph.num_vertices,
              "errors": res.errors}
    if args.out:
        formats.write_text(args.out, formats.dump_graph(res.graph))
    if args.report:
        formats.write_text(args.report, json.dumps(report, indent=2) + "\n")
    return CommandResult(0, report)


def cmd_words_realize(args) -> CommandResult:
    with open(args.weights) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or not all(isinstance(v, int) for v in raw.values()):
        raise formats.GraphFormatError("word weights must be a JSON object of integers")
    try:
        t = WordWeightSystem(args.alphabet, args.m, raw)
    except ValueError as exc:
        raise formats.GraphFormatError(str(exc)) from None
    bad = check_word_switch(t)
    if bad:
        raise _violation("word-switch-condition", f"{len(bad)} unbalanced block(s)",
                         violations=[{"block": u, "right_sum": r, "left_sum": l}
                                     for u, r, l in bad])
    words = realize_words(t)
    if word_weights(words, t.alphabet, t.m).t != {k: v for k, v in t.t.items() if v}:
        raise _violation("realization", "word counts differ from the table")
    return CommandResult(0, {"status": "ok", "words": [str(w) for w in words]})


def cmd_iso(args) -> CommandResult:
    d1 = formats.load_graph(formats.read_text(args.graph1))
    d2 = formats.load_graph(formats.read_text(args.graph2))
    return CommandResult(0, {"status": "ok", "isomorphic": isomorphic(d1, d2)})


# --- argument parsing ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="subset-currents", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate-marking", help="check a marking graph")
    s.add_argument("marking")
    s.add_argument("--allow-degree-2", action="store_true")
    s.set_defaults(func=cmd_validate_marking)

    s = sub.add_parser("subgroup-graph", help="core graph of a finitely generated subgroup")
    s.add_argument("--marking", required=True)
    s.add_argument("--gen", action="append", required=True,
                   help="closed edge-path; one character per edge, or space-separated names")
    s.add_argument("--allow-degree-2", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_subgroup_graph)

    s = sub.add_parser("weights", help="weight table of a cyclically reduced graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--grade", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("check-switch", help="check the switch conditions of a table")
    s.add_argument("--weights", required=True)
    s.set_defaults(func=cmd_check_switch)

    s = sub.add_parser("subtree-weight", help="weight of an arbitrary subtree")
    s.add_argument("--tree", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--vertex", type=int)
    s.set_defaults(func=cmd_subtree_weight)

    s = sub.add_parser("realize", help="realize an integral table by a graph")
    s.add_argument("--weights", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("verify", help="check that a graph realizes a table")
    s.add_argument("--weights", required=True)
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("reconstruct", help="realize a hidden graph's current grade by grade")
    s.add_argument("--graph", required=True, help="hidden graph used as the weight oracle")
    s.add_argument("--rmax", type=int, default=3)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("approximate", help="rational approximation of a float table")
    s.add_argument("--target", required=True)
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.add_argument("--report")
    s.set_defaults(func=cmd_approximate)

    s = sub.add_parser("words-realize", help="cyclic words with given block counts")
    s.add_argument("--alphabet", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--weights", required=True)
    s.set_defaults(func=cmd_words_realize)

    s = sub.add_parser("iso", help="isomorphism test for two graphs")
    s.add_argument("graph1")
    s.add_argument("graph2")
    s.set_defaults(func=cmd_iso)
    return p


def run(argv=None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandFailure as exc:
        return exc.result
    except SwitchConditionError as exc:
        return _violation("switch-condition", str(exc),
                          violations=_switch_report(exc.violations)).result
    except RationalizationError as exc:
        return _violation("rational-approximation", str(exc), achieved=exc.achieved).result
    except MarkingError as exc:
        return _violation("marking", str(exc), reason=exc.reason).result
    except NotFoldedError as exc:
        return _violation("folded", str(exc)).result
    except NotCyclicallyReducedError as exc:
        return _violation("cyclically-reduced", str(exc)).result
    except PreconditionError as exc:
        return _violation("precondition", str(exc)).result
    except BudgetExceeded as exc:
        return CommandFailure(3, "budget", str(exc)).result
    except (CurrentsError, ValueError, OSError) as exc:
        return CommandFailure(1, "input", str(exc)).result


def main(argv=None) -> int:
    result = run(argv)
    if result.report:
        print(json.dumps(result.report, indent=2, default=str))
    return result.code


if __name__ == "__main__":
    sys.exit(main())
