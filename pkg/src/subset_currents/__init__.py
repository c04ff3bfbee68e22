"""Weight systems of subset currents on free groups: occurrence counts of trees
in folded Gamma-graphs, switch conditions, and realization of integral weights."""

from .core_graphs import (GammaGraph, MarkingGraph, circle, components, core, disjoint_union,
                          fold, is_cyclically_reduced, is_folded, isomorphic, marking_from_pairs,
                          rose, subgroup_graph, theta, validate_marking)
from .errors import (BudgetExceeded, CurrentsError, GraphFormatError, MarkingError,
                     NotCyclicallyReducedError, NotFoldedError, PreconditionError,
                     RationalizationError, SwitchConditionError)
from .trees import (GammaTree, RoundGraph, SemiRoundGraph, admissible_extensions, ball,
                    canonical_key, child, completions, enumerate_round, round_class_count)
from .weights import WeightSystem, check_switch, occurrences, subtree_weight, weights_of
from .realization import realize, reconstruct, verify_realization
from .approximation import approximate_by_rational_current, rationalize, switch_matrix
from .symbolic_words import CyclicWord, occurrences_cyclic, realize_words, word_weights

__version__ = "0.1.0"

__all__ = [
    "GammaGraph",
    "MarkingGraph",
    "circle",
    "components",
    "core",
    "disjoint_union",
    "fold",
    "is_cyclically_reduced",
    "is_folded",
    "isomorphic",
    "marking_from_pairs",
    "rose",
    "subgroup_graph",
    "theta",
    "validate_marking",
    "BudgetExceeded",
    "CurrentsError",
    "GraphFormatError",
    "MarkingError",
    "NotCyclicallyReducedError",
    "NotFoldedError",
    "PreconditionError",
    "RationalizationError",
    "SwitchConditionError",
    "GammaTree",
    "RoundGraph",
    "SemiRoundGraph",
    "admissible_extensions",
    "ball",
    "canonical_key",
    "child",
    "completions",
    "enumerate_round",
    "round_class_count",
    "WeightSystem",
    "check_switch",
    "occurrences",
    "subtree_weight",
    "weights_of",
    "realize",
    "reconstruct",
    "verify_realization",
    "approximate_by_rational_current",
    "rationalize",
    "switch_matrix",
    "CyclicWord",
    "occurrences_cyclic",
    "realize_words",
    "word_weights",
]
