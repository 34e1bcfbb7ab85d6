"""Scenario-fidelity accuracy from tree edit distance.

Accuracy is 1 minus the edit distance normalized by the ground-truth tree
size, clamped below at zero (a wildly oversized candidate would otherwise
go negative).  Relabel-only corruptions of k leaves therefore score exactly
1 - k / |ground truth|.
"""

from __future__ import annotations

from scenario_forge.ir import Scenario, canonical_tree, validate

from .ted import ted


def ie_accuracy(candidate: Scenario, ground_truth: Scenario) -> float:
    """Fraction of the ground-truth tree the candidate gets right, in [0, 1]."""
    report = validate(ground_truth)
    if not report.is_valid:
        raise ValueError(f"ground truth is invalid:\n{report}")
    truth_tree = canonical_tree(ground_truth)
    distance = ted(canonical_tree(candidate), truth_tree)
    return max(0.0, 1.0 - distance / truth_tree.node_count())


def scenario_ted(candidate: Scenario, ground_truth: Scenario) -> int:
    return ted(canonical_tree(candidate), canonical_tree(ground_truth))
