"""Executable checkers for the six desirable properties of a solution.

Each property is evaluated on one (instance, solution) pair; a failed flag
comes with a witness describing the offending index or pair.  Majority vote
presupposes model agreement, so it is reported false whenever agreement fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ensemble import majority_labels
from .errors import UsageError
from .instance import RAEInstance, Solution

PROPERTY_NAMES = (
    "non_emptiness",
    "non_triviality",
    "model_agreement",
    "majority_vote",
    "counterfactual_validity",
    "counterfactual_coherence",
)


@dataclass(frozen=True)
class PropertyReport:
    non_emptiness: bool
    non_triviality: bool
    model_agreement: bool
    majority_vote: bool
    counterfactual_validity: bool
    counterfactual_coherence: bool
    witnesses: dict[str, str] = field(default_factory=dict)

    def flag(self, name: str) -> bool:
        if name not in PROPERTY_NAMES:
            raise UsageError(f"unknown property {name!r}")
        return getattr(self, name)

    def as_dict(self) -> dict:
        doc = {name: getattr(self, name) for name in PROPERTY_NAMES}
        doc["witnesses"] = dict(sorted(self.witnesses.items()))
        return doc


def majority_label(inst: RAEInstance) -> frozenset[int]:
    """Label(s) with maximal model support on the input."""
    return majority_labels(inst)


def check_all(inst: RAEInstance, sol: Solution) -> PropertyReport:
    m = inst.m
    for i in sorted(sol.model_ids | sol.ce_ids):
        if not (0 <= i < m):
            raise UsageError(f"solution index {i} outside 0..{m - 1}")
    witnesses: dict[str, str] = {}

    models = sol.model_ids
    ces = sol.ce_ids

    non_emptiness = bool(models) and bool(ces)
    if not non_emptiness:
        side = "model" if not models else "counterfactual"
        witnesses["non_emptiness"] = f"no {side}s selected"

    non_triviality = len(models) > 1
    if not non_triviality:
        witnesses["non_triviality"] = f"only {len(models)} model(s) selected"

    model_agreement = True
    labels = {inst.pred_x[i] for i in models}
    if len(labels) > 1:
        model_agreement = False
        by_label = {v: i for i, v in ((i, inst.pred_x[i]) for i in sorted(models))}
        witnesses["model_agreement"] = (
            f"models {by_label[0]} and {by_label[1]} disagree on the input"
        )

    majority_vote = model_agreement and bool(models)
    if majority_vote:
        shared = labels.pop()
        counts = [0, 0]
        for v in inst.pred_x:
            counts[v] += 1
        other = 1 - shared
        if counts[other] > counts[shared]:
            majority_vote = False
            witnesses["majority_vote"] = (
                f"label {other} has {counts[other]} supporters, "
                f"selected label {shared} has {counts[shared]}"
            )
    elif "model_agreement" in witnesses:
        witnesses["majority_vote"] = "presupposes model agreement"
    else:
        witnesses["majority_vote"] = "no models selected"

    counterfactual_validity = True
    for i in sorted(models):
        for j in sorted(ces):
            if not inst.validity(i, j):
                counterfactual_validity = False
                witnesses["counterfactual_validity"] = (
                    f"counterfactual {j} does not flip model {i}"
                )
                break
        if not counterfactual_validity:
            break

    counterfactual_coherence = True
    for i in range(m):
        if (i in models) != (i in ces):
            counterfactual_coherence = False
            side = "model" if i in models else "counterfactual"
            witnesses["counterfactual_coherence"] = (
                f"{side} {i} selected without its partner"
            )
            break

    return PropertyReport(
        non_emptiness=non_emptiness,
        non_triviality=non_triviality,
        model_agreement=model_agreement,
        majority_vote=majority_vote,
        counterfactual_validity=counterfactual_validity,
        counterfactual_coherence=counterfactual_coherence,
        witnesses=witnesses,
    )
