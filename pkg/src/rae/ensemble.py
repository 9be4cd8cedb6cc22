"""The four ensembling methods.

* naive: majority vote over the models' input predictions, no counterfactuals;
* augmented: the majority models plus each of their own counterfactuals;
* robust: the majority models plus only those counterfactuals valid for every
  majority model;
* argumentative: build the bipolar framework coupling models with their
  counterfactuals and return a largest s-preferred extension.

In the framework, arguments ``0..m-1`` are the models and ``m..2m-1`` their
counterfactuals.  A model attacks a disagreeing model it weakly outranks;
a model and a foreign counterfactual that fails to flip it attack each other
subject to the same rank test; each model and its own counterfactual support
each other reciprocally.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .baf import BAF, Semantics
from .errors import UsageError
from .instance import RAEInstance, Solution, TieBreakRecord
from .preferences import ModelPreference, identity_preference

METHODS = ("naive", "augmented", "robust", "argumentative")

SEEDED = "seeded"
MATCH_NAIVE = "match-naive"
REPORT_ALL = "report-all"


@dataclass(frozen=True)
class TieBreak:
    """How to resolve ties between equally good candidate solutions.

    ``seeded`` draws uniformly with a fixed seed.  ``match-naive`` keeps the
    candidates sharing the naive label when any exist, then draws seeded.
    ``report-all`` returns every candidate.
    """

    policy: str = SEEDED
    seed: int = 0

    def __post_init__(self):
        if self.policy not in (SEEDED, MATCH_NAIVE, REPORT_ALL):
            raise UsageError(f"unknown tie-break policy {self.policy!r}")
        if not (0 <= self.seed < 2**64):
            raise UsageError("tie-break seed must fit an unsigned 64-bit integer")


def _pick(candidates: int, seed: int) -> int:
    if candidates == 1:
        return 0
    return random.Random(seed).randrange(candidates)


@dataclass(frozen=True)
class ArgMap:
    """Mapping between model/counterfactual indices and framework argument ids."""

    m: int

    def model_arg(self, i: int) -> int:
        return i

    def ce_arg(self, i: int) -> int:
        return self.m + i

    def split(self, extension: frozenset[int]) -> tuple[frozenset[int], frozenset[int]]:
        models = frozenset(a for a in extension if a < self.m)
        ces = frozenset(a - self.m for a in extension if a >= self.m)
        return models, ces


def majority_labels(inst: RAEInstance) -> frozenset[int]:
    """The label(s) backed by the largest number of models."""
    counts = [0, 0]
    for v in inst.pred_x:
        counts[v] += 1
    best = max(counts)
    return frozenset(label for label in (0, 1) if counts[label] == best)


def naive_ensemble(inst: RAEInstance, tb: TieBreak | None = None) -> Solution:
    tb = tb or TieBreak(SEEDED)
    labels = sorted(majority_labels(inst))
    chosen = _pick(len(labels), tb.seed)
    label = labels[chosen]
    return Solution(
        method="naive",
        label=label,
        model_ids=frozenset(i for i, v in enumerate(inst.pred_x) if v == label),
        ce_ids=frozenset(),
        tiebreak=TieBreakRecord(tb.seed, chosen, len(labels)),
    )


def augmented_ensemble(inst: RAEInstance, tb: TieBreak | None = None) -> Solution:
    base = naive_ensemble(inst, tb)
    return Solution(
        method="augmented",
        label=base.label,
        model_ids=base.model_ids,
        ce_ids=base.model_ids,
        tiebreak=base.tiebreak,
    )


def robust_ensemble(inst: RAEInstance, tb: TieBreak | None = None) -> Solution:
    base = naive_ensemble(inst, tb)
    kept = frozenset(
        i
        for i in base.model_ids
        if all(inst.validity(j, i) for j in base.model_ids)
    )
    return Solution(
        method="robust",
        label=base.label,
        model_ids=base.model_ids,
        ce_ids=kept,
        tiebreak=base.tiebreak,
    )


def build_baf(
    inst: RAEInstance, mp: ModelPreference | None = None
) -> tuple[BAF, ArgMap]:
    """The bipolar framework coupling models and counterfactuals."""
    m = inst.m
    mp = mp or identity_preference(m)
    if mp.m != m:
        raise UsageError(f"preference covers {mp.m} models, instance has {m}")
    amap = ArgMap(m)
    attacks = []
    for i in range(m):
        for j in range(m):
            if i != j and inst.pred_x[i] != inst.pred_x[j] and mp.at_least(i, j):
                attacks.append((amap.model_arg(i), amap.model_arg(j)))
    for i in range(m):
        for j in range(m):
            if i == j or inst.validity(i, j):
                continue
            # Counterfactual j fails to flip model i; rank decides direction.
            if mp.at_least(i, j):
                attacks.append((amap.model_arg(i), amap.ce_arg(j)))
            if mp.at_least(j, i):
                attacks.append((amap.ce_arg(j), amap.model_arg(i)))
    supports = []
    for i in range(m):
        supports.append((amap.model_arg(i), amap.ce_arg(i)))
        supports.append((amap.ce_arg(i), amap.model_arg(i)))
    return BAF(2 * m, attacks, supports), amap


def s_preferred_sets(
    inst: RAEInstance, mp: ModelPreference | None = None
) -> tuple[list[frozenset[int]], BAF, ArgMap]:
    """All s-preferred extensions of the corresponding framework.

    Exploits the pair structure: every maximal safe-and-defended set couples
    each model with its own counterfactual, so the search runs over the
    model/counterfactual pairs, split by predicted label (pairs of disagreeing
    models always conflict).  The generic engine then only has to rank unions
    of pairs, which keeps 30-model problems tractable.
    """
    baf, amap = build_baf(inst, mp)
    m = inst.m
    by_label: dict[int, list[int]] = {0: [], 1: []}
    for i in range(m):
        by_label[inst.pred_x[i]].append(i)
    masks: list[int] = []
    for label in (0, 1):
        units = [
            (1 << amap.model_arg(i)) | (1 << amap.ce_arg(i)) for i in by_label[label]
        ]
        if units:
            masks.extend(baf.maximal_admissible_unions(Semantics.S_ADMISSIBLE, units))
    # Cross-label results never overlap, so only the empty set can be dominated.
    nonempty = [x for x in masks if x]
    masks = nonempty or [0]
    exts = {frozenset(_mask_bits(x)) for x in masks}
    return sorted(exts, key=lambda e: tuple(sorted(e))), baf, amap


def _mask_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def argumentative_solutions(
    inst: RAEInstance, mp: ModelPreference | None = None
) -> list[Solution]:
    """Every largest s-preferred extension, as a solution, in canonical order."""
    exts, _, amap = s_preferred_sets(inst, mp)
    top = max(len(e) for e in exts)
    best = [e for e in exts if len(e) == top]
    solutions = []
    for idx, ext in enumerate(best):
        models, ces = amap.split(ext)
        label = inst.pred_x[min(models)] if models else 0
        solutions.append(
            Solution(
                method="argumentative",
                label=label,
                model_ids=models,
                ce_ids=ces,
                tiebreak=TieBreakRecord(0, idx, len(best)),
            )
        )
    return solutions


def select_solution(
    candidates: list[Solution], inst: RAEInstance, tb: TieBreak
) -> Solution:
    """Resolve a tie among candidate solutions per the given policy."""
    if tb.policy == REPORT_ALL:
        raise UsageError("report-all does not select a single solution")
    pool = list(range(len(candidates)))
    if tb.policy == MATCH_NAIVE:
        naive_label = naive_ensemble(inst, TieBreak(SEEDED, tb.seed)).label
        matching = [i for i in pool if candidates[i].label == naive_label]
        if matching:
            pool = matching
    chosen = pool[_pick(len(pool), tb.seed)]
    picked = candidates[chosen]
    return Solution(
        method=picked.method,
        label=picked.label,
        model_ids=picked.model_ids,
        ce_ids=picked.ce_ids,
        tiebreak=TieBreakRecord(tb.seed, chosen, len(candidates)),
    )


def argumentative_ensemble(
    inst: RAEInstance,
    mp: ModelPreference | None = None,
    tb: TieBreak | None = None,
) -> Solution | list[Solution]:
    """One largest s-preferred extension (or all of them under report-all)."""
    tb = tb or TieBreak(MATCH_NAIVE)
    candidates = argumentative_solutions(inst, mp)
    if tb.policy == REPORT_ALL:
        return candidates
    return select_solution(candidates, inst, tb)


def ensemble(
    inst: RAEInstance,
    method: str,
    mp: ModelPreference | None = None,
    tb: TieBreak | None = None,
) -> Solution | list[Solution]:
    """Uniform dispatch; naive/augmented/robust ignore the preference."""
    if method == "naive":
        sol = naive_ensemble(inst, tb)
    elif method == "augmented":
        sol = augmented_ensemble(inst, tb)
    elif method == "robust":
        sol = robust_ensemble(inst, tb)
    elif method == "argumentative":
        return argumentative_ensemble(inst, mp, tb)
    else:
        raise UsageError(f"unknown ensembling method {method!r}")
    if tb is not None and tb.policy == REPORT_ALL:
        return _all_naive_style(inst, sol)
    return sol


def _all_naive_style(inst: RAEInstance, picked: Solution) -> list[Solution]:
    """All candidate solutions of a majority-vote based method (one per top label)."""
    labels = sorted(majority_labels(inst))
    out = []
    for idx, label in enumerate(labels):
        models = frozenset(i for i, v in enumerate(inst.pred_x) if v == label)
        if picked.method == "naive":
            ces: frozenset[int] = frozenset()
        elif picked.method == "augmented":
            ces = models
        else:
            ces = frozenset(
                i for i in models if all(inst.validity(j, i) for j in models)
            )
        out.append(
            Solution(
                method=picked.method,
                label=label,
                model_ids=models,
                ce_ids=ces,
                tiebreak=TieBreakRecord(0, idx, len(labels)),
            )
        )
    return out
