"""Data model for one recourse problem.

An instance records, for ``m`` binary classifiers, the prediction of every
model on the shared input and on every model's counterfactual, plus optional
named per-model scores (accuracy, simplicity, ...).  The diagonal of the
counterfactual matrix must flip: ``c_i`` is only a counterfactual for model
``i`` when model ``i`` labels it differently from the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import BinaryIO, Mapping

from .errors import InputError, UsageError

_TOP_LEVEL_KEYS = {"labels", "pred_x", "pred_ce", "model_meta", "ce_features"}


@dataclass(frozen=True)
class RAEInstance:
    pred_x: tuple[int, ...]
    pred_ce: tuple[tuple[int, ...], ...]
    model_meta: Mapping[str, tuple[float, ...]] = field(default_factory=dict)
    ce_features: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        m = len(self.pred_x)
        if m < 1:
            raise InputError("an instance needs at least one model", code="shape")
        for v in self.pred_x:
            _check_label(v)
        if len(self.pred_ce) != m or any(len(row) != m for row in self.pred_ce):
            raise InputError(
                f"prediction matrix must be {m}x{m} to match the model count",
                code="shape",
            )
        for row in self.pred_ce:
            for v in row:
                _check_label(v)
        for i in range(m):
            if self.pred_ce[i][i] == self.pred_x[i]:
                raise InputError(
                    f"counterfactual {i} does not flip the prediction of its own model {i}",
                    code="diagonal",
                )
        for name, scores in self.model_meta.items():
            if len(scores) != m:
                raise InputError(
                    f"property {name!r} has {len(scores)} scores for {m} models",
                    code="shape",
                )
        if self.ce_features is not None and len(self.ce_features) != m:
            raise InputError(
                f"expected {m} counterfactual feature rows, got {len(self.ce_features)}",
                code="shape",
            )

    @property
    def m(self) -> int:
        return len(self.pred_x)

    def validity(self, i: int, j: int) -> bool:
        """Does counterfactual ``j`` flip the prediction of model ``i``?"""
        self._check_index(i)
        self._check_index(j)
        return self.pred_ce[i][j] != self.pred_x[i]

    def _check_index(self, i: int) -> None:
        if not (0 <= i < self.m):
            raise UsageError(f"index {i} outside 0..{self.m - 1}")


def _check_label(v: int) -> None:
    if v not in (0, 1):
        raise InputError(f"label {v!r} is not binary", code="label")


def instance_from_dict(doc: Mapping) -> RAEInstance:
    if not isinstance(doc, Mapping):
        raise InputError("instance document must be a JSON object", code="schema")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    if unknown:
        raise InputError(
            f"unknown top-level keys: {', '.join(sorted(unknown))}", code="schema"
        )
    for key in ("labels", "pred_x", "pred_ce"):
        if key not in doc:
            raise InputError(f"missing required key {key!r}", code="schema")
    if list(doc["labels"]) != [0, 1]:
        raise InputError("labels must be exactly [0, 1]", code="label")
    meta = doc.get("model_meta", {})
    if not isinstance(meta, Mapping):
        raise InputError("model_meta must be an object of score lists", code="schema")
    ce_features = doc.get("ce_features")
    return RAEInstance(
        pred_x=tuple(int(v) for v in doc["pred_x"]),
        pred_ce=tuple(tuple(int(v) for v in row) for row in doc["pred_ce"]),
        model_meta={str(k): tuple(float(x) for x in v) for k, v in meta.items()},
        ce_features=None
        if ce_features is None
        else tuple(tuple(float(x) for x in row) for row in ce_features),
    )


def load_instance(source: BinaryIO | bytes | str, format: str = "json") -> RAEInstance:
    """Parse and validate an instance from a byte stream.

    Every reported problem carries a distinct ``code``: schema, label, shape
    or diagonal.
    """
    if format != "json":
        raise UsageError(f"unsupported instance format {format!r}")
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, str):
        data = source.encode()
    else:
        data = source.read()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}", code="schema") from None
    return instance_from_dict(doc)


def instance_to_dict(inst: RAEInstance) -> dict:
    doc: dict = {
        "labels": [0, 1],
        "pred_x": list(inst.pred_x),
        "pred_ce": [list(row) for row in inst.pred_ce],
        "model_meta": {k: list(v) for k, v in inst.model_meta.items()},
    }
    if inst.ce_features is not None:
        doc["ce_features"] = [list(row) for row in inst.ce_features]
    return doc


def dump_instance(inst: RAEInstance) -> bytes:
    return json.dumps(instance_to_dict(inst), sort_keys=True).encode()


@dataclass(frozen=True)
class TieBreakRecord:
    seed: int
    chosen_index: int
    num_candidates: int

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "chosen_index": self.chosen_index,
            "num_candidates": self.num_candidates,
        }


@dataclass(frozen=True)
class Solution:
    """A selected set of models and counterfactuals plus the aggregated label."""

    method: str
    label: int
    model_ids: frozenset[int]
    ce_ids: frozenset[int]
    tiebreak: TieBreakRecord

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "label": self.label,
            "models": sorted(self.model_ids),
            "ces": sorted(self.ce_ids),
            "tiebreak": self.tiebreak.as_dict(),
        }
