"""Model preferences derived from named property scores.

A property preference is an ordered list of priority groups, e.g.
``[["accuracy"], ["simplicity"]]`` (accuracy first) or
``[["accuracy", "simplicity"]]`` (tied).  The induced model preference is a
total preorder stored as a dense rank vector: lower rank means more preferred,
equal ranks mean equally preferred.

Comparison is lexicographic across groups; within a group the scores are
summed, so for tied groups the magnitudes (not just the orderings) matter.
For single-property groups only the per-property ordering matters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, UsageError
from .instance import RAEInstance


class Comparison(enum.Enum):
    STRICT = "strict"
    EQUAL = "equal"
    WORSE = "worse"


@dataclass(frozen=True)
class ModelPreference:
    """Total preorder over model indices as a rank vector (0 = best)."""

    rank: tuple[int, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.rank):
            raise InputError("ranks must be non-negative", code="rank")

    @property
    def m(self) -> int:
        return len(self.rank)

    def prefers(self, i: int, j: int) -> Comparison:
        self._check(i)
        self._check(j)
        if self.rank[i] < self.rank[j]:
            return Comparison.STRICT
        if self.rank[i] == self.rank[j]:
            return Comparison.EQUAL
        return Comparison.WORSE

    def at_least(self, i: int, j: int) -> bool:
        """Weak preference: model ``i`` ranks no worse than model ``j``."""
        self._check(i)
        self._check(j)
        return self.rank[i] <= self.rank[j]

    def _check(self, i: int) -> None:
        if not (0 <= i < self.m):
            raise UsageError(f"model index {i} outside 0..{self.m - 1}")


PropertyPreference = Sequence[Sequence[str]]


def identity_preference(m: int) -> ModelPreference:
    """All models equally preferred."""
    return ModelPreference(rank=(0,) * m)


def lexicographic_preference(
    inst: RAEInstance, groups: PropertyPreference
) -> ModelPreference:
    """Rank models lexicographically by the given priority groups.

    Models tied on every group share a rank; ranks are dense starting at 0.
    """
    keys = []
    for i in range(inst.m):
        key = []
        for group in groups:
            total = 0.0
            for name in group:
                scores = inst.model_meta.get(name)
                if scores is None:
                    raise InputError(
                        f"model {i} has no score for property {name!r}",
                        code="property",
                    )
                total += scores[i]
            key.append(total)
        keys.append(tuple(key))
    distinct = sorted(set(keys), reverse=True)
    position = {key: r for r, key in enumerate(distinct)}
    return ModelPreference(rank=tuple(position[key] for key in keys))


def preference_from_ranks(ranks: Sequence[int]) -> ModelPreference:
    """Accept an externally supplied rank vector."""
    return ModelPreference(rank=tuple(int(r) for r in ranks))
