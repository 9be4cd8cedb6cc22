from __future__ import annotations

import random
from pathlib import Path

import pytest

from rae import BAF, RAEInstance, ModelPreference, preference_from_ranks

DATA = Path(__file__).parent / "data"

# The worked five-model example used throughout: three models reject, two
# accept, counterfactual cross-validity as published.
FIVE_PRED_X = (0, 0, 0, 1, 1)
FIVE_PRED_CE = (
    (1, 0, 1, 1, 1),
    (0, 1, 0, 1, 1),
    (1, 1, 1, 0, 1),
    (0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0),
)
FIVE_META = {
    "accuracy": (0.85, 0.87, 0.86, 0.86, 0.87),
    "simplicity": (0.0, 0.75, 1.0, 0.5, 0.75),
}

# Its framework: models are arguments 0..4, counterfactuals 5..9.
FIVE_ATTACKS = frozenset(
    {(1, 3), (1, 4), (1, 5), (1, 7), (2, 3), (2, 8), (3, 0), (4, 0), (4, 1), (4, 2), (6, 0)}
)
FIVE_SUPPORTS = frozenset(
    {(i, 5 + i) for i in range(5)} | {(5 + i, i) for i in range(5)}
)


@pytest.fixture
def five_model_instance() -> RAEInstance:
    return RAEInstance(pred_x=FIVE_PRED_X, pred_ce=FIVE_PRED_CE, model_meta=FIVE_META)


@pytest.fixture
def five_model_baf() -> BAF:
    return BAF(10, FIVE_ATTACKS, FIVE_SUPPORTS)


def random_baf(rng: random.Random, max_args: int = 12, p_att: float = 0.12, p_sup: float = 0.10) -> BAF:
    n = rng.randint(0, max_args)
    atts, sups = set(), set()
    for a in range(n):
        for b in range(n):
            r = rng.random()
            if r < p_att:
                atts.add((a, b))
            elif r < p_att + p_sup:
                sups.add((a, b))
    return BAF(n, atts, sups)


def random_instance(
    rng: random.Random, m: int | None = None, max_m: int = 8
) -> tuple[RAEInstance, ModelPreference]:
    if m is None:
        m = rng.randint(1, max_m)
    pred_x = tuple(rng.randint(0, 1) for _ in range(m))
    pred_ce = [[rng.randint(0, 1) for _ in range(m)] for _ in range(m)]
    for i in range(m):
        pred_ce[i][i] = 1 - pred_x[i]
    inst = RAEInstance(pred_x=pred_x, pred_ce=tuple(tuple(r) for r in pred_ce))
    mp = preference_from_ranks([rng.randrange(m) for _ in range(m)])
    return inst, mp


def all_equal_cross_valid_instance(rng: random.Random, m: int) -> RAEInstance:
    """Every counterfactual of a model is valid for every same-label model."""
    pred_x = tuple(rng.randint(0, 1) for _ in range(m))
    pred_ce = [[rng.randint(0, 1) for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if pred_x[i] == pred_x[j]:
                pred_ce[i][j] = 1 - pred_x[i]
    return RAEInstance(pred_x=pred_x, pred_ce=tuple(tuple(r) for r in pred_ce))
