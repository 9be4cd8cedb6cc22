from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rae import (
    Comparison,
    InputError,
    RAEInstance,
    identity_preference,
    lexicographic_preference,
    preference_from_ranks,
)
from conftest import random_instance


def _instance_with_scores(**scores) -> RAEInstance:
    m = len(next(iter(scores.values())))
    pred_x = tuple(0 for _ in range(m))
    pred_ce = tuple(
        tuple(1 if i == j else 0 for j in range(m)) for i in range(m)
    )
    return RAEInstance(pred_x=pred_x, pred_ce=pred_ce, model_meta={k: tuple(v) for k, v in scores.items()})


WORKED = dict(
    accuracy=[0.85, 0.87, 0.86, 0.86, 0.87],
    simplicity=[0.0, 0.75, 1.0, 0.5, 0.75],
)


def pairwise_rule(scores_by_group, i, j):
    """Unrolled comparison: first group whose totals differ decides."""
    for totals in scores_by_group:
        if totals[i] > totals[j]:
            return "better"
        if totals[i] < totals[j]:
            return "worse"
    return "tied"


def test_worked_example_ordering():
    inst = _instance_with_scores(**WORKED)
    mp = lexicographic_preference(inst, [["accuracy"], ["simplicity"]])
    # second and fifth tied on top, then third, fourth, first
    assert mp.rank == (3, 0, 1, 2, 0)


def test_worked_example_comparisons():
    inst = _instance_with_scores(**WORKED)
    mp = lexicographic_preference(inst, [["accuracy"], ["simplicity"]])
    assert mp.prefers(1, 4) is Comparison.EQUAL
    assert mp.prefers(1, 2) is Comparison.STRICT
    assert mp.prefers(0, 4) is Comparison.WORSE


def test_reflexive_comparison():
    mp = preference_from_ranks([2, 0, 1])
    for i in range(3):
        assert mp.prefers(i, i) is Comparison.EQUAL


def test_comparisons_match_rank_vector():
    rng = random.Random(11)
    for _ in range(30):
        m = rng.randint(1, 8)
        mp = preference_from_ranks([rng.randrange(m) for _ in range(m)])
        for i in range(m):
            for j in range(m):
                got = mp.prefers(i, j)
                if mp.rank[i] < mp.rank[j]:
                    assert got is Comparison.STRICT
                elif mp.rank[i] == mp.rank[j]:
                    assert got is Comparison.EQUAL
                else:
                    assert got is Comparison.WORSE


def test_empty_property_list_means_indifference():
    inst = _instance_with_scores(**WORKED)
    assert lexicographic_preference(inst, []).rank == (0,) * 5
    assert identity_preference(5).rank == (0,) * 5


def test_random_scores_match_pairwise_oracle():
    rng = random.Random(13)
    for _ in range(40):
        m = rng.randint(1, 7)
        scores = {
            "a": [rng.choice([0.1, 0.2, 0.3, 0.4]) for _ in range(m)],
            "b": [rng.choice([0.0, 0.5, 1.0]) for _ in range(m)],
        }
        inst = _instance_with_scores(**scores)
        groups = [["a"], ["b"]]
        mp = lexicographic_preference(inst, groups)
        totals = [scores["a"], scores["b"]]
        for i in range(m):
            for j in range(m):
                verdict = pairwise_rule(totals, i, j)
                if verdict == "better":
                    assert mp.rank[i] < mp.rank[j]
                elif verdict == "worse":
                    assert mp.rank[i] > mp.rank[j]
                else:
                    assert mp.rank[i] == mp.rank[j]


def test_tied_group_compares_sum():
    inst = _instance_with_scores(a=[0.2, 0.4, 0.1], b=[0.5, 0.1, 0.9])
    mp = lexicographic_preference(inst, [["a", "b"]])
    # sums: 0.7, 0.5, 1.0
    assert mp.rank == (1, 2, 0)


def test_missing_property_names_model_and_property():
    inst = _instance_with_scores(a=[0.1, 0.2])
    with pytest.raises(InputError, match="model 0.*'b'"):
        lexicographic_preference(inst, [["b"]])


def test_scale_invariance_of_single_property_groups():
    rng = random.Random(17)
    for _ in range(25):
        m = rng.randint(2, 7)
        scores = {
            "a": [rng.random() for _ in range(m)],
            "b": [rng.random() for _ in range(m)],
        }
        factor = rng.choice([0.25, 3.0, 117.0])
        scaled = dict(scores)
        scaled["a"] = [v * factor for v in scores["a"]]
        groups = [["a"], ["b"]]
        base = lexicographic_preference(_instance_with_scores(**scores), groups)
        after = lexicographic_preference(_instance_with_scores(**scaled), groups)
        assert base.rank == after.rank


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=8))
def test_rank_vectors_induce_total_transitive_preorders(ranks):
    mp = preference_from_ranks(ranks)
    m = mp.m
    for i in range(m):
        for j in range(m):
            # totality: one of the three outcomes always holds
            assert mp.prefers(i, j) in (Comparison.STRICT, Comparison.EQUAL, Comparison.WORSE)
            for k in range(m):
                if mp.at_least(i, j) and mp.at_least(j, k):
                    assert mp.at_least(i, k)


def test_lexicographic_preorder_is_total_and_transitive():
    rng = random.Random(19)
    for _ in range(20):
        inst, _ = random_instance(rng, max_m=6)
        scores = {"p": tuple(rng.random() for _ in range(inst.m))}
        inst = RAEInstance(inst.pred_x, inst.pred_ce, model_meta=scores)
        mp = lexicographic_preference(inst, [["p"]])
        for i in range(inst.m):
            for j in range(inst.m):
                assert mp.at_least(i, j) or mp.at_least(j, i)


def test_negative_rank_rejected():
    with pytest.raises(InputError):
        preference_from_ranks([0, -1])
