from __future__ import annotations

import random

import pytest

from rae import (
    RAEInstance,
    Solution,
    TieBreakRecord,
    UsageError,
    argumentative_ensemble,
    augmented_ensemble,
    check_all,
    lexicographic_preference,
    majority_label,
    robust_ensemble,
)
from conftest import random_instance


def _fake_solution(models, ces, label=0) -> Solution:
    return Solution(
        method="naive",
        label=label,
        model_ids=frozenset(models),
        ce_ids=frozenset(ces),
        tiebreak=TieBreakRecord(0, 0, 1),
    )


def test_worked_example_augmented_report(five_model_instance):
    report = check_all(five_model_instance, augmented_ensemble(five_model_instance))
    assert not report.counterfactual_validity
    assert "counterfactual_validity" in report.witnesses
    assert report.non_emptiness
    assert report.model_agreement
    assert report.majority_vote
    assert report.counterfactual_coherence
    assert report.non_triviality


def test_worked_example_robust_report(five_model_instance):
    report = check_all(five_model_instance, robust_ensemble(five_model_instance))
    assert not report.non_emptiness
    assert not report.counterfactual_coherence
    assert report.model_agreement
    assert report.majority_vote
    assert report.counterfactual_validity


def test_worked_example_argumentative_report(five_model_instance):
    mp = lexicographic_preference(five_model_instance, [["accuracy"], ["simplicity"]])
    report = check_all(five_model_instance, argumentative_ensemble(five_model_instance, mp))
    assert not report.majority_vote
    assert report.non_emptiness
    assert report.model_agreement
    assert report.counterfactual_validity
    assert report.counterfactual_coherence


def test_majority_label_worked_example(five_model_instance):
    assert majority_label(five_model_instance) == {0}


def test_majority_label_tie():
    inst = RAEInstance((0, 1), ((1, 0), (1, 0)))
    assert majority_label(inst) == {0, 1}


def test_majority_label_matches_counting_oracle():
    rng = random.Random(7)
    for _ in range(50):
        inst, _ = random_instance(rng)
        counts = {v: sum(1 for x in inst.pred_x if x == v) for v in (0, 1)}
        best = max(counts.values())
        assert majority_label(inst) == {v for v, c in counts.items() if c == best}


def test_majority_vote_false_whenever_agreement_false():
    rng = random.Random(9)
    for _ in range(200):
        inst, _ = random_instance(rng, max_m=6)
        models = frozenset(i for i in range(inst.m) if rng.random() < 0.5)
        ces = frozenset(i for i in range(inst.m) if rng.random() < 0.5)
        label = inst.pred_x[min(models)] if models else 0
        report = check_all(inst, _fake_solution(models, ces, label))
        if not report.model_agreement:
            assert not report.majority_vote


def test_every_false_flag_has_a_witness():
    rng = random.Random(10)
    for _ in range(200):
        inst, _ = random_instance(rng, max_m=5)
        models = frozenset(i for i in range(inst.m) if rng.random() < 0.5)
        ces = frozenset(i for i in range(inst.m) if rng.random() < 0.5)
        report = check_all(inst, _fake_solution(models, ces))
        for name in (
            "non_emptiness",
            "non_triviality",
            "model_agreement",
            "majority_vote",
            "counterfactual_validity",
            "counterfactual_coherence",
        ):
            if not report.flag(name):
                assert name in report.witnesses


def test_coherence_invariant_under_joint_permutation():
    rng = random.Random(11)
    for _ in range(60):
        inst, _ = random_instance(rng, max_m=6)
        m = inst.m
        models = frozenset(i for i in range(m) if rng.random() < 0.5)
        ces = frozenset(i for i in range(m) if rng.random() < 0.5)
        perm = list(range(m))
        rng.shuffle(perm)
        inv = {v: k for k, v in enumerate(perm)}
        permuted = RAEInstance(
            pred_x=tuple(inst.pred_x[perm[i]] for i in range(m)),
            pred_ce=tuple(
                tuple(inst.pred_ce[perm[i]][perm[j]] for j in range(m)) for i in range(m)
            ),
        )
        a = check_all(inst, _fake_solution(models, ces)).counterfactual_coherence
        b = check_all(
            permuted,
            _fake_solution({inv[i] for i in models}, {inv[i] for i in ces}),
        ).counterfactual_coherence
        assert a == b


def test_index_mismatch_is_usage_error(five_model_instance):
    with pytest.raises(UsageError):
        check_all(five_model_instance, _fake_solution({7}, set()))


def test_report_serializes():
    inst = RAEInstance((0,), ((1,),))
    doc = check_all(inst, _fake_solution({0}, {0})).as_dict()
    assert doc["non_emptiness"] is True
    assert doc["non_triviality"] is False
    assert isinstance(doc["witnesses"], dict)
