from __future__ import annotations

import json
import math
import random

import numpy as np
import pytest

from rae import InputError
from rae.lab import (
    CounterfactualFailure,
    Dataset,
    ExperimentConfig,
    assemble_instance,
    load_config,
    load_csv_dataset,
    make_moons,
    nn_counterfactual,
    render_experiment_figures,
    run_experiment,
    split_train_holdout,
    train_pool,
    write_metrics_csv,
    write_metrics_sidecar,
)
from rae.lab.models import TrainedModel, train_model


class TestData:
    def test_moons_normalized_and_balanced(self):
        ds = make_moons(n=500, noise=0.2, seed=3)
        assert ds.n == 500 and ds.d == 2
        assert ds.features.min() >= 0.0 and ds.features.max() <= 1.0
        counts = np.bincount(ds.labels)
        assert counts[0] == 250 and counts[1] == 250

    def test_moons_deterministic(self):
        a = make_moons(n=100, noise=0.2, seed=9)
        b = make_moons(n=100, noise=0.2, seed=9)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_csv_loader(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("f1,f2,target\n0.0,10.0,0\n1.0,20.0,1\n2.0,0.0,1\n")
        ds = load_csv_dataset(path)
        assert ds.n == 3 and ds.d == 2
        assert ds.features.max() <= 1.0
        assert list(ds.labels) == [0, 1, 1]

    def test_csv_missing_value_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("f1,target\n1.0,0\n,1\n")
        with pytest.raises(InputError) as err:
            load_csv_dataset(path)
        assert err.value.code == "missing"

    def test_csv_non_binary_target_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("f1,target\n1.0,0\n2.0,3\n")
        with pytest.raises(InputError) as err:
            load_csv_dataset(path)
        assert err.value.code == "label"

    def test_split_is_seeded_and_disjoint(self):
        ds = make_moons(n=200, seed=1)
        a_train, a_hold = split_train_holdout(ds, 0.2, seed=5)
        b_train, b_hold = split_train_holdout(ds, 0.2, seed=5)
        assert np.array_equal(a_train.features, b_train.features)
        assert a_train.n == 160 and a_hold.n == 40


class TestTraining:
    def test_pool_of_one(self):
        ds = make_moons(n=300, noise=0.2, seed=2)
        train, hold = split_train_holdout(ds, 0.2, seed=2)
        pool = train_pool(train, hold, 1, seed=4, epochs=10)
        assert len(pool) == 1
        assert 0.0 <= pool[0].accuracy <= 1.0

    def test_pool_accuracies_cluster_near_their_mean(self):
        ds = make_moons(n=1200, noise=0.3, seed=8)
        train, hold = split_train_holdout(ds, 0.2, seed=8)
        pool = train_pool(train, hold, 30, seed=8, epochs=25)
        accs = np.array([m.accuracy for m in pool])
        assert np.abs(accs - accs.mean()).max() <= 0.1

    def test_fixed_master_seed_reproduces_pool_exactly(self):
        ds = make_moons(n=400, noise=0.25, seed=6)
        train, hold = split_train_holdout(ds, 0.2, seed=6)
        a = train_pool(train, hold, 6, seed=77, epochs=8)
        b = train_pool(train, hold, 6, seed=77, epochs=8)
        for ma, mb in zip(a, b):
            assert ma.accuracy == mb.accuracy
            assert ma.simplicity == mb.simplicity
            assert all(np.array_equal(pa, pb) for pa, pb in zip(ma.params, mb.params))

    def test_simplicity_follows_width_cycle(self):
        ds = make_moons(n=300, noise=0.2, seed=2)
        train, hold = split_train_holdout(ds, 0.2, seed=2)
        pool = train_pool(train, hold, 5, seed=1, epochs=5)
        assert [m.simplicity for m in pool] == [1.0, 0.75, 0.5, 0.25, 0.0]

    def test_constant_labels_rejected(self):
        features = np.random.default_rng(0).random((50, 2))
        ds = Dataset("flat", features, np.zeros(50, dtype=np.int8))
        with pytest.raises(InputError) as err:
            train_model(ds, ds)
        assert err.value.code == "degenerate"


def _hand_linear(w, b, accuracy=0.5, simplicity=1.0) -> TrainedModel:
    return TrainedModel(
        kind="linear",
        hidden_width=0,
        params=(np.asarray(w, dtype=float), np.asarray([b], dtype=float)),
        accuracy=accuracy,
        simplicity=simplicity,
        seed=0,
    )


class TestCounterfactuals:
    def _toy(self):
        features = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        labels = np.array([0, 1, 0, 1], dtype=np.int8)
        return Dataset("toy", features, labels)

    def test_nearest_opposite_point(self):
        ds = self._toy()
        model = _hand_linear([1.0, 0.0], -0.5)  # fires on x0 > 0.5
        ce = nn_counterfactual(model, ds, np.array([0.1, 0.0]))
        assert np.array_equal(ce, [1.0, 0.0])

    def test_result_always_flips_and_differs(self):
        rng = np.random.default_rng(12)
        ds = Dataset("r", rng.random((40, 3)), (rng.random(40) > 0.5).astype(np.int8))
        model = _hand_linear([1.0, -2.0, 0.5], 0.1)
        for _ in range(20):
            x = rng.random(3)
            ce = nn_counterfactual(model, ds, x)
            assert model.predict_one(ce) != model.predict_one(x)
            assert not np.array_equal(ce, x)

    def test_matches_exhaustive_scan(self):
        rng = np.random.default_rng(13)
        ds = Dataset("r", rng.random((60, 2)), (rng.random(60) > 0.5).astype(np.int8))
        model = _hand_linear([2.0, -1.0], -0.3)
        preds = model.predict(ds.features)
        for metric in ("l1", "l2"):
            for _ in range(25):
                x = rng.random(2)
                target = 1 - model.predict_one(x)
                best, best_d = None, math.inf
                for row in range(ds.n):
                    if preds[row] != target or np.array_equal(ds.features[row], x):
                        continue
                    diff = ds.features[row] - x
                    d = np.abs(diff).sum() if metric == "l1" else math.sqrt((diff ** 2).sum())
                    if d < best_d - 1e-12:
                        best, best_d = row, d
                got = nn_counterfactual(model, ds, x, metric)
                assert np.array_equal(got, ds.features[best])

    def test_metric_switch_changes_the_minimizer(self):
        # three points: one close in l1, another close in l2
        features = np.array([[0.0, 0.0], [0.55, 0.55], [0.0, 0.8]])
        labels = np.array([0, 1, 1], dtype=np.int8)
        ds = Dataset("tri", features, labels)
        model = _hand_linear([0.0, 1.0], -0.5)  # fires on x1 > 0.5
        x = np.array([0.0, 0.0])
        # l1: |.55|+|.55| = 1.1 vs 0.8 -> third point; l2: 0.778 vs 0.8 -> second
        assert np.array_equal(nn_counterfactual(model, ds, x, "l1"), [0.0, 0.8])
        assert np.array_equal(nn_counterfactual(model, ds, x, "l2"), [0.55, 0.55])

    def test_tie_breaks_on_lowest_row_index(self):
        features = np.array([[0.4, 0.0], [0.0, 0.4], [0.0, 0.0]])
        labels = np.array([1, 1, 0], dtype=np.int8)
        ds = Dataset("tie", features, labels)
        model = _hand_linear([1.0, 1.0], -0.2)
        ce = nn_counterfactual(model, ds, np.array([0.0, 0.0]), "l2")
        assert np.array_equal(ce, features[0])

    def test_failure_when_no_opposite_point(self):
        features = np.array([[0.9, 0.9], [0.8, 0.8]])
        ds = Dataset("one-sided", features, np.array([1, 1], dtype=np.int8))
        model = _hand_linear([1.0, 1.0], -0.5)
        with pytest.raises(CounterfactualFailure):
            nn_counterfactual(model, ds, np.array([0.9, 0.9]))


class TestAssembleInstance:
    def test_diagonal_always_flips(self):
        ds = make_moons(n=400, noise=0.3, seed=5)
        train, hold = split_train_holdout(ds, 0.2, seed=5)
        pool = train_pool(train, hold, 4, seed=5, epochs=8)
        for idx in range(5):
            inst = assemble_instance(pool, train, hold.features[idx])
            for i in range(4):
                assert inst.pred_ce[i][i] != inst.pred_x[i]

    def test_two_hand_built_linear_models_match_hand_evaluation(self):
        features = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        labels = np.array([0, 1, 0, 1], dtype=np.int8)
        ds = Dataset("toy", features, labels)
        first = _hand_linear([1.0, 0.0], -0.5, accuracy=1.0, simplicity=1.0)
        second = _hand_linear([0.0, 1.0], -0.5, accuracy=0.5, simplicity=0.75)
        x = np.array([0.2, 0.2])
        inst = assemble_instance([first, second], ds, x)
        # first model: x left of the vertical boundary -> 0; ce = (1,0)
        # second model: x below the horizontal boundary -> 0; ce = (0,1)
        assert inst.pred_x == (0, 0)
        assert inst.pred_ce[0] == (1, 0)   # first model flips on (1,0) only
        assert inst.pred_ce[1] == (0, 1)   # second model flips on (0,1) only
        assert inst.model_meta["accuracy"] == (1.0, 0.5)
        assert inst.model_meta["simplicity"] == (1.0, 0.75)

    def test_assembled_instances_pass_validation(self):
        ds = make_moons(n=500, noise=0.35, seed=15)
        train, hold = split_train_holdout(ds, 0.2, seed=15)
        pool = train_pool(train, hold, 6, seed=15, epochs=8)
        from rae import dump_instance, load_instance

        for idx in range(4):
            inst = assemble_instance(pool, train, hold.features[idx])
            assert load_instance(dump_instance(inst)) == inst


@pytest.fixture(scope="module")
def tiny_result():
    cfg = ExperimentConfig(
        pool_size=8,
        set_sizes=(4, 6),
        repeats=2,
        seed=11,
        test_cap=25,
        epochs=10,
        synthetic_n=600,
        synthetic_noise=0.35,
    )
    return run_experiment(cfg)


class TestExperiment:
    def test_metric_invariants(self, tiny_result):
        rows = {(r.set_size, r.method): r for r in tiny_result.rows}
        for size in (4, 6):
            for method in ("Sa", "Sa-A", "Sa-S", "Sa-AS"):
                row = rows[(size, method)]
                assert row.means["c_val"] == 1.0
                assert row.means["fail"] == 0.0
            for method in ("Sn", "Sv"):
                assert rows[(size, method)].means["mv"] == 1.0
                assert rows[(size, method)].means["same"] == 0.0
            assert rows[(size, "Sn")].means["size_M"] == rows[(size, "Sn")].means["size_C"]
            assert rows[(size, "Sv")].means["size_C"] <= rows[(size, "Sv")].means["size_M"]
            for method in ("Sn", "Sv", "Sa", "Sa-A", "Sa-S", "Sa-AS"):
                row = rows[(size, method)]
                assert row.means["multiple"] >= row.means["same"]
                for key, value in row.means.items():
                    assert 0.0 <= value <= 1.0, (method, key, value)

    def test_single_model_rows_present(self, tiny_result):
        rows = {(r.set_size, r.method) for r in tiny_result.rows}
        assert (4, "models") in rows and (6, "models") in rows

    def test_outputs_written(self, tiny_result, tmp_path):
        out = tmp_path / "table.csv"
        write_metrics_csv(tiny_result, out)
        write_metrics_sidecar(tiny_result, out.with_suffix(".std.json"))
        figures = render_experiment_figures(tiny_result, tmp_path / "table")
        text = out.read_text().splitlines()
        assert text[0].startswith("set_size,method,acc")
        assert len(text) == 1 + len(tiny_result.rows)
        sidecar = json.loads(out.with_suffix(".std.json").read_text())
        assert {row["method"] for row in sidecar["rows"]} >= {"Sn", "Sv", "Sa"}
        assert all(p.exists() and p.stat().st_size > 0 for p in figures)

    def test_experiment_is_deterministic(self):
        cfg = ExperimentConfig(
            pool_size=5, set_sizes=(3,), repeats=1, seed=9, test_cap=10,
            epochs=6, synthetic_n=400,
        )
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        assert [(r.set_size, r.method, r.means, r.stds) for r in a.rows] == [
            (r.set_size, r.method, r.means, r.stds) for r in b.rows
        ]

    def test_results_independent_of_thread_count(self, monkeypatch):
        cfg = ExperimentConfig(
            pool_size=5, set_sizes=(3,), repeats=1, seed=9, test_cap=10,
            epochs=6, synthetic_n=400,
        )
        monkeypatch.setenv("RAE_THREADS", "1")
        a = run_experiment(cfg)
        monkeypatch.setenv("RAE_THREADS", "4")
        b = run_experiment(cfg)
        assert [(r.set_size, r.method, r.means) for r in a.rows] == [
            (r.set_size, r.method, r.means) for r in b.rows
        ]
        assert b.diagnostics["threads"] == 4

    def test_config_validation(self):
        with pytest.raises(InputError):
            ExperimentConfig(pool_size=4, set_sizes=(10,))
        with pytest.raises(InputError):
            ExperimentConfig(repeats=0)
        with pytest.raises(InputError):
            ExperimentConfig(metric="cosine")
        with pytest.raises(InputError):
            load_config('{"pool_size": 4, "bogus": 1}')

    def test_config_loads_from_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"pool_size": 6, "set_sizes": [3], "repeats": 1, "test_cap": 5}')
        cfg = load_config(path)
        assert cfg.pool_size == 6 and cfg.set_sizes == (3,)
