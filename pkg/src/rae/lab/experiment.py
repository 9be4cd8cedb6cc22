"""Experiment protocol: sample model sets, ensemble every test input, tabulate.

For each configured set size, ``repeats`` random model sets are drawn from a
trained pool.  Every test input is assembled into a recourse instance, each
configured method solves it, and per-input outcomes aggregate to the metric
table: ensemble accuracy, mean simplicity, model/counterfactual set sizes as
fractions of the set size, counterfactual validity, failure rate, agreement
with the majority-vote label, and the multiple/same tie statistics.

Failure cases (a method returning no counterfactuals) are excluded from the
averaged metrics and reported in ``fail``.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..ensemble import (
    MATCH_NAIVE,
    SEEDED,
    TieBreak,
    argumentative_solutions,
    majority_labels,
    naive_ensemble,
    robust_ensemble,
    select_solution,
)
from ..errors import InputError
from ..instance import RAEInstance, Solution
from ..preferences import ModelPreference, identity_preference, lexicographic_preference
from .counterfactual import assemble_instance
from .data import load_csv_dataset, make_moons, make_tabular, split_train_holdout
from .models import train_pool

METHOD_NAMES = ("Sn", "Sv", "Sa", "Sa-A", "Sa-S", "Sa-AS")
METRIC_KEYS = ("acc", "simp", "size_M", "size_C", "c_val", "fail", "mv", "multiple", "same")

# Property preference of each argumentative variant.
_VARIANT_PREFS: dict[str, list[list[str]] | None] = {
    "Sa": None,
    "Sa-A": [["accuracy"]],
    "Sa-S": [["simplicity"]],
    "Sa-AS": [["accuracy", "simplicity"]],
}


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str | Mapping = "synthetic"
    pool_size: int = 50
    set_sizes: tuple[int, ...] = (10, 20, 30)
    repeats: int = 5
    seed: int = 0
    methods: tuple[str, ...] = METHOD_NAMES
    metric: str = "l2"
    test_cap: int = 200
    epochs: int = 30
    learning_rate: float = 0.5
    batch_size: int = 32
    subsample: float = 0.7
    synthetic_kind: str = "tabular"
    synthetic_n: int = 3000
    synthetic_d: int = 12
    synthetic_noise: float = 0.08

    def __post_init__(self):
        if self.repeats < 1:
            raise InputError("repeats must be at least 1", code="config")
        if any(s < 1 or s > self.pool_size for s in self.set_sizes):
            raise InputError("every set size must lie in 1..pool_size", code="config")
        if self.metric not in ("l1", "l2"):
            raise InputError(f"unknown distance metric {self.metric!r}", code="config")
        if self.test_cap < 1:
            raise InputError("test_cap must be positive", code="config")
        if self.synthetic_kind not in ("tabular", "moons"):
            raise InputError(f"unknown synthetic kind {self.synthetic_kind!r}", code="config")
        unknown = set(self.methods) - set(METHOD_NAMES)
        if unknown:
            raise InputError(
                f"unknown methods: {', '.join(sorted(unknown))}", code="config"
            )


def load_config(source: str | bytes | Path) -> ExperimentConfig:
    if isinstance(source, Path):
        data = source.read_bytes()
    elif isinstance(source, str) and not source.lstrip().startswith("{"):
        data = Path(source).read_bytes()
    else:
        data = source if isinstance(source, bytes) else source.encode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"config is not valid JSON: {exc}", code="schema") from None
    if not isinstance(doc, dict):
        raise InputError("config must be a JSON object", code="schema")
    known = {
        "dataset", "pool_size", "set_sizes", "repeats", "seed", "methods",
        "metric", "test_cap", "epochs", "learning_rate", "batch_size",
        "subsample", "synthetic_kind", "synthetic_n", "synthetic_d", "synthetic_noise",
    }
    unknown = set(doc) - known
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}", code="schema")
    if "set_sizes" in doc:
        doc["set_sizes"] = tuple(int(v) for v in doc["set_sizes"])
    if "methods" in doc:
        doc["methods"] = tuple(str(v) for v in doc["methods"])
    return ExperimentConfig(**doc)


@dataclass(frozen=True)
class MetricsRow:
    set_size: int
    method: str
    means: dict[str, float]
    stds: dict[str, float]


@dataclass
class ExperimentResult:
    rows: list[MetricsRow]
    config: ExperimentConfig
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class _InputOutcome:
    label: int
    model_ids: frozenset[int]
    failed: bool
    multiple: bool
    same_label: bool
    valid_fraction: float
    mean_simplicity: float
    size_models: int
    size_ces: int
    matches_naive: bool


def _input_seed(master: int, size: int, repeat: int, index: int) -> int:
    return (master * 1_000_003 + size * 10_007 + repeat * 101 + index) & 0x7FFFFFFF


def _variant_preference(name: str, inst: RAEInstance) -> ModelPreference:
    groups = _VARIANT_PREFS[name]
    if groups is None:
        return identity_preference(inst.m)
    return lexicographic_preference(inst, groups)


def _solve_input(
    inst: RAEInstance,
    methods: Sequence[str],
    seed: int,
) -> tuple[dict[str, _InputOutcome], float]:
    outcomes: dict[str, _InputOutcome] = {}
    naive = naive_ensemble(inst, TieBreak(SEEDED, seed))
    ties = len(majority_labels(inst)) > 1
    simplicity = inst.model_meta.get("simplicity", (0.0,) * inst.m)
    slowest_argumentative = 0.0
    for name in methods:
        if name in ("Sn", "Sv"):
            if name == "Sn":
                sol = Solution(
                    "augmented", naive.label, naive.model_ids, naive.model_ids, naive.tiebreak
                )
            else:
                sol = robust_ensemble(inst, TieBreak(SEEDED, seed))
            multiple = ties
            same = False  # tied top labels always disagree
        else:
            mp = _variant_preference(name, inst)
            started = time.perf_counter()
            candidates = argumentative_solutions(inst, mp)
            slowest_argumentative = max(slowest_argumentative, time.perf_counter() - started)
            sol = select_solution(candidates, inst, TieBreak(MATCH_NAIVE, seed))
            multiple = len(candidates) > 1
            same = multiple and len({c.label for c in candidates}) == 1
        pairs = [inst.validity(i, j) for i in sol.model_ids for j in sol.ce_ids]
        outcomes[name] = _InputOutcome(
            label=sol.label,
            model_ids=sol.model_ids,
            failed=not sol.ce_ids,
            multiple=multiple,
            same_label=same,
            valid_fraction=float(np.mean(pairs)) if pairs else 1.0,
            mean_simplicity=float(np.mean([simplicity[i] for i in sol.model_ids]))
            if sol.model_ids
            else 0.0,
            size_models=len(sol.model_ids),
            size_ces=len(sol.ce_ids),
            matches_naive=sol.label == naive.label,
        )
    return outcomes, slowest_argumentative


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    if isinstance(cfg.dataset, Mapping) or cfg.dataset == "synthetic":
        spec = cfg.dataset if isinstance(cfg.dataset, Mapping) else {}
        kind = str(spec.get("kind", cfg.synthetic_kind))
        n = int(spec.get("n", cfg.synthetic_n))
        noise = float(spec.get("noise", cfg.synthetic_noise))
        if kind == "moons":
            ds = make_moons(n=n, noise=noise, seed=cfg.seed)
        else:
            ds = make_tabular(
                n=n, d=int(spec.get("d", cfg.synthetic_d)), noise=noise, seed=cfg.seed
            )
    else:
        ds = load_csv_dataset(cfg.dataset)
    train, holdout = split_train_holdout(ds, 0.2, seed=cfg.seed)
    pool = train_pool(
        train,
        holdout,
        cfg.pool_size,
        seed=cfg.seed,
        epochs=cfg.epochs,
        learning_rate=cfg.learning_rate,
        batch_size=cfg.batch_size,
        subsample=cfg.subsample,
    )
    pool_train_preds = np.stack([model.predict(train.features) for model in pool])

    n_test = min(cfg.test_cap, holdout.n)
    test_X = holdout.features[:n_test]
    test_y = holdout.labels[:n_test]

    threads = max(1, int(os.environ.get("RAE_THREADS", "1")))
    sample_rng = np.random.default_rng(cfg.seed + 1)

    rows: list[MetricsRow] = []
    dominant = {"samples": 0, "unique_top_samples": 0, "checked_inputs": 0, "contained_inputs": 0}
    slowest: dict[int, float] = {}

    for size in cfg.set_sizes:
        per_repeat: dict[str, list[dict[str, float]]] = {m: [] for m in cfg.methods}
        single_acc: list[float] = []
        for repeat in range(cfg.repeats):
            chosen = sorted(sample_rng.choice(cfg.pool_size, size=size, replace=False).tolist())
            models = [pool[i] for i in chosen]
            train_preds = pool_train_preds[chosen]
            single_acc.append(float(np.mean([m.accuracy for m in models])))

            accs = np.array([m.accuracy for m in models])
            top = int(np.argmax(accs))
            unique_top = int((accs == accs.max()).sum()) == 1
            dominant["samples"] += 1
            if unique_top and "Sa-A" in cfg.methods:
                dominant["unique_top_samples"] += 1

            def work(index: int):
                inst = assemble_instance(
                    models, train, test_X[index], metric=cfg.metric, train_preds=train_preds
                )
                return _solve_input(inst, cfg.methods, _input_seed(cfg.seed, size, repeat, index))

            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pets:
                    solved = list(pets.map(work, range(n_test)))
            else:
                solved = [work(i) for i in range(n_test)]

            slowest[size] = max([slowest.get(size, 0.0)] + [t for _, t in solved])

            for name in cfg.methods:
                stats = _aggregate_repeat([outcome[name] for outcome, _ in solved], test_y, size)
                per_repeat[name].append(stats)
                if name == "Sa-A" and unique_top:
                    for outcome, _ in solved:
                        dominant["checked_inputs"] += 1
                        if top in outcome[name].model_ids:
                            dominant["contained_inputs"] += 1

        rows.append(
            MetricsRow(
                set_size=size,
                method="models",
                means={"acc": float(np.mean(single_acc))},
                stds={"acc": float(np.std(single_acc))},
            )
        )
        for name in cfg.methods:
            stacked = {
                key: np.array([stats[key] for stats in per_repeat[name]], dtype=float)
                for key in METRIC_KEYS
            }
            rows.append(
                MetricsRow(
                    set_size=size,
                    method=name,
                    means={k: _nan_safe(np.nanmean(v)) for k, v in stacked.items()},
                    stds={k: _nan_safe(np.nanstd(v)) for k, v in stacked.items()},
                )
            )

    return ExperimentResult(
        rows=rows,
        config=cfg,
        diagnostics={
            "dominant_model": dominant,
            "slowest_argumentative_seconds": {str(k): v for k, v in sorted(slowest.items())},
            "threads": threads,
        },
    )


def _nan_safe(v: float) -> float:
    return 0.0 if np.isnan(v) else float(v)


def _aggregate_repeat(
    outcomes: list[_InputOutcome],
    test_y: np.ndarray,
    size: int,
) -> dict[str, float]:
    ok = [o for o in outcomes if not o.failed]
    stats: dict[str, float] = {}
    stats["fail"] = 1.0 - len(ok) / len(outcomes)
    stats["multiple"] = float(np.mean([o.multiple for o in outcomes]))
    stats["same"] = float(np.mean([o.same_label for o in outcomes]))
    if not ok:
        for key in ("acc", "simp", "size_M", "size_C", "c_val", "mv"):
            stats[key] = float("nan")
        return stats
    kept = [(o, int(y)) for o, y in zip(outcomes, test_y) if not o.failed]
    stats["acc"] = float(np.mean([o.label == y for o, y in kept]))
    stats["simp"] = float(np.mean([o.mean_simplicity for o, _ in kept]))
    stats["size_M"] = float(np.mean([o.size_models / size for o, _ in kept]))
    stats["size_C"] = float(np.mean([o.size_ces / size for o, _ in kept]))
    stats["c_val"] = float(np.mean([o.valid_fraction for o, _ in kept]))
    stats["mv"] = float(np.mean([o.matches_naive for o, _ in kept]))
    return stats


def write_metrics_csv(result: ExperimentResult, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["set_size", "method", *METRIC_KEYS])
        for row in result.rows:
            writer.writerow(
                [row.set_size, row.method]
                + [_fmt(row.means.get(k)) for k in METRIC_KEYS]
            )


def write_metrics_sidecar(result: ExperimentResult, path: str | Path) -> None:
    doc = {
        "rows": [
            {
                "set_size": row.set_size,
                "method": row.method,
                "means": {k: row.means[k] for k in sorted(row.means)},
                "stds": {k: row.stds[k] for k in sorted(row.stds)},
            }
            for row in result.rows
        ],
        "diagnostics": result.diagnostics,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.6f}"
