"""Metric-trend figures rendered next to the experiment's CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiment import ExperimentResult

_PANELS = (
    ("validity", (("c_val", "counterfactual validity"), ("fail", "failure rate"))),
    ("size", (("size_M", "model fraction"), ("size_C", "counterfactual fraction"))),
    ("agreement", (("mv", "majority agreement"), ("acc", "ensemble accuracy"))),
)

_STYLE = {
    "Sn": dict(color="tab:gray", marker="o"),
    "Sv": dict(color="tab:brown", marker="s"),
    "Sa": dict(color="tab:blue", marker="^"),
    "Sa-A": dict(color="tab:orange", marker="v"),
    "Sa-S": dict(color="tab:green", marker="D"),
    "Sa-AS": dict(color="tab:red", marker="*"),
}


def render_experiment_figures(result: ExperimentResult, out_prefix: str | Path) -> list[Path]:
    """One PNG per panel, methods as lines over the configured set sizes."""
    out_prefix = Path(out_prefix)
    sizes = sorted({row.set_size for row in result.rows})
    methods = [m for m in result.config.methods]
    by_key = {(row.set_size, row.method): row for row in result.rows}
    written = []
    for name, series in _PANELS:
        fig, axes = plt.subplots(1, len(series), figsize=(4.2 * len(series), 3.2))
        for ax, (key, title) in zip(axes, series):
            for method in methods:
                ys = [by_key[(s, method)].means.get(key) for s in sizes]
                errs = [by_key[(s, method)].stds.get(key, 0.0) for s in sizes]
                ax.errorbar(
                    sizes, ys, yerr=errs, label=method, capsize=2,
                    **_STYLE.get(method, {}),
                )
            ax.set_xlabel("models per set")
            ax.set_title(title)
            ax.set_xticks(sizes)
            ax.set_ylim(-0.05, 1.05)
            ax.grid(alpha=0.3)
        axes[-1].legend(fontsize=8)
        fig.tight_layout()
        path = out_prefix.parent / f"{out_prefix.name}_{name}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
