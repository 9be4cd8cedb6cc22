"""Command-line surface.

Subcommands:

* ``baf``: enumerate extensions of a framework in the text format;
* ``ensemble``: solve one instance with a chosen method;
* ``check-properties``: solve, then report the six property flags;
* ``experiment``: run the metric table (CSV + JSON sidecar + figures).

Exit codes: 0 success, 2 usage, 3 invalid input, 4 capacity, 1 internal.
All randomness flows from ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .baf import BRUTE_FORCE_MAX, Semantics, parse_baf_text
from .ensemble import (
    MATCH_NAIVE,
    METHODS,
    REPORT_ALL,
    SEEDED,
    TieBreak,
    ensemble,
)
from .errors import RAEError, UsageError
from .instance import load_instance
from .preferences import (
    identity_preference,
    lexicographic_preference,
    preference_from_ranks,
)
from .properties import check_all


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _semantics(name: str) -> Semantics:
    for member in Semantics:
        if member.value == name:
            return member
    raise UsageError(f"unknown semantics {name!r}")


def cmd_baf(args: argparse.Namespace) -> int:
    baf = parse_baf_text(Path(args.input).read_text())
    kind = _semantics(args.semantics)
    if kind in (Semantics.D_PREFERRED, Semantics.S_PREFERRED, Semantics.C_PREFERRED):
        extensions = baf.enumerate_preferred(kind)
    else:
        # Non-maximal notions enumerate the full subset lattice.
        from .errors import CapacityError

        if baf.n_args > BRUTE_FORCE_MAX:
            raise CapacityError(
                f"framework has {baf.n_args} arguments; subset enumeration caps at {BRUTE_FORCE_MAX}"
            )
        extensions = []
        for mask in range(1 << baf.n_args):
            members = frozenset(i for i in range(baf.n_args) if (mask >> i) & 1)
            if kind is Semantics.CONFLICT_FREE:
                keep = baf.is_conflict_free(members)
            elif kind is Semantics.SAFE:
                keep = baf.is_safe(members)
            else:
                keep = baf.is_admissible(members, kind)
            if keep:
                extensions.append(members)
        extensions.sort(key=lambda e: tuple(sorted(e)))
    _emit(
        {
            "n_args": baf.n_args,
            "semantics": args.semantics,
            "extensions": [sorted(e) for e in extensions],
        },
        args.out,
    )
    return 0


def _load_preference(args: argparse.Namespace, inst) -> object:
    if args.ranks:
        return preference_from_ranks([int(v) for v in args.ranks.split(",")])
    if args.prefs:
        try:
            groups = json.loads(args.prefs)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--prefs is not valid JSON: {exc}") from None
        if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
            raise UsageError("--prefs must be a JSON list of lists of property names")
        return lexicographic_preference(inst, groups)
    return identity_preference(inst.m)


def _tiebreak(args: argparse.Namespace, method: str) -> TieBreak:
    policy = args.tiebreak
    if policy is None:
        policy = MATCH_NAIVE if method == "argumentative" else SEEDED
    return TieBreak(policy, args.seed)


def cmd_ensemble(args: argparse.Namespace) -> int:
    with open(args.instance, "rb") as fh:
        inst = load_instance(fh)
    mp = _load_preference(args, inst)
    if args.all_solutions:
        tb = TieBreak(REPORT_ALL, args.seed)
        solutions = ensemble(inst, args.method, mp, tb)
        labels = {s.label for s in solutions}
        _emit(
            {
                "multiple": len(solutions) > 1,
                "same_label": len(solutions) > 1 and len(labels) == 1,
                "solutions": [s.as_dict() for s in solutions],
            },
            args.out,
        )
    else:
        sol = ensemble(inst, args.method, mp, _tiebreak(args, args.method))
        _emit(sol.as_dict(), args.out)
    return 0


def cmd_check_properties(args: argparse.Namespace) -> int:
    with open(args.instance, "rb") as fh:
        inst = load_instance(fh)
    mp = _load_preference(args, inst)
    sol = ensemble(inst, args.method, mp, _tiebreak(args, args.method))
    report = check_all(inst, sol)
    _emit(
        {"method": args.method, "solution": sol.as_dict(), "properties": report.as_dict()},
        args.out,
    )
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    from .lab import (
        load_config,
        render_experiment_figures,
        run_experiment,
        write_metrics_csv,
        write_metrics_sidecar,
    )
    from .lab.experiment import METRIC_KEYS

    cfg = load_config(Path(args.config))
    if args.seed is not None:
        from dataclasses import replace

        cfg = replace(cfg, seed=args.seed)
    result = run_experiment(cfg)
    if args.out:
        out = Path(args.out)
        write_metrics_csv(result, out)
        write_metrics_sidecar(result, out.with_suffix(".std.json"))
        if args.figures:
            render_experiment_figures(result, out.with_suffix(""))
        return 0
    if args.format == "json":
        doc = [
            {"set_size": r.set_size, "method": r.method, "means": r.means, "stds": r.stds}
            for r in result.rows
        ]
        _emit(doc, None)
        return 0
    lines = ["set_size,method," + ",".join(METRIC_KEYS)]
    for row in result.rows:
        cells = [str(row.set_size), row.method] + [
            "" if row.means.get(k) is None else f"{row.means[k]:.6f}"
            for k in METRIC_KEYS
        ]
        lines.append(",".join(cells))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rae",
        description="Recourse-aware ensembling under model multiplicity",
    )
    parser.add_argument("--version", action="version", version=f"rae {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_baf = sub.add_parser("baf", help="enumerate extensions of a framework")
    p_baf.add_argument("--input", required=True, help="framework in the text format")
    p_baf.add_argument(
        "--semantics",
        required=True,
        choices=[s.value for s in Semantics],
    )
    p_baf.add_argument("--out", default=None)
    p_baf.set_defaults(func=cmd_baf)

    common = dict(required=True, help="instance JSON file")
    for name, func in (("ensemble", cmd_ensemble), ("check-properties", cmd_check_properties)):
        p = sub.add_parser(name)
        p.add_argument("--instance", **common)
        p.add_argument("--method", required=True, choices=list(METHODS))
        p.add_argument("--prefs", default=None, help='e.g. \'[["accuracy"],["simplicity"]]\'')
        p.add_argument("--ranks", default=None, help="comma-separated rank vector")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        if name == "ensemble":
            p.add_argument("--tiebreak", choices=[SEEDED, MATCH_NAIVE], default=None)
            p.add_argument("--all-solutions", action="store_true")
        else:
            p.add_argument("--tiebreak", choices=[SEEDED, MATCH_NAIVE], default=None)
        p.set_defaults(func=func)

    p_exp = sub.add_parser("experiment", help="run the metric table")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("--out", default=None, help="CSV path; sidecar and figures sit next to it")
    p_exp.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_exp.add_argument("--format", choices=["csv", "json"], default="csv")
    p_exp.add_argument("--figures", dest="figures", action="store_true", default=True)
    p_exp.add_argument("--no-figures", dest="figures", action="store_false")
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except RAEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - internal faults
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
