"""Command-line front end: config resolution, experiment dispatch, reports."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from .config import (
    SCHEMA,
    ConfigError,
    RunConfig,
    digest,
    load_config_file,
    parse_value,
    resolve,
)
from .contfrac import cf_expand, convergent, pi_estimate
from .experiments import (
    AblationMode,
    CostCapError,
    SweepSpec,
    ablation_distribution,
    fixed_budget_success,
    radius_budget_grid,
    radius_first_iteration_sweep,
    run_campaign_batch,
    summarize_success,
)
from .histogram import Histogram, run_campaign
from .measurement import DegenerateConfigError, simulate_trial
from .reports import provenance_payload, write_csv, write_json
from .stochastics import ReciprocalStudyConfig, reciprocal_peak_curve, rng_new
from .svgplot import render_histogram_svg

ENV_OUT_DIR = "SIXRADII_OUT"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_COST_CAP = 3


def _flag_for(key: str) -> str:
    if key == "out_dir":
        return "--out"
    return "--" + key.replace("_", "-")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="flat key=value config file")
    common.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes for campaign batches (output is independent of this)",
    )
    for field in SCHEMA:
        common.add_argument(
            _flag_for(field.name),
            dest=f"cfg_{field.name}",
            metavar="VALUE",
            help=field.help,
        )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sixradii",
        description="Simulate the wire measurement of a circle against six radii.",
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trial", parents=[common], help="run one measurement trial")
    p.add_argument("--zero-errors", action="store_true",
                   help="disable both error classes for this trial")

    p = sub.add_parser("campaign", parents=[common],
                       help="measure until the stopping rule selects a value")
    p.add_argument("--max-measurements", type=int, default=10_000)

    p = sub.add_parser("success", parents=[common],
                       help="success statistics over repeated campaigns")
    p.add_argument("--campaigns", type=int, default=500)
    p.add_argument("--max-measurements", type=int, default=10_000)

    p = sub.add_parser("budget", parents=[common],
                       help="success fraction at a fixed measurement budget")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--campaigns", type=int, default=1000)

    p = sub.add_parser("ablate", parents=[common],
                       help="raw outcome distribution under an error ablation")
    p.add_argument("--mode", default="all",
                   choices=[m.value for m in AblationMode])
    p.add_argument("--trials", type=int, default=10_000)

    p = sub.add_parser("sweep-radius", parents=[common],
                       help="first-iteration consistency across radii")
    p.add_argument("--radii", default="100,150,200,250,300,350,400,450,500,550,600")
    p.add_argument("--trials-per-radius", type=int, default=2000)

    p = sub.add_parser("grid", parents=[common],
                       help="success fraction over a radius x budget grid")
    p.add_argument("--radii", default="200,300,450,600,900")
    p.add_argument("--budgets", default="25,50,100,200,325,500")
    p.add_argument("--campaigns-per-cell", type=int, default=100)
    p.add_argument("--cost-cap", type=int, default=100_000)

    p = sub.add_parser("cf", parents=[common],
                       help="continued-fraction expansion and convergent")
    p.add_argument("--value", required=True,
                   help="pi, pi/3, a rational like 111/106, or a decimal")
    p.add_argument("--terms", type=int, default=3)
    p.add_argument("--tolerance", type=float, default=0.0)

    p = sub.add_parser("recip", parents=[common],
                       help="peak/mean of a ratio of normals across denominator stdevs")
    p.add_argument("--num-mean", type=float, default=5.0)
    p.add_argument("--num-stdev", type=float, default=0.2)
    p.add_argument("--den-mean", type=float, default=1.0)
    p.add_argument("--stdevs", default="0,0.05,0.1,0.15,0.2")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--bin-width", type=float, default=0.02)

    return parser


def _flag_values(args: argparse.Namespace) -> dict:
    values = {}
    for field in SCHEMA:
        raw = getattr(args, f"cfg_{field.name}", None)
        if raw is not None:
            values[field.name] = parse_value(field, raw)
    if getattr(args, "zero_errors", False):
        values["fixed_errors_enabled"] = False
        values["random_errors_enabled"] = False
    return values


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if args.config else {}
    return resolve(file_values, _flag_values(args), os.environ.get(ENV_OUT_DIR))


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"invalid value for {flag}: {text!r}") from None
    if not values:
        raise ConfigError(f"{flag} must list at least one value")
    return values


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"invalid value for {flag}: {text!r}") from None
    if not values:
        raise ConfigError(f"{flag} must list at least one value")
    return values


def _histogram_rows(hist: Histogram) -> list[tuple]:
    rows: list[tuple] = [(bin_value, hist.count(bin_value))
                         for bin_value in range(hist.lo, hist.hi + 1)]
    rows.append(("underflow", hist.underflow))
    rows.append(("overflow", hist.overflow))
    return rows


def cmd_trial(args: argparse.Namespace, cfg: RunConfig) -> int:
    trial = simulate_trial(rng_new(cfg.seed), cfg.trial_config())
    print(json.dumps(asdict(trial), sort_keys=True))
    return EXIT_OK


def cmd_campaign(args: argparse.Namespace, cfg: RunConfig) -> int:
    result = run_campaign(
        rng_new(cfg.seed),
        cfg.trial_config(),
        cfg.stopping_criteria(),
        args.max_measurements,
        config_digest=digest(cfg),
    )
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(out / "campaign.csv", ("bin", "count"), _histogram_rows(result.histogram))
    if "json" in cfg.formats:
        payload = provenance_payload(
            "campaign", cfg,
            {"max_measurements": args.max_measurements},
            {
                "selected": result.selected,
                "measurements": result.measurements,
                "discarded": result.discarded,
                "stopped": result.stopped,
                "histogram": result.histogram.as_dict(),
                "stream_key": list(result.stream_key),
            },
        )
        write_json(out / "campaign.json", payload)
    if "svg" in cfg.formats and result.histogram.total_recorded > 0:
        render_histogram_svg(result.histogram, out / "campaign.svg")
    selected = result.selected if result.selected is not None else "none"
    print(f"selected={selected} measurements={result.measurements} "
          f"discarded={result.discarded}")
    return EXIT_OK


def cmd_success(args: argparse.Namespace, cfg: RunConfig) -> int:
    outcomes = run_campaign_batch(
        cfg.trial_config(), cfg.stopping_criteria(), args.campaigns, cfg.seed,
        args.max_measurements, workers=args.threads,
    )
    stats = summarize_success(outcomes)
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(
            out / "success.csv",
            ("success_fraction", "mean_measurements", "no_decision_fraction",
             "ci_half_width", "n_campaigns"),
            [(stats.success_fraction, stats.mean_measurements,
              stats.no_decision_fraction, stats.ci_half_width, stats.n_campaigns)],
        )
        write_csv(
            out / "success_campaigns.csv",
            ("campaign", "selected", "measurements", "discarded"),
            [(i, o.selected, o.measurements, o.discarded) for i, o in enumerate(outcomes)],
        )
    if "json" in cfg.formats:
        payload = provenance_payload(
            "success", cfg,
            {"campaigns": args.campaigns, "max_measurements": args.max_measurements},
            {
                "success_fraction": stats.success_fraction,
                "mean_measurements": stats.mean_measurements,
                "no_decision_fraction": stats.no_decision_fraction,
                "ci_half_width": stats.ci_half_width,
            },
        )
        write_json(out / "success.json", payload)
    print(f"success={stats.success_fraction:.3f} "
          f"mean_measurements={stats.mean_measurements:.2f} "
          f"no_decision={stats.no_decision_fraction:.3f}")
    return EXIT_OK


def cmd_budget(args: argparse.Namespace, cfg: RunConfig) -> int:
    stats = fixed_budget_success(
        cfg.trial_config(), args.budget, args.campaigns, cfg.seed, workers=args.threads
    )
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(
            out / "budget.csv",
            ("budget", "success_fraction", "ci_half_width", "n_campaigns"),
            [(args.budget, stats.success_fraction, stats.ci_half_width, stats.n_campaigns)],
        )
    if "json" in cfg.formats:
        payload = provenance_payload(
            "budget", cfg,
            {"budget": args.budget, "campaigns": args.campaigns},
            {"success_fraction": stats.success_fraction, "ci_half_width": stats.ci_half_width},
        )
        write_json(out / "budget.json", payload)
    print(f"budget={args.budget} success={stats.success_fraction:.3f}")
    return EXIT_OK


def cmd_ablate(args: argparse.Namespace, cfg: RunConfig) -> int:
    mode = AblationMode.from_name(args.mode)
    distribution = ablation_distribution(cfg.trial_config(), mode, args.trials, cfg.seed)
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(
            out / "ablate.csv",
            ("second_quotient", "fraction"),
            sorted(distribution.items()),
        )
    if "json" in cfg.formats:
        payload = provenance_payload(
            "ablate", cfg,
            {"mode": mode.value, "trials": args.trials},
            {"distribution": {str(k): v for k, v in distribution.items()}},
        )
        write_json(out / "ablate.json", payload)
    rendered = ", ".join(f"{k}: {v:.3f}" for k, v in sorted(distribution.items()))
    print(f"mode={mode.value} distribution={{{rendered}}}")
    return EXIT_OK


def cmd_sweep_radius(args: argparse.Namespace, cfg: RunConfig) -> int:
    radii = _parse_float_list(args.radii, "--radii")
    points = radius_first_iteration_sweep(
        radii, args.trials_per_radius, cfg.trial_config(), cfg.seed, workers=args.threads
    )
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(out / "sweep_radius.csv", ("radius", "fraction_first_21"), points)
    if "json" in cfg.formats:
        payload = provenance_payload(
            "sweep-radius", cfg,
            {"radii": list(radii), "trials_per_radius": args.trials_per_radius},
            {"fractions": {repr(p.radius): p.fraction_first_21 for p in points}},
        )
        write_json(out / "sweep_radius.json", payload)
    fractions = [p.fraction_first_21 for p in points]
    print(f"radii={len(points)} min_fraction={min(fractions):.3f} "
          f"max_fraction={max(fractions):.3f}")
    return EXIT_OK


def cmd_grid(args: argparse.Namespace, cfg: RunConfig) -> int:
    spec = SweepSpec(
        radii=_parse_float_list(args.radii, "--radii"),
        budgets=_parse_int_list(args.budgets, "--budgets"),
        campaigns_per_cell=args.campaigns_per_cell,
        base_seed=cfg.seed,
        cost_cap=args.cost_cap,
    )
    cells = radius_budget_grid(spec, cfg.trial_config(), workers=args.threads)
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(out / "grid.csv", ("radius", "budget", "success_fraction"), cells)
    if "json" in cfg.formats:
        payload = provenance_payload(
            "grid", cfg,
            {
                "radii": list(spec.radii),
                "budgets": list(spec.budgets),
                "campaigns_per_cell": spec.campaigns_per_cell,
                "cost_cap": spec.cost_cap,
            },
            {"cells": [[c.radius, c.budget, c.success_fraction] for c in cells]},
        )
        write_json(out / "grid.json", payload)
    budget_range = _effect_range(cells, by_budget=True)
    radius_range = _effect_range(cells, by_budget=False)
    print(f"cells={len(cells)} budget_effect={budget_range:.3f} "
          f"radius_effect={radius_range:.3f}")
    return EXIT_OK


def _effect_range(cells, by_budget: bool) -> float:
    groups: dict = {}
    for cell in cells:
        key = cell.radius if by_budget else cell.budget
        groups.setdefault(key, []).append(cell.success_fraction)
    return max(max(vals) - min(vals) for vals in groups.values())


def _parse_cf_value(text: str) -> float | Fraction:
    lowered = text.strip().lower()
    if lowered == "pi":
        return math.pi
    if lowered == "pi/3":
        return math.pi / 3.0
    if "/" in lowered:
        num, _, den = lowered.partition("/")
        try:
            return Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"invalid value for --value: {text!r}") from None
    try:
        return float(lowered)
    except ValueError:
        raise ConfigError(f"invalid value for --value: {text!r}") from None


def cmd_cf(args: argparse.Namespace, cfg: RunConfig) -> int:
    value = _parse_cf_value(args.value)
    expansion = cf_expand(value, args.terms, args.tolerance)
    ratio = convergent(expansion.quotients)
    pi_value = pi_estimate(ratio)
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(
            out / "cf.csv",
            ("term_index", "quotient"),
            list(enumerate(expansion.quotients)),
        )
    if "json" in cfg.formats:
        payload = provenance_payload(
            "cf", cfg,
            {"value": args.value, "terms": args.terms, "tolerance": args.tolerance},
            {
                "quotients": list(expansion.quotients),
                "exact": expansion.exact,
                "convergent": f"{ratio.numerator}/{ratio.denominator}",
                "pi_estimate": pi_value,
            },
        )
        write_json(out / "cf.json", payload)
    quotients = ",".join(str(q) for q in expansion.quotients)
    print(f"quotients=[{quotients}] convergent={ratio.numerator}/{ratio.denominator} "
          f"pi={pi_value:.7f}")
    return EXIT_OK


def cmd_recip(args: argparse.Namespace, cfg: RunConfig) -> int:
    study = ReciprocalStudyConfig(
        numerator_mean=args.num_mean,
        numerator_stdev=args.num_stdev,
        denominator_mean=args.den_mean,
        denominator_stdevs=_parse_float_list(args.stdevs, "--stdevs"),
        samples_per_point=args.samples,
        bin_width=args.bin_width,
    )
    points = reciprocal_peak_curve(study, rng_new(cfg.seed))
    out = _out_dir(cfg)
    if "csv" in cfg.formats:
        write_csv(
            out / "recip.csv",
            ("denominator_stdev", "peak_location", "central_mean"),
            points,
        )
    if "json" in cfg.formats:
        payload = provenance_payload(
            "recip", cfg,
            {
                "numerator_mean": study.numerator_mean,
                "numerator_stdev": study.numerator_stdev,
                "denominator_mean": study.denominator_mean,
                "denominator_stdevs": list(study.denominator_stdevs),
                "samples_per_point": study.samples_per_point,
                "bin_width": study.bin_width,
            },
            {"points": [[p.denominator_stdev, p.peak_location, p.central_mean]
                        for p in points]},
        )
        write_json(out / "recip.json", payload)
    print(f"points={len(points)} first_peak={points[0].peak_location:.4f} "
          f"last_peak={points[-1].peak_location:.4f}")
    return EXIT_OK


_COMMANDS = {
    "trial": cmd_trial,
    "campaign": cmd_campaign,
    "success": cmd_success,
    "budget": cmd_budget,
    "ablate": cmd_ablate,
    "sweep-radius": cmd_sweep_radius,
    "grid": cmd_grid,
    "cf": cmd_cf,
    "recip": cmd_recip,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return _COMMANDS[args.command](args, cfg)
    except CostCapError as exc:
        print(f"cost cap exceeded: {exc}", file=sys.stderr)
        return EXIT_COST_CAP
    except (ConfigError, DegenerateConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
