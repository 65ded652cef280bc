"""Command-line interface.

Commands: generate, clean, features, train, evaluate, rank,
export-dashboard, run. Exit codes: 0 ok, 2 config error, 3 data error,
4 numeric failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .config import RunConfig, load_config, parse_months_range, validate_config
from .domain import format_month, parse_month
from .errors import OmniRankError
from .pipeline import (
    export_dashboard,
    run_pipeline,
    score_with_model,
    stage_clean,
    stage_evaluate,
    stage_features,
    stage_train,
    write_rankings,
)
from .synth import generate_universe, write_universe


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--seed", type=int, help="override the run seed")
    parser.add_argument("--out", help="override the output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omnirank", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    _add_common(p)
    p.add_argument("--n-platforms", type=int)
    p.add_argument("--months", type=int, help="horizon length in months")
    p.add_argument("--signal", type=float, help="planted signal strength")

    p = sub.add_parser("clean", help="dedupe news, fill nulls, UGC-filter comments")
    _add_common(p)
    p.add_argument("--in", dest="in_dir", help="raw dataset directory")
    p.add_argument("--ugc-threshold", type=float)
    p.add_argument("--dedup-jaccard", type=float)

    p = sub.add_parser("features", help="build feature bundles at a cutoff")
    _add_common(p)
    p.add_argument("--in", dest="in_dir", help="cleaned dataset directory")
    p.add_argument("--cutoff", required=True, help="cutoff month, YYYY-MM")
    p.add_argument("--bundles-out", help="output bundles path")

    p = sub.add_parser("train", help="train the scoring network on bundles")
    _add_common(p)
    p.add_argument("--bundles", help="bundles.jsonl path")
    p.add_argument("--model-out", help="model output directory")

    p = sub.add_parser("evaluate", help="rolling monthly evaluation")
    _add_common(p)
    p.add_argument("--data", help="cleaned dataset directory")
    p.add_argument("--months", help='e.g. "2015-11:2016-04"')
    p.add_argument("--reports-out", help="reports.json path")

    p = sub.add_parser("rank", help="score bundles with a trained model and rank")
    _add_common(p)
    p.add_argument("--model", required=True, help="model checkpoint directory")
    p.add_argument("--bundles", required=True, help="bundles.jsonl path")
    p.add_argument("--rankings-out", help="rankings.json path")

    p = sub.add_parser("export-dashboard", help="emit the static dashboard bundle")
    _add_common(p)
    p.add_argument("--artifacts", help="pipeline output directory")
    p.add_argument("--limit", type=int, help="platform count cap (default 100)")

    p = sub.add_parser("run", help="full pipeline: clean to rankings")
    _add_common(p)
    return parser


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(getattr(args, "config", None))
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(
            config,
            seed=args.seed,
            feature=dataclasses.replace(config.feature, seed=args.seed),
            network=dataclasses.replace(config.network, seed=args.seed),
            train=dataclasses.replace(config.train, seed=args.seed),
        )
    if getattr(args, "out", None):
        config = dataclasses.replace(config, out_dir=args.out)
    if getattr(args, "in_dir", None):
        config = dataclasses.replace(config, data_dir=args.in_dir)
    if getattr(args, "data", None):
        config = dataclasses.replace(config, data_dir=args.data)
    if getattr(args, "ugc_threshold", None) is not None:
        config = dataclasses.replace(config, ugc_threshold=args.ugc_threshold)
    if getattr(args, "dedup_jaccard", None) is not None:
        config = dataclasses.replace(config, dedup_jaccard=args.dedup_jaccard)
    validate_config(config)
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _dispatch(args)
    except OmniRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "generate":
        from .config import load_generator_config

        gen = load_generator_config(getattr(args, "config", None))
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.n_platforms is not None:
            overrides["n_platforms"] = args.n_platforms
        if args.months is not None:
            overrides["horizon_months"] = args.months
        if args.signal is not None:
            overrides["signal_strength"] = args.signal
        gen = dataclasses.replace(gen, **overrides)
        records, truth = generate_universe(gen)
        out_dir = args.out or "data"
        write_universe(out_dir, records, truth)
        print(f"wrote {len(records)} platforms to {out_dir}")
        return 0

    config = _load_run_config(args)

    if args.command == "clean":
        report = stage_clean(config)
        print(
            "clean: kept {docs_kept} docs, removed {duplicates_removed} duplicates, "
            "{ugc_removed} low-quality comments, filled {nulls_filled} nulls".format(**report)
        )
        return 0
    if args.command == "features":
        cutoff = parse_month(args.cutoff)
        out_path = stage_features(config, cutoff=cutoff, out_path=args.bundles_out)
        print(f"bundles written to {out_path}")
        return 0
    if args.command == "train":
        model_dir = stage_train(config, bundles_path=args.bundles, out_dir=args.model_out)
        print(f"model saved to {model_dir}")
        return 0
    if args.command == "evaluate":
        months = parse_months_range(args.months) if args.months else None
        reports = stage_evaluate(config, months=months)
        for r in reports:
            base = f" baseline_auc={r.baseline_auc:.3f}" if r.baseline_auc is not None else ""
            print(
                f"{format_month(r.cutoff_month)}: accuracy={r.accuracy:.3f} auc={r.auc:.3f}{base} "
                f"n={r.n_platforms}"
            )
        return 0
    if args.command == "rank":
        months = score_with_model(args.model, args.bundles)
        out_path = args.rankings_out or "rankings.json"
        write_rankings(out_path, months)
        print(f"rankings written to {out_path}")
        return 0
    if args.command == "export-dashboard":
        out_dir = export_dashboard(config, artifacts_dir=args.artifacts, out_dir=args.out, limit=args.limit)
        print(f"dashboard bundle written to {out_dir}")
        return 0
    if args.command == "run":
        result = run_pipeline(config)
        months = ", ".join(format_month(m) for m in result["months"])
        print(f"pipeline complete for {months}; artifacts in {result['out_dir']}")
        return 0
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
