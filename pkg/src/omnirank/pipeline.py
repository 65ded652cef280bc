"""Pipeline stages (clean -> features -> train -> evaluate -> rank) and the
dashboard bundle export. Each stage reads and writes plain files so any
stage can run standalone from the CLI; failures carry a stage tag."""
from __future__ import annotations

import json
import logging
import os

from . import dataio
from .cleaning import clean_dataset
from .config import RunConfig
from .domain import Label, PlatformRecord, RiskScore, format_month, label_at
from .errors import DataError, OmniRankError
from .evaluation import (
    EvalConfig,
    EvaluationReport,
    dataset_horizon,
    rank_platforms,
    rolling_evaluate,
)
from .features import build_bundles, bundle_from_dict, bundle_to_dict
from .kg import GraphFeatureIndex, kg_build
from .nn.network import (
    OmniRankNet,
    dims_from_bundles,
    load_checkpoint,
    predict_scores,
    save_checkpoint,
    train,
)
from .sentiment import load_lexicon

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class StageError(OmniRankError):
    pass


def _stage(name: str):
    def wrap(fn):
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except OmniRankError as exc:
                exc.args = (f"stage:{name}: {exc}",)
                raise
            except OSError as exc:
                raise DataError(f"stage:{name}: {exc}") from exc

        inner.__name__ = fn.__name__
        return inner

    return wrap


def load_dataset(data_dir: str) -> list[PlatformRecord]:
    platforms = dataio.read_platforms(os.path.join(data_dir, "platforms.jsonl"))
    news = dataio.read_docs(os.path.join(data_dir, "news.jsonl"), expected_kind="news")
    comments = dataio.read_docs(os.path.join(data_dir, "comments.jsonl"), expected_kind="comment")
    return dataio.attach_documents(platforms, news, comments)


@_stage("clean")
def stage_clean(config: RunConfig) -> dict:
    records = load_dataset(config.data_dir)
    lexicon = load_lexicon(config.resolved_lexicon_path())
    cleaned, report = clean_dataset(
        records, lexicon, ugc_threshold=config.ugc_threshold, dedup_jaccard=config.dedup_jaccard
    )
    clean_dir = os.path.join(config.out_dir, "clean")
    os.makedirs(clean_dir, exist_ok=True)
    dataio.write_platforms(os.path.join(clean_dir, "platforms.jsonl"), cleaned)
    dataio.write_docs(
        os.path.join(clean_dir, "news.jsonl"), (d for r in cleaned for d in r.news_docs)
    )
    dataio.write_docs(
        os.path.join(clean_dir, "comments.jsonl"), (d for r in cleaned for d in r.comment_docs)
    )
    payload = {"schema_version": SCHEMA_VERSION, **report.to_dict()}
    with open(os.path.join(clean_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
    log.info("clean: %s", payload)
    return payload


@_stage("features")
def stage_features(config: RunConfig, cutoff: int, in_dir: str | None = None, out_path: str | None = None) -> str:
    data_dir = in_dir or os.path.join(config.out_dir, "clean")
    records = load_dataset(data_dir)
    lexicon = load_lexicon(config.resolved_lexicon_path())
    bundles = build_bundles(records, cutoff, config.feature, lexicon)
    out_path = out_path or os.path.join(config.out_dir, "bundles.jsonl")
    dataio.write_jsonl(out_path, (bundle_to_dict(b) for b in bundles))
    log.info("features: %d bundles at %s -> %s", len(bundles), format_month(cutoff), out_path)
    return out_path


@_stage("train")
def stage_train(config: RunConfig, bundles_path: str | None = None, out_dir: str | None = None) -> str:
    bundles_path = bundles_path or os.path.join(config.out_dir, "bundles.jsonl")
    bundles = [bundle_from_dict(row) for row in dataio.read_jsonl(bundles_path)]
    if not bundles:
        raise DataError(f"no bundles in {bundles_path}")
    model = OmniRankNet(dims_from_bundles(bundles), config.network)
    history = train(model, bundles, config.train)
    out_dir = out_dir or os.path.join(config.out_dir, "model")
    save_checkpoint(out_dir, model)
    with open(os.path.join(out_dir, "history.json"), "w", encoding="utf-8") as fh:
        json.dump(
            {
                "schema_version": SCHEMA_VERSION,
                "train_loss": history.train_loss,
                "val_loss": history.val_loss,
                "stopped_epoch": history.stopped_epoch,
            },
            fh,
            sort_keys=True,
        )
    log.info("train: %d bundles, final loss %.4f", len(bundles), history.train_loss[-1] if history.train_loss else float("nan"))
    return out_dir


@_stage("evaluate")
def stage_evaluate(
    config: RunConfig,
    months: tuple[int, ...] | None = None,
    in_dir: str | None = None,
    out_path: str | None = None,
) -> list[EvaluationReport]:
    data_dir = in_dir or os.path.join(config.out_dir, "clean")
    records = load_dataset(data_dir)
    lexicon = load_lexicon(config.resolved_lexicon_path())
    horizon = dataset_horizon(records)
    months = months or config.eval_months or (horizon - 1,)
    eval_config = EvalConfig(
        folds=config.folds,
        normal_fraction=config.normal_fraction,
        feature=config.feature,
        network=config.network,
        train=config.train,
        seed=config.seed,
    )
    reports = rolling_evaluate(records, months, eval_config, lexicon, horizon=horizon)
    out_path = out_path or os.path.join(config.out_dir, "reports.json")
    write_reports(out_path, reports)
    return reports


def write_reports(path: str, reports: list[EvaluationReport]) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "reports": [
            {**r.to_dict(), "month_label": format_month(r.cutoff_month)} for r in reports
        ],
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)


def read_reports(path: str) -> dict:
    if not os.path.exists(path):
        raise DataError(f"missing reports file: {path}")
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise DataError(f"unsupported reports schema: {data.get('schema_version')}")
    return data


@_stage("rank")
def stage_rank(
    config: RunConfig,
    reports: list[EvaluationReport] | None = None,
    out_path: str | None = None,
) -> str:
    """Rankings per evaluated month, from the out-of-fold scores."""
    if reports is None:
        data = read_reports(os.path.join(config.out_dir, "reports.json"))
        months = {
            int(r["cutoff_month"]): [
                RiskScore(e["platform_id"], int(r["cutoff_month"]), float(e["score"]))
                for e in r["scores"]
            ]
            for r in data["reports"]
        }
    else:
        months = {r.cutoff_month: list(r.scores) for r in reports}
    out_path = out_path or os.path.join(config.out_dir, "rankings.json")
    write_rankings(out_path, months)
    return out_path


def write_rankings(path: str, months: dict[int, list[RiskScore]], limit: int | None = None) -> None:
    payload: dict = {"schema_version": SCHEMA_VERSION, "months": {}}
    for month, scores in sorted(months.items()):
        ranked = rank_platforms(scores)
        entries = [
            {"platform_id": s.platform_id, "score": s.score, "rank": i + 1}
            for i, s in enumerate(ranked)
        ]
        if limit is not None:
            entries = entries[:limit]
        payload["months"][str(month)] = {"label": format_month(month), "entries": entries}
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)


def score_with_model(model_dir: str, bundles_path: str) -> dict[int, list[RiskScore]]:
    model = load_checkpoint(model_dir)
    bundles = [bundle_from_dict(row) for row in dataio.read_jsonl(bundles_path)]
    if not bundles:
        raise DataError(f"no bundles in {bundles_path}")
    scores = predict_scores(model, bundles)
    months: dict[int, list[RiskScore]] = {}
    for s in scores:
        months.setdefault(s.cutoff_month, []).append(s)
    return months


def run_pipeline(config: RunConfig) -> dict:
    """clean -> features -> train -> evaluate -> rank, in order."""
    stage_clean(config)
    records = load_dataset(os.path.join(config.out_dir, "clean"))
    horizon = dataset_horizon(records)
    months = config.eval_months or (horizon - 1,)
    final_cutoff = max(months)
    stage_features(config, cutoff=final_cutoff)
    stage_train(config)
    reports = stage_evaluate(config, months=months)
    stage_rank(config, reports=reports)
    return {
        "months": list(months),
        "reports": [r.to_dict() for r in reports],
        "out_dir": config.out_dir,
    }


# --- dashboard bundle -------------------------------------------------------

DASHBOARD_FILES = ("rankings.json", "platforms.json", "series.json", "reports.json", "related.json")


@_stage("export-dashboard")
def export_dashboard(config: RunConfig, artifacts_dir: str | None = None, out_dir: str | None = None,
                     limit: int | None = None) -> str:
    """Static JSON bundle for the browser app, restricted to the top-ranked
    platforms of the latest evaluated month."""
    artifacts_dir = artifacts_dir or config.out_dir
    out_dir = out_dir or os.path.join(artifacts_dir, "dashboard")
    limit = config.dashboard_limit if limit is None else limit
    reports_data = read_reports(os.path.join(artifacts_dir, "reports.json"))
    if not reports_data["reports"]:
        raise DataError("no evaluation reports to export")
    records = load_dataset(os.path.join(artifacts_dir, "clean"))
    by_id = {r.id: r for r in records}

    latest = max(reports_data["reports"], key=lambda r: int(r["cutoff_month"]))
    latest_month = int(latest["cutoff_month"])
    ranked = [e["platform_id"] for e in latest["scores"]]
    if limit < len(ranked):
        keep = set(ranked[:limit])
    else:
        if limit > len(ranked):
            log.warning("only %d scored platforms; exporting all (limit %d)", len(ranked), limit)
        keep = set(ranked)

    months_payload: dict = {}
    for report in reports_data["reports"]:
        month = int(report["cutoff_month"])
        entries = [
            {"platform_id": e["platform_id"], "score": float(e["score"]), "rank": i + 1}
            for i, e in enumerate(report["scores"])
        ]
        months_payload[str(month)] = {
            "label": format_month(month),
            "entries": [e for e in entries if e["platform_id"] in keep],
        }
    rankings = {"schema_version": SCHEMA_VERSION, "months": months_payload}

    graph = kg_build(records)
    index = GraphFeatureIndex(graph)
    problem_ids = {
        r.id for r in records if r.online_month <= latest_month and label_at(r, latest_month) is Label.PROBLEM
    }
    platforms = []
    related = {}
    for pid in sorted(keep):
        record = by_id.get(pid)
        if record is None:
            raise DataError(f"ranked platform {pid} missing from cleaned data")
        tags = record.static_categorical.get("tags") or ()
        platforms.append(
            {
                "id": record.id,
                "name": record.name,
                "online_month": record.online_month,
                "online_label": format_month(record.online_month),
                "status": dataio.STATUS_NAMES[record.status],
                "static_numeric": {k: v for k, v in record.static_numeric.items()},
                "nature": record.static_categorical.get("nature"),
                "region": record.static_categorical.get("region"),
                "guarantee_mode": record.static_categorical.get("guarantee_mode"),
                "tags": list(tags),
                "officers": list(record.officers),
                "missing_fields": list(record.missing_fields),
                "kg_features": index.features(record.id, problem_ids),
            }
        )
        related[pid] = {
            "tags": list(tags),
            "related": [
                {"platform_id": other, "jaccard": sim}
                for other, sim in index.top_similar(record.id, n=5)
            ],
        }

    series = {}
    for pid in sorted(keep):
        record = by_id[pid]
        series[pid] = {
            "channels": {
                name: [[m, v] for m, v in s.points] for name, s in sorted(record.index_series.items())
            },
            "news_per_month": _doc_counts(record.news_docs),
            "comments_per_month": _doc_counts(record.comment_docs),
        }

    os.makedirs(out_dir, exist_ok=True)
    outputs = {
        "rankings.json": rankings,
        "platforms.json": {"schema_version": SCHEMA_VERSION, "platforms": platforms},
        "series.json": {"schema_version": SCHEMA_VERSION, "series": series},
        "reports.json": {
            "schema_version": SCHEMA_VERSION,
            "reports": [
                {key: value for key, value in report.items() if key != "scores"}
                for report in reports_data["reports"]
            ],
        },
        "related.json": {"schema_version": SCHEMA_VERSION, "related": related},
    }
    validate_dashboard_bundle(outputs)
    for name, payload in outputs.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
    log.info("dashboard bundle (%d platforms) -> %s", len(platforms), out_dir)
    return out_dir


def _doc_counts(docs) -> list[list[int]]:
    counts: dict[int, int] = {}
    for doc in docs:
        counts[doc.month] = counts.get(doc.month, 0) + 1
    return [[m, counts[m]] for m in sorted(counts)]


def validate_dashboard_bundle(outputs: dict) -> None:
    """Referential integrity: every ranked id resolves to a platform entry."""
    for name in DASHBOARD_FILES:
        if name not in outputs:
            raise DataError(f"dashboard bundle missing {name}")
        if outputs[name].get("schema_version") != SCHEMA_VERSION:
            raise DataError(f"{name}: wrong schema_version")
    known = {p["id"] for p in outputs["platforms.json"]["platforms"]}
    for month, payload in outputs["rankings.json"]["months"].items():
        for entry in payload["entries"]:
            if entry["platform_id"] not in known:
                raise DataError(f"rankings month {month} references unknown platform {entry['platform_id']}")
    for pid in outputs["related.json"]["related"]:
        if pid not in known:
            raise DataError(f"related.json references unknown platform {pid}")
