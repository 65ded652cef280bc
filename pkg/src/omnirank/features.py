"""Feature extraction: clean records -> model-ready FeatureBundles.

A FeatureContext is fitted per cutoff from data dated at or before the
cutoff only (topic model, per-document sentiment and UGC scores, channel
statistics, categorical vocabulary, graph and the set of already-failed
platforms). Bundle construction is then a pure function of
(record, cutoff, context), so deleting anything dated after the cutoff can
never change a bundle.
"""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cleaning import score_comments
from .domain import FeatureBundle, Label, PlatformRecord, TextDocument, label_at
from .errors import DataError
from .kg import GraphFeatureIndex, KnowledgeGraph, kg_build
from .lda import LdaModel, lda_fit, lda_infer
from .seeding import derive_rng
from .sentiment import POSITIVE, SentimentLexicon, sentiment_score

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 12
DEFAULT_INDEX_CHANNELS = (
    "volume",
    "rate",
    "net_inflow",
    "investor_count",
    "borrower_count",
    "loan_count",
    "mean_term",
)


@dataclass(frozen=True)
class FeatureConfig:
    window_months: int = DEFAULT_WINDOW
    lda_k: int = 5
    lda_alpha: float | None = None  # None -> 50/K
    lda_eta: float = 0.01
    lda_fit_iters: int = 200
    lda_infer_iters: int = 30
    index_channels: tuple[str, ...] = DEFAULT_INDEX_CHANNELS
    seed: int = 0


@dataclass
class FeatureContext:
    """Everything bundle construction needs, all fitted causally."""

    cutoff: int
    config: FeatureConfig
    lexicon: SentimentLexicon
    lda: LdaModel | None
    graph: KnowledgeGraph
    graph_index: GraphFeatureIndex
    problem_ids: set[str]
    numeric_fields: tuple[str, ...]
    numeric_mean: np.ndarray
    numeric_std: np.ndarray
    cat_fields: tuple[str, ...]
    cat_vocab: dict[str, tuple[str, ...]]  # field -> ordered categories
    index_mean: np.ndarray
    index_std: np.ndarray
    doc_topics: dict[str, np.ndarray] = field(default_factory=dict)
    doc_positive: dict[str, bool] = field(default_factory=dict)
    doc_ugc: dict[str, float] = field(default_factory=dict)

    @property
    def cat_width(self) -> int:
        return sum(len(v) for v in self.cat_vocab.values())

    def dims(self) -> dict[str, int]:
        k = self.lda.k if self.lda is not None else self.config.lda_k
        return {
            "static_num": len(self.numeric_fields),
            "kg": 4,
            "cat_fields": len(self.cat_fields),
            "cat_vocab": self.cat_width,
            "window": self.config.window_months,
            "index_channels": len(self.config.index_channels),
            "news_channels": k + 3,
            "comment_channels": 4,
        }


def signed_log(value: float) -> float:
    """sign(v) * log1p(|v|): tames heavy-tailed magnitudes (capital, volume)
    before standardization while keeping sign and order."""
    return math.copysign(math.log1p(abs(value)), value)


def _numeric_value(record: PlatformRecord, field_name: str) -> float | None:
    value = record.static_numeric.get(field_name)
    return None if value is None else signed_log(float(value))


def build_feature_context(
    records: Sequence[PlatformRecord],
    cutoff: int,
    config: FeatureConfig,
    lexicon: SentimentLexicon,
) -> FeatureContext:
    """Fit all corpus-level artifacts from data dated <= cutoff."""
    eligible = [r for r in records if r.online_month <= cutoff]
    if not eligible:
        raise DataError(f"no platform online at cutoff {cutoff}")

    news = [d for r in eligible for d in r.news_docs if d.month <= cutoff]
    comments = [d for r in eligible for d in r.comment_docs if d.month <= cutoff]
    news.sort(key=lambda d: d.doc_id)
    comments.sort(key=lambda d: d.doc_id)

    lda_model = None
    doc_topics: dict[str, np.ndarray] = {}
    if news:
        distinct = {t for d in news for t in d.tokens}
        k = min(config.lda_k, len(distinct))
        lda_model = lda_fit(
            [list(d.tokens) for d in news],
            k=k,
            alpha=config.lda_alpha,
            eta=config.lda_eta,
            iters=config.lda_fit_iters,
            seed=int(derive_rng(config.seed, "lda-fit-seed", cutoff).integers(2**31)),
        )
        infer_seed = int(derive_rng(config.seed, "lda-infer-seed", cutoff).integers(2**31))
        for idx, doc in enumerate(news):
            props = lda_infer(lda_model, doc.tokens, iters=config.lda_infer_iters, seed=infer_seed + idx)
            if lda_model.k < config.lda_k:
                props = np.pad(props, (0, config.lda_k - lda_model.k))
            doc_topics[doc.doc_id] = props

    doc_positive = {
        d.doc_id: sentiment_score(d.tokens, lexicon) == POSITIVE for d in news + comments
    }
    doc_ugc = dict(zip((d.doc_id for d in comments), score_comments(comments, lexicon)))

    graph = kg_build(eligible)
    graph_index = GraphFeatureIndex(graph)
    problem_ids = {r.id for r in eligible if label_at(r, cutoff) is Label.PROBLEM}

    numeric_fields = tuple(sorted({f for r in eligible for f in r.static_numeric}))
    columns = []
    for f in numeric_fields:
        values = [v for r in eligible if (v := _numeric_value(r, f)) is not None]
        columns.append(values or [0.0])
    numeric_mean = np.array([float(np.mean(c)) for c in columns])
    numeric_std = np.array([float(np.std(c)) for c in columns])

    cat_fields = tuple(sorted({f for r in eligible for f in r.static_categorical}))
    cat_vocab: dict[str, tuple[str, ...]] = {}
    for f in cat_fields:
        values: set[str] = set()
        for r in eligible:
            v = r.static_categorical.get(f)
            if v is None:
                continue
            if isinstance(v, (tuple, list)):
                values.update(str(x) for x in v)
            else:
                values.add(str(v))
        cat_vocab[f] = tuple(sorted(values))

    channels = config.index_channels
    channel_values: list[list[float]] = [[] for _ in channels]
    for r in eligible:
        for ci, name in enumerate(channels):
            series = r.index_series.get(name)
            if series is None:
                continue
            channel_values[ci].extend(signed_log(v) for m, v in series.points if m <= cutoff)
    index_mean = np.array([float(np.mean(c)) if c else 0.0 for c in channel_values])
    index_std = np.array([float(np.std(c)) if c else 0.0 for c in channel_values])

    return FeatureContext(
        cutoff=cutoff,
        config=config,
        lexicon=lexicon,
        lda=lda_model,
        graph=graph,
        graph_index=graph_index,
        problem_ids=problem_ids,
        numeric_fields=numeric_fields,
        numeric_mean=numeric_mean,
        numeric_std=numeric_std,
        cat_fields=cat_fields,
        cat_vocab=cat_vocab,
        index_mean=index_mean,
        index_std=index_std,
        doc_topics=doc_topics,
        doc_positive=doc_positive,
        doc_ugc=doc_ugc,
    )


def build_feature_bundle(record: PlatformRecord, cutoff: int, ctx: FeatureContext) -> FeatureBundle:
    """Assemble one platform's features at a cutoff; pure given the context."""
    if cutoff < record.online_month:
        raise DataError(f"{record.id}: cutoff {cutoff} before online month")
    cfg = ctx.config
    t_window = cfg.window_months
    months = list(range(cutoff - t_window + 1, cutoff + 1))

    x_s_num = np.zeros(len(ctx.numeric_fields))
    for j, f in enumerate(ctx.numeric_fields):
        value = _numeric_value(record, f)
        if value is None:
            continue
        std = ctx.numeric_std[j]
        x_s_num[j] = (value - ctx.numeric_mean[j]) / std if std > 1e-12 else 0.0

    x_s_cat = np.zeros((len(ctx.cat_fields), ctx.cat_width))
    offset = 0
    for row, f in enumerate(ctx.cat_fields):
        vocab = ctx.cat_vocab[f]
        index = {v: offset + i for i, v in enumerate(vocab)}
        value = record.static_categorical.get(f)
        if value is not None:
            entries = value if isinstance(value, (tuple, list)) else (value,)
            for entry in entries:
                col = index.get(str(entry))
                if col is not None:
                    x_s_cat[row, col] = 1.0
        offset += len(vocab)

    x_di = np.zeros((t_window, len(cfg.index_channels)))
    for ci, name in enumerate(cfg.index_channels):
        series = record.index_series.get(name)
        if series is None:
            continue
        std = ctx.index_std[ci]
        for mi, month in enumerate(months):
            value = series.value_at(month)
            if value is None or month < record.online_month:
                continue
            x_di[mi, ci] = (signed_log(value) - ctx.index_mean[ci]) / std if std > 1e-12 else 0.0

    k = cfg.lda_k
    news_by_month: dict[int, list[TextDocument]] = defaultdict(list)
    for doc in record.news_docs:
        if doc.month <= cutoff:
            news_by_month[doc.month].append(doc)
    x_dn = np.zeros((t_window, k + 3))
    for mi, month in enumerate(months):
        docs = news_by_month.get(month, [])
        if not docs:
            continue
        topics = [ctx.doc_topics[d.doc_id] for d in docs if d.doc_id in ctx.doc_topics]
        if topics:
            x_dn[mi, :k] = np.mean(topics, axis=0)
        pos = sum(1 for d in docs if ctx.doc_positive.get(d.doc_id, True))
        x_dn[mi, k] = pos
        x_dn[mi, k + 1] = len(docs) - pos
        x_dn[mi, k + 2] = len(docs)

    comments_by_month: dict[int, list[TextDocument]] = defaultdict(list)
    for doc in record.comment_docs:
        if doc.month <= cutoff:
            comments_by_month[doc.month].append(doc)
    x_dc = np.zeros((t_window, 4))
    for mi, month in enumerate(months):
        docs = comments_by_month.get(month, [])
        if not docs:
            continue
        pos = sum(1 for d in docs if ctx.doc_positive.get(d.doc_id, True))
        x_dc[mi, 0] = pos
        x_dc[mi, 1] = len(docs) - pos
        x_dc[mi, 2] = len(docs)
        scores = [ctx.doc_ugc[d.doc_id] for d in docs if d.doc_id in ctx.doc_ugc]
        x_dc[mi, 3] = float(np.mean(scores)) if scores else 0.0

    kg_vec = np.array(ctx.graph_index.features(record.id, ctx.problem_ids))

    return FeatureBundle(
        platform_id=record.id,
        cutoff_month=cutoff,
        x_s_num=x_s_num,
        x_s_cat=x_s_cat,
        x_di=x_di,
        x_dn=x_dn,
        x_dc=x_dc,
        kg_vec=kg_vec,
        label_at_cutoff=label_at(record, cutoff),
    )


def build_bundles(
    records: Sequence[PlatformRecord],
    cutoff: int,
    config: FeatureConfig,
    lexicon: SentimentLexicon,
) -> list[FeatureBundle]:
    """Context + bundles for every platform online at the cutoff."""
    ctx = build_feature_context(records, cutoff, config, lexicon)
    return [
        build_feature_bundle(r, cutoff, ctx)
        for r in records
        if r.online_month <= cutoff
    ]


def bundle_to_dict(bundle: FeatureBundle) -> dict:
    return {
        "platform_id": bundle.platform_id,
        "cutoff_month": bundle.cutoff_month,
        "x_s_num": bundle.x_s_num.tolist(),
        "x_s_cat": bundle.x_s_cat.tolist(),
        "x_di": bundle.x_di.tolist(),
        "x_dn": bundle.x_dn.tolist(),
        "x_dc": bundle.x_dc.tolist(),
        "kg_vec": bundle.kg_vec.tolist(),
        "label_at_cutoff": int(bundle.label_at_cutoff),
    }


def bundle_from_dict(data: dict) -> FeatureBundle:
    try:
        return FeatureBundle(
            platform_id=data["platform_id"],
            cutoff_month=int(data["cutoff_month"]),
            x_s_num=np.array(data["x_s_num"], dtype=float),
            x_s_cat=np.atleast_2d(np.array(data["x_s_cat"], dtype=float)),
            x_di=np.atleast_2d(np.array(data["x_di"], dtype=float)),
            x_dn=np.atleast_2d(np.array(data["x_dn"], dtype=float)),
            x_dc=np.atleast_2d(np.array(data["x_dc"], dtype=float)),
            kg_vec=np.array(data["kg_vec"], dtype=float),
            label_at_cutoff=Label(int(data["label_at_cutoff"])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed feature bundle: {exc}") from exc
