"""Evaluation protocol: pairwise AUC, top-fraction labeling accuracy,
score histograms, forward ranking-bucket failure rates, k-fold
cross-validated rolling monthly scoring, and the logistic baseline.

Scores are "safety" scores: Normal platforms should score high. The AUC
treats Normal platforms as positives and Problem platforms as negatives;
each of the M*N pairs contributes 1 if the positive outscores the negative,
0.5 on a tie and 0 otherwise. The implementation uses midranks, which is
exactly that pairwise sum (both are multiples of 0.5, so the floats agree
bit-for-bit with brute-force enumeration).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .domain import FeatureBundle, Label, PlatformRecord, RiskScore, label_at
from .errors import DataError
from .features import FeatureConfig, build_feature_bundle, build_feature_context
from .nn.network import (
    BranchDims,
    NetworkConfig,
    OmniRankNet,
    TrainConfig,
    dims_from_bundles,
    predict_scores,
    train,
)
from .seeding import derive_rng
from .sentiment import SentimentLexicon

log = logging.getLogger(__name__)

DEFAULT_BUCKET_LIMITS: tuple[int | None, ...] = (20, 50, 100, 200, 500, 1000, None)
HISTOGRAM_BINS = 10
DEFAULT_NORMAL_FRACTION = 0.6


def auc(positive_scores: Sequence[float], negative_scores: Sequence[float]) -> float:
    """Pairwise AUC via midranks; ties between a positive and a negative
    count half."""
    m, n = len(positive_scores), len(negative_scores)
    if m == 0 or n == 0:
        raise DataError("auc needs at least one score on each side")
    merged = np.concatenate([np.asarray(positive_scores, float), np.asarray(negative_scores, float)])
    order = np.argsort(merged, kind="mergesort")
    ranks = np.empty(m + n)
    sorted_scores = merged[order]
    i = 0
    while i < m + n:
        j = i
        while j + 1 < m + n and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0  # midrank, 1-based
        i = j + 1
    pos_rank_sum = ranks[:m].sum()
    return (pos_rank_sum - m * (m + 1) / 2.0) / (m * n)


def rank_platforms(scores: Sequence[RiskScore]) -> list[RiskScore]:
    """Descending by score; ties break by platform id ascending."""
    return sorted(scores, key=lambda s: (-s.score, s.platform_id))


def accuracy_top_split(
    scores: Sequence[RiskScore],
    true_labels: dict[str, Label],
    normal_fraction: float = DEFAULT_NORMAL_FRACTION,
) -> float:
    """Predict Normal for the top fraction of the ranking, Problem below."""
    if not 0.0 < normal_fraction < 1.0:
        raise DataError("normal_fraction must be in (0,1)")
    if not scores:
        raise DataError("no scores to evaluate")
    ranked = rank_platforms(scores)
    missing = [s.platform_id for s in ranked if s.platform_id not in true_labels]
    if missing:
        raise DataError(f"missing labels for: {missing[:5]}")
    n = len(ranked)
    n_normal = int(np.ceil(normal_fraction * n))
    correct = 0
    for i, s in enumerate(ranked):
        predicted = Label.NORMAL if i < n_normal else Label.PROBLEM
        if predicted == true_labels[s.platform_id]:
            correct += 1
    return correct / n


def score_histogram(
    scores: Sequence[RiskScore], labels: dict[str, Label], bins: int = HISTOGRAM_BINS
) -> dict[str, list[int]]:
    """Per-label score counts over equal bins on [0,1]; 1.0 lands in the top bin."""
    normal = np.zeros(bins, dtype=int)
    problem = np.zeros(bins, dtype=int)
    for s in scores:
        idx = min(int(s.score * bins), bins - 1)
        if labels[s.platform_id] is Label.NORMAL:
            normal[idx] += 1
        else:
            problem[idx] += 1
    return {"normal": normal.tolist(), "problem": problem.tolist()}


@dataclass(frozen=True)
class BucketRow:
    limit: int | None  # None = all platforms
    failure_pct: float
    mean_interest_rate: float
    n_platforms: int

    def to_dict(self) -> dict:
        return {
            "limit": self.limit,
            "failure_pct": self.failure_pct,
            "mean_interest_rate": self.mean_interest_rate,
            "n_platforms": self.n_platforms,
        }


def bucket_prediction(
    scores: Sequence[RiskScore],
    records: Sequence[PlatformRecord],
    cutoff: int,
    horizon: int,
    limits: Sequence[int | None] = DEFAULT_BUCKET_LIMITS,
    rate_field: str = "interest_rate",
) -> list[BucketRow]:
    """Next-month failure share and mean advertised rate per top-L bucket.

    Only platforms still Normal at the cutoff participate; their label at
    cutoff+1 decides failure.
    """
    if cutoff + 1 > horizon:
        raise DataError(f"bucket evaluation at {cutoff} needs labels at {cutoff + 1} beyond horizon {horizon}")
    by_id = {r.id: r for r in records}
    candidates = []
    for s in scores:
        record = by_id.get(s.platform_id)
        if record is None:
            raise DataError(f"score for unknown platform {s.platform_id}")
        if label_at(record, cutoff) is Label.NORMAL:
            candidates.append(s)
    ranked = rank_platforms(candidates)
    rows = []
    for limit in limits:
        top = ranked if limit is None else ranked[:limit]
        if not top:
            rows.append(BucketRow(limit, 0.0, 0.0, 0))
            continue
        fails = sum(
            1 for s in top if label_at(by_id[s.platform_id], cutoff + 1) is Label.PROBLEM
        )
        rates = [
            v
            for s in top
            if (v := by_id[s.platform_id].static_numeric.get(rate_field)) is not None
        ]
        rows.append(
            BucketRow(
                limit=limit,
                failure_pct=100.0 * fails / len(top),
                mean_interest_rate=float(np.mean(rates)) if rates else 0.0,
                n_platforms=len(top),
            )
        )
    return rows


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: dict[str, int]

    def fold_of(self, platform_id: str) -> int:
        return self.assignment[platform_id]


def make_folds(platform_ids: Sequence[str], k: int = 5, seed: int = 0) -> FoldPlan:
    """Seeded partition into k folds whose sizes differ by at most one."""
    if k < 2:
        raise DataError("need at least 2 folds")
    ids = sorted(platform_ids)
    if len(ids) < k:
        raise DataError(f"cannot split {len(ids)} platforms into {k} folds")
    rng = derive_rng(seed, "folds")
    order = rng.permutation(len(ids))
    assignment = {ids[int(j)]: int(i % k) for i, j in enumerate(order)}
    return FoldPlan(k=k, assignment=assignment)


@dataclass
class EvaluationReport:
    cutoff_month: int
    accuracy: float
    auc: float
    histogram: dict[str, list[int]]
    buckets: list[BucketRow]
    n_platforms: int = 0
    baseline_auc: float | None = None
    scores: list[RiskScore] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "cutoff_month": self.cutoff_month,
            "accuracy": self.accuracy,
            "auc": self.auc,
            "histogram": self.histogram,
            "buckets": [b.to_dict() for b in self.buckets],
            "n_platforms": self.n_platforms,
            "baseline_auc": self.baseline_auc,
            "scores": [
                {"platform_id": s.platform_id, "score": s.score} for s in rank_platforms(self.scores)
            ],
        }


@dataclass(frozen=True)
class EvalConfig:
    folds: int = 5
    normal_fraction: float = DEFAULT_NORMAL_FRACTION
    bucket_limits: tuple[int | None, ...] = DEFAULT_BUCKET_LIMITS
    feature: FeatureConfig = FeatureConfig()
    network: NetworkConfig = NetworkConfig()
    train: TrainConfig = TrainConfig()
    seed: int = 0
    include_baseline: bool = True


ModelFactory = Callable[[BranchDims, int], OmniRankNet]


def _default_factory(network_config: NetworkConfig) -> ModelFactory:
    def factory(dims: BranchDims, seed: int) -> OmniRankNet:
        from dataclasses import replace

        return OmniRankNet(dims, replace(network_config, seed=seed))

    return factory


def cross_validated_scores(
    bundles: list[FeatureBundle],
    folds: FoldPlan,
    cfg: EvalConfig,
    cutoff: int,
) -> list[RiskScore]:
    """Out-of-fold scores: each platform is scored by the model that never
    saw it during training."""
    factory = _default_factory(cfg.network)
    dims = dims_from_bundles(bundles)
    scores: list[RiskScore] = []
    for fold in range(folds.k):
        train_bundles = [b for b in bundles if folds.fold_of(b.platform_id) != fold]
        test_bundles = [b for b in bundles if folds.fold_of(b.platform_id) == fold]
        if not test_bundles:
            continue
        if not train_bundles:
            raise DataError("fold with no training data")
        seed = int(derive_rng(cfg.seed, "fold-model", cutoff, fold).integers(2**31))
        model = factory(dims, seed)
        from dataclasses import replace

        train(model, train_bundles, replace(cfg.train, seed=seed))
        scores.extend(predict_scores(model, test_bundles))
    return scores


def rolling_evaluate(
    records: Sequence[PlatformRecord],
    months: Sequence[int],
    cfg: EvalConfig,
    lexicon: SentimentLexicon,
    horizon: int | None = None,
) -> list[EvaluationReport]:
    """Per-month retrain-and-score using only data dated at or before each
    cutoff; labels refresh with the cutoff. Every evaluated month needs
    next-month labels for the bucket rows, so months must stay below the
    horizon."""
    if horizon is None:
        horizon = dataset_horizon(records)
    if not months:
        return []
    reports = []
    for cutoff in sorted(months):
        if cutoff + 1 > horizon:
            raise DataError(f"cannot evaluate {cutoff}: needs month {cutoff + 1} within horizon {horizon}")
        eligible = [r for r in records if r.online_month <= cutoff]
        if len(eligible) < 2 * cfg.folds:
            raise DataError(
                f"month {cutoff}: {len(eligible)} platforms online, need >= {2 * cfg.folds}"
            )
        ctx = build_feature_context(eligible, cutoff, cfg.feature, lexicon)
        bundles = [build_feature_bundle(r, cutoff, ctx) for r in eligible]
        folds = make_folds(
            [r.id for r in eligible],
            cfg.folds,
            seed=int(derive_rng(cfg.seed, "fold-plan", cutoff).integers(2**31)),
        )
        scores = cross_validated_scores(bundles, folds, cfg, cutoff)
        labels = {r.id: label_at(r, cutoff) for r in eligible}
        pos = [s.score for s in scores if labels[s.platform_id] is Label.NORMAL]
        neg = [s.score for s in scores if labels[s.platform_id] is Label.PROBLEM]
        baseline = None
        if cfg.include_baseline:
            base_scores = baseline_logistic(bundles, folds=folds, seed=cfg.seed)
            base_by_id = {s.platform_id: s.score for s in base_scores}
            bpos = [base_by_id[s.platform_id] for s in scores if labels[s.platform_id] is Label.NORMAL]
            bneg = [base_by_id[s.platform_id] for s in scores if labels[s.platform_id] is Label.PROBLEM]
            if bpos and bneg:
                baseline = auc(bpos, bneg)
        report = EvaluationReport(
            cutoff_month=cutoff,
            accuracy=accuracy_top_split(scores, labels, cfg.normal_fraction),
            auc=auc(pos, neg) if pos and neg else 0.5,
            histogram=score_histogram(scores, labels),
            buckets=bucket_prediction(scores, eligible, cutoff, horizon, cfg.bucket_limits),
            n_platforms=len(eligible),
            baseline_auc=baseline,
            scores=scores,
        )
        log.info(
            "month %s: accuracy=%.3f auc=%.3f baseline_auc=%s n=%d",
            cutoff,
            report.accuracy,
            report.auc,
            f"{baseline:.3f}" if baseline is not None else "n/a",
            report.n_platforms,
        )
        reports.append(report)
    return reports


def dataset_horizon(records: Sequence[PlatformRecord]) -> int:
    """Largest month observed in any series or document."""
    horizon = None
    for r in records:
        months = [m for s in r.index_series.values() for m, _ in s.points]
        months += [d.month for d in r.news_docs] + [d.month for d in r.comment_docs]
        months.append(r.online_month)
        if r.failure_month is not None:
            months.append(r.failure_month)
        local = max(months)
        horizon = local if horizon is None else max(horizon, local)
    if horizon is None:
        raise DataError("empty dataset")
    return horizon


# --- logistic baseline ----------------------------------------------------


class LogisticModel:
    """L2-regularized logistic regression fit by full-batch gradient descent
    on standardized flattened bundles."""

    def __init__(self, l2: float = 1e-2, learning_rate: float = 0.5, iters: int = 400):
        self.l2 = l2
        self.learning_rate = learning_rate
        self.iters = iters
        self.w: np.ndarray | None = None
        self.b: float = 0.0
        self.mean: np.ndarray | None = None
        self.std: np.ndarray | None = None

    def _design(self, bundles: list[FeatureBundle]) -> np.ndarray:
        return np.stack([b.flatten() for b in bundles])

    def fit(self, bundles: list[FeatureBundle]) -> "LogisticModel":
        x = self._design(bundles)
        y = np.array([float(b.label_at_cutoff) for b in bundles])
        self.mean = x.mean(axis=0)
        self.std = x.std(axis=0)
        self.std[self.std < 1e-12] = 1.0  # constant columns stay zero after centering
        x = (x - self.mean) / self.std
        n, d = x.shape
        self.w = np.zeros(d)
        self.b = 0.0
        for _ in range(self.iters):
            z = x @ self.w + self.b
            p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
            err = p - y
            gw = x.T @ err / n + self.l2 * self.w
            gb = float(err.mean())
            self.w -= self.learning_rate * gw
            self.b -= self.learning_rate * gb
        return self

    def predict(self, bundles: list[FeatureBundle]) -> np.ndarray:
        x = (self._design(bundles) - self.mean) / self.std
        z = x @ self.w + self.b
        return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def baseline_logistic(
    bundles: list[FeatureBundle],
    folds: FoldPlan | None = None,
    k: int = 5,
    seed: int = 0,
    l2: float = 1e-2,
) -> list[RiskScore]:
    """Out-of-fold logistic-regression scores on flattened bundles."""
    if not bundles:
        raise DataError("no bundles supplied")
    if folds is None:
        folds = make_folds([b.platform_id for b in bundles], k=k, seed=seed)
    scores: list[RiskScore] = []
    for fold in range(folds.k):
        train_b = [b for b in bundles if folds.fold_of(b.platform_id) != fold]
        test_b = [b for b in bundles if folds.fold_of(b.platform_id) == fold]
        if not test_b:
            continue
        model = LogisticModel(l2=l2).fit(train_b)
        for bundle, p in zip(test_b, model.predict(test_b)):
            scores.append(
                RiskScore(
                    platform_id=bundle.platform_id,
                    cutoff_month=bundle.cutoff_month,
                    score=float(min(1.0, max(0.0, p))),
                )
            )
    return scores
