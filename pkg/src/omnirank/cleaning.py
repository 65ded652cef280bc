"""Data cleaning: near-duplicate removal, null defaults, UGC quality filter.

The comment-quality score is a weighted blend of information content (mean
TF-IDF), sentiment clarity and author weight, min-max normalized over the
corpus; records scoring below the threshold (default 0.2) are dropped.
Normalization happens once, corpus-wide, and is NOT reapplied after
filtering.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .domain import PlatformRecord, TextDocument
from .errors import DataError
from .sentiment import SentimentLexicon, sentiment_clarity

UGC_TFIDF_WEIGHT = 5.0
UGC_CLARITY_WEIGHT = 3.0
UGC_AUTHOR_WEIGHT = 2.0
DEFAULT_UGC_THRESHOLD = 0.2
DEFAULT_DEDUP_JACCARD = 0.9


@dataclass(frozen=True)
class UgcComponents:
    tfidf_score: float  # T, scaled to [0,1] over the corpus
    sentiment_clarity: float  # E in [0,1]
    user_weight: float  # W: author's share of all comments

    def __post_init__(self):
        if self.tfidf_score < 0:
            raise DataError("tfidf_score must be >= 0")
        if not 0.0 <= self.sentiment_clarity <= 1.0:
            raise DataError("sentiment_clarity must be in [0,1]")
        if not 0.0 <= self.user_weight <= 1.0:
            raise DataError("user_weight must be in [0,1]")


@dataclass
class CleaningReport:
    duplicates_removed: int = 0
    nulls_filled: int = 0
    ugc_removed: int = 0
    docs_kept: int = 0

    def to_dict(self) -> dict:
        return {
            "duplicates_removed": self.duplicates_removed,
            "nulls_filled": self.nulls_filled,
            "ugc_removed": self.ugc_removed,
            "docs_kept": self.docs_kept,
        }


def ugc_raw(components: UgcComponents) -> float:
    """Pre-normalization quality score 5*T + 3*E + 2*W."""
    return (
        UGC_TFIDF_WEIGHT * components.tfidf_score
        + UGC_CLARITY_WEIGHT * components.sentiment_clarity
        + UGC_AUTHOR_WEIGHT * components.user_weight
    )


def ugc_normalize(raws: Sequence[float]) -> list[float]:
    """Min-max map onto [0,1]; a degenerate corpus (max == min) maps to 1.0."""
    if not raws:
        raise DataError("cannot normalize an empty score list")
    lo, hi = min(raws), max(raws)
    if hi == lo:
        return [1.0] * len(raws)
    span = hi - lo
    return [(x - lo) / span for x in raws]


def ugc_filter(
    comments: Sequence[TextDocument],
    scores: Sequence[float],
    threshold: float = DEFAULT_UGC_THRESHOLD,
) -> tuple[list[TextDocument], CleaningReport]:
    """Keep comments scoring >= threshold ("below" means strictly below)."""
    if len(comments) != len(scores):
        raise DataError(f"comments/scores length mismatch: {len(comments)} vs {len(scores)}")
    kept = [doc for doc, score in zip(comments, scores) if score >= threshold]
    report = CleaningReport(ugc_removed=len(comments) - len(kept), docs_kept=len(kept))
    return kept, report


def mean_tfidf(docs: Sequence[TextDocument]) -> list[float]:
    """Mean TF-IDF weight of each document's tokens against the corpus."""
    n = len(docs)
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(doc.tokens))
    idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
    out = []
    for doc in docs:
        tf = Counter(doc.tokens)
        total = len(doc.tokens)
        weight = sum((count / total) * idf[t] for t, count in tf.items())
        out.append(weight / len(tf))
    return out


def compute_ugc_components(
    comments: Sequence[TextDocument], lexicon: SentimentLexicon
) -> list[UgcComponents]:
    """T/E/W per comment; T min-max scaled, W = author share of the corpus."""
    if not comments:
        return []
    raw_tfidf = mean_tfidf(comments)
    lo, hi = min(raw_tfidf), max(raw_tfidf)
    scaled = [1.0 if hi == lo else (x - lo) / (hi - lo) for x in raw_tfidf]
    author_counts: Counter[str] = Counter(doc.author or "" for doc in comments)
    total = len(comments)
    return [
        UgcComponents(
            tfidf_score=t,
            sentiment_clarity=sentiment_clarity(doc.tokens, lexicon),
            user_weight=author_counts[doc.author or ""] / total,
        )
        for doc, t in zip(comments, scaled)
    ]


def score_comments(
    comments: Sequence[TextDocument], lexicon: SentimentLexicon
) -> list[float]:
    """Normalized UGC quality score per comment, corpus-wide."""
    if not comments:
        return []
    components = compute_ugc_components(comments, lexicon)
    return ugc_normalize([ugc_raw(c) for c in components])


def dedupe_docs(
    docs: Sequence[TextDocument], jaccard_threshold: float = DEFAULT_DEDUP_JACCARD
) -> tuple[list[TextDocument], CleaningReport]:
    """Greedy near-duplicate removal in doc_id order.

    A document is dropped when its token-set Jaccard similarity with any
    previously kept document reaches the threshold; exact duplicates are
    always dropped.
    """
    ordered = sorted(docs, key=lambda d: d.doc_id)
    kept: list[TextDocument] = []
    kept_sets: list[frozenset[str]] = []
    exact: set[frozenset[str]] = set()
    postings: dict[str, list[int]] = defaultdict(list)
    for doc in ordered:
        tokens = frozenset(doc.tokens)
        if tokens in exact:
            continue
        counts: Counter[int] = Counter()
        for token in tokens:
            counts.update(postings.get(token, ()))
        duplicate = False
        for idx, inter in counts.items():
            union = len(tokens) + len(kept_sets[idx]) - inter
            if inter / union >= jaccard_threshold:
                duplicate = True
                break
        if duplicate:
            continue
        idx = len(kept)
        kept.append(doc)
        kept_sets.append(tokens)
        exact.add(tokens)
        for token in tokens:
            postings[token].append(idx)
    report = CleaningReport(duplicates_removed=len(ordered) - len(kept), docs_kept=len(kept))
    return kept, report


def fill_nulls(
    record: PlatformRecord, defaults: dict[str, Optional[object]]
) -> tuple[PlatformRecord, tuple[str, ...]]:
    """Replace nulls with defaults, remembering which fields were missing.

    ``defaults`` must cover every field present on the record; a categorical
    default of None leaves the field absent (it then shows up as a missing
    link in the knowledge graph).
    """
    missing: list[str] = []
    numeric = dict(record.static_numeric)
    categorical = dict(record.static_categorical)
    for field, value in numeric.items():
        if field not in defaults:
            raise DataError(f"{record.id}: no default registered for field {field!r}")
        if value is None:
            numeric[field] = defaults[field]
            missing.append(field)
    for field, value in categorical.items():
        if field not in defaults:
            raise DataError(f"{record.id}: no default registered for field {field!r}")
        if value is None or (isinstance(value, tuple) and not value):
            if defaults[field] is not None:
                categorical[field] = defaults[field]
            missing.append(field)
    filled = replace(
        record,
        static_numeric=numeric,
        static_categorical=categorical,
        missing_fields=tuple(sorted(set(record.missing_fields) | set(missing))),
    )
    return filled, tuple(sorted(missing))


def default_field_values(records: Sequence[PlatformRecord]) -> dict[str, Optional[object]]:
    """Zero for numerics, absent (None) for categoricals."""
    defaults: dict[str, Optional[object]] = {}
    for record in records:
        for field in record.static_numeric:
            defaults.setdefault(field, 0.0)
        for field in record.static_categorical:
            defaults.setdefault(field, None)
    return defaults


def clean_dataset(
    records: list[PlatformRecord],
    lexicon: SentimentLexicon,
    ugc_threshold: float = DEFAULT_UGC_THRESHOLD,
    dedup_jaccard: float = DEFAULT_DEDUP_JACCARD,
) -> tuple[list[PlatformRecord], CleaningReport]:
    """Full cleaning pass: dedupe news, fill nulls, UGC-filter comments."""
    all_news = [d for r in records for d in r.news_docs]
    kept_news, news_report = dedupe_docs(all_news, dedup_jaccard)
    news_by_platform: dict[str, list[TextDocument]] = defaultdict(list)
    for doc in kept_news:
        news_by_platform[doc.platform_id].append(doc)

    all_comments = [d for r in records for d in r.comment_docs]
    scores = score_comments(all_comments, lexicon)
    kept_comments, ugc_report = ugc_filter(all_comments, scores, ugc_threshold)
    comments_by_platform: dict[str, list[TextDocument]] = defaultdict(list)
    for doc in kept_comments:
        comments_by_platform[doc.platform_id].append(doc)

    defaults = default_field_values(records)
    cleaned = []
    nulls_filled = 0
    for record in records:
        filled, missing = fill_nulls(record, defaults)
        nulls_filled += len(missing)
        cleaned.append(
            replace(
                filled,
                news_docs=tuple(sorted(news_by_platform[record.id], key=lambda d: d.doc_id)),
                comment_docs=tuple(sorted(comments_by_platform[record.id], key=lambda d: d.doc_id)),
            )
        )
    report = CleaningReport(
        duplicates_removed=news_report.duplicates_removed,
        nulls_filled=nulls_filled,
        ugc_removed=ugc_report.ugc_removed,
        docs_kept=len(kept_news) + len(kept_comments),
    )
    return cleaned, report
