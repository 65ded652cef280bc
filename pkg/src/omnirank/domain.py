"""Shared data vocabulary: platforms, documents, labels, feature bundles.

Time is handled as integer month indices (months since 1970-01). Days exist
only inside documents and are aggregated away during feature extraction.
All types are immutable after construction and safe to share across workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

import numpy as np

from .errors import DataError

NEWS = "news"
COMMENT = "comment"

EPOCH_YEAR = 1970


class Label(IntEnum):
    PROBLEM = 0
    NORMAL = 1


def month_index(year: int, month: int) -> int:
    if not 1 <= month <= 12:
        raise DataError(f"month out of range: {month}")
    return (year - EPOCH_YEAR) * 12 + (month - 1)


def parse_month(text: str) -> int:
    """Parse a "YYYY-MM" string into a month index."""
    parts = text.strip().split("-")
    if len(parts) != 2:
        raise DataError(f"expected YYYY-MM, got {text!r}")
    try:
        year, month = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DataError(f"expected YYYY-MM, got {text!r}") from exc
    return month_index(year, month)


def format_month(index: int) -> str:
    year, month = divmod(index, 12)
    return f"{EPOCH_YEAR + year:04d}-{month + 1:02d}"


@dataclass(frozen=True)
class MonthlySeries:
    """Ordered (month, value) points; months strictly increasing."""

    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        months = [m for m, _ in self.points]
        if any(b <= a for a, b in zip(months, months[1:])):
            raise DataError("series months must be strictly increasing")

    def value_at(self, month: int) -> Optional[float]:
        for m, v in self.points:
            if m == month:
                return v
            if m > month:
                return None
        return None

    def last_month(self) -> Optional[int]:
        return self.points[-1][0] if self.points else None


@dataclass(frozen=True)
class TextDocument:
    doc_id: str
    platform_id: str
    month: int
    day: int
    tokens: tuple[str, ...]
    kind: str  # NEWS or COMMENT
    author: Optional[str] = None

    def __post_init__(self):
        if self.kind not in (NEWS, COMMENT):
            raise DataError(f"unknown document kind: {self.kind!r}")
        if not self.tokens:
            raise DataError(f"document {self.doc_id} has no tokens")


@dataclass(frozen=True)
class PlatformRecord:
    """One platform's raw static attributes, label data and histories.

    ``static_categorical`` values are strings except ``tags`` which is a
    tuple (multi-membership). Officer strings may carry an optional
    ``::position`` suffix used when building the knowledge graph.
    ``missing_fields`` records which fields were null before defaults were
    filled in.
    """

    id: str
    name: str
    online_month: int
    status: Label
    failure_month: Optional[int]
    static_numeric: dict[str, Optional[float]]
    static_categorical: dict[str, object]
    index_series: dict[str, MonthlySeries]
    news_docs: tuple[TextDocument, ...] = ()
    comment_docs: tuple[TextDocument, ...] = ()
    officers: tuple[str, ...] = ()
    missing_fields: tuple[str, ...] = ()


def validate_record(record: PlatformRecord) -> None:
    if not record.id:
        raise DataError("platform id must be non-empty")
    if record.status is Label.PROBLEM:
        if record.failure_month is None:
            raise DataError(f"{record.id}: problem platform without failure_month")
        if record.failure_month < record.online_month:
            raise DataError(f"{record.id}: failure_month before online_month")
    elif record.failure_month is not None:
        raise DataError(f"{record.id}: normal platform with failure_month set")
    for name, series in record.index_series.items():
        if any(m < record.online_month for m, _ in series.points):
            raise DataError(f"{record.id}: series {name} has points before online_month")
    for doc in list(record.news_docs) + list(record.comment_docs):
        if doc.platform_id != record.id:
            raise DataError(f"{record.id}: document {doc.doc_id} belongs to {doc.platform_id}")


def validate_dataset(records: list[PlatformRecord]) -> None:
    seen: set[str] = set()
    for record in records:
        validate_record(record)
        if record.id in seen:
            raise DataError(f"duplicate platform id {record.id}")
        seen.add(record.id)


def label_at(record: PlatformRecord, cutoff: int) -> Label:
    """Label of a platform as known at the end of ``cutoff``.

    A failure in the cutoff month already counts as Problem.
    """
    if cutoff < record.online_month:
        raise DataError(
            f"{record.id}: cutoff {cutoff} before online month {record.online_month}"
        )
    if record.failure_month is not None and record.failure_month <= cutoff:
        return Label.PROBLEM
    return Label.NORMAL


@dataclass
class FeatureBundle:
    """Model-ready features for one platform at one time cutoff.

    All temporal matrices have exactly T rows covering the window
    (cutoff-T+1 .. cutoff); months before the platform went online, or with
    no data, are zero rows. Nothing dated after the cutoff contributes.
    """

    platform_id: str
    cutoff_month: int
    x_s_num: np.ndarray  # (n_numeric,)
    x_s_cat: np.ndarray  # (n_fields, vocab)
    x_di: np.ndarray  # (T, index channels)
    x_dn: np.ndarray  # (T, K topics + pos + neg + total)
    x_dc: np.ndarray  # (T, pos + neg + total + mean ugc)
    kg_vec: np.ndarray  # (4,)
    label_at_cutoff: Label

    def flatten(self) -> np.ndarray:
        return np.concatenate(
            [
                self.x_s_num.ravel(),
                self.x_s_cat.ravel(),
                self.x_di.ravel(),
                self.x_dn.ravel(),
                self.x_dc.ravel(),
                self.kg_vec.ravel(),
            ]
        )


@dataclass(frozen=True)
class RiskScore:
    platform_id: str
    cutoff_month: int
    score: float

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise DataError(f"score out of [0,1]: {self.score}")
