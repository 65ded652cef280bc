"""JSON-Lines wire formats for platforms and document corpora.

Field names here are the on-disk contract used by every CLI stage:

platforms.jsonl, one platform per line:
    {"id", "name", "online_month", "status": "normal"|"problem",
     "failure_month": int|null, "static_numeric": {...},
     "static_categorical": {..., "tags": [...]},
     "index_series": {name: [[month, value], ...]},
     "officers": [...], "missing_fields": [...]}

news.jsonl / comments.jsonl, one document per line:
    {"doc_id", "platform_id", "month", "day", "kind": "news"|"comment",
     "tokens": [...], "author": str|null}
"""
from __future__ import annotations

import json
import os
from typing import Iterable

from .domain import (
    COMMENT,
    NEWS,
    Label,
    MonthlySeries,
    PlatformRecord,
    TextDocument,
    validate_dataset,
)
from .errors import DataError

STATUS_NAMES = {Label.NORMAL: "normal", Label.PROBLEM: "problem"}
STATUS_VALUES = {v: k for k, v in STATUS_NAMES.items()}


def record_to_dict(record: PlatformRecord) -> dict:
    return {
        "id": record.id,
        "name": record.name,
        "online_month": record.online_month,
        "status": STATUS_NAMES[record.status],
        "failure_month": record.failure_month,
        "static_numeric": dict(record.static_numeric),
        "static_categorical": {
            k: (list(v) if isinstance(v, (list, tuple)) else v)
            for k, v in record.static_categorical.items()
        },
        "index_series": {
            name: [[m, v] for m, v in series.points]
            for name, series in record.index_series.items()
        },
        "officers": list(record.officers),
        "missing_fields": list(record.missing_fields),
    }


def record_from_dict(data: dict) -> PlatformRecord:
    try:
        status = STATUS_VALUES[data["status"]]
        categorical = {
            k: (tuple(v) if isinstance(v, list) else v)
            for k, v in data.get("static_categorical", {}).items()
        }
        return PlatformRecord(
            id=data["id"],
            name=data.get("name", data["id"]),
            online_month=int(data["online_month"]),
            status=status,
            failure_month=None if data.get("failure_month") is None else int(data["failure_month"]),
            static_numeric={k: (None if v is None else float(v)) for k, v in data.get("static_numeric", {}).items()},
            static_categorical=categorical,
            index_series={
                name: MonthlySeries(tuple((int(m), float(v)) for m, v in points))
                for name, points in data.get("index_series", {}).items()
            },
            officers=tuple(data.get("officers", [])),
            missing_fields=tuple(data.get("missing_fields", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed platform record: {exc}") from exc


def doc_to_dict(doc: TextDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "platform_id": doc.platform_id,
        "month": doc.month,
        "day": doc.day,
        "kind": doc.kind,
        "tokens": list(doc.tokens),
        "author": doc.author,
    }


def doc_from_dict(data: dict) -> TextDocument:
    try:
        return TextDocument(
            doc_id=data["doc_id"],
            platform_id=data["platform_id"],
            month=int(data["month"]),
            day=int(data["day"]),
            tokens=tuple(data["tokens"]),
            kind=data["kind"],
            author=data.get("author"),
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed document: {exc}") from exc


def write_jsonl(path: str, rows: Iterable[dict]) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_jsonl(path: str) -> list[dict]:
    if not os.path.exists(path):
        raise DataError(f"missing input file: {path}")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: invalid JSON") from exc
    return rows


def write_platforms(path: str, records: list[PlatformRecord]) -> None:
    write_jsonl(path, (record_to_dict(r) for r in records))


def read_platforms(path: str, validate: bool = True) -> list[PlatformRecord]:
    records = [record_from_dict(row) for row in read_jsonl(path)]
    if validate:
        validate_dataset(records)
    return records


def write_docs(path: str, docs: Iterable[TextDocument]) -> None:
    write_jsonl(path, (doc_to_dict(d) for d in docs))


def read_docs(path: str, expected_kind: str | None = None) -> list[TextDocument]:
    docs = [doc_from_dict(row) for row in read_jsonl(path)]
    if expected_kind is not None:
        bad = [d.doc_id for d in docs if d.kind != expected_kind]
        if bad:
            raise DataError(f"{path}: documents with unexpected kind: {bad[:5]}")
    return docs


def attach_documents(
    records: list[PlatformRecord],
    news: list[TextDocument],
    comments: list[TextDocument],
) -> list[PlatformRecord]:
    """Return records with their document lists populated from flat corpora."""
    from dataclasses import replace

    by_platform_news: dict[str, list[TextDocument]] = {r.id: [] for r in records}
    by_platform_comments: dict[str, list[TextDocument]] = {r.id: [] for r in records}
    for doc in news:
        if doc.kind != NEWS:
            raise DataError(f"{doc.doc_id}: expected news document")
        if doc.platform_id in by_platform_news:
            by_platform_news[doc.platform_id].append(doc)
    for doc in comments:
        if doc.kind != COMMENT:
            raise DataError(f"{doc.doc_id}: expected comment document")
        if doc.platform_id in by_platform_comments:
            by_platform_comments[doc.platform_id].append(doc)
    out = []
    for record in records:
        out.append(
            replace(
                record,
                news_docs=tuple(sorted(by_platform_news[record.id], key=lambda d: d.doc_id)),
                comment_docs=tuple(sorted(by_platform_comments[record.id], key=lambda d: d.doc_id)),
            )
        )
    return out
