"""Lexicon-based sentiment polarity for news and comments.

A deliberately small stand-in scorer: polarity is the signed count of
lexicon hits, with a hit's sign flipped when the immediately preceding token
is a negation word. Ties (polarity 0) classify as positive.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Iterable

from .errors import DataError

log = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset[str]
    negative: frozenset[str]
    negation: frozenset[str]

    def __post_init__(self):
        overlap = self.positive & self.negative
        if overlap:
            raise DataError(f"lexicon tokens both positive and negative: {sorted(overlap)[:5]}")


def make_lexicon(positive: Iterable[str], negative: Iterable[str], negation: Iterable[str] = ()) -> SentimentLexicon:
    return SentimentLexicon(frozenset(positive), frozenset(negative), frozenset(negation))


def polarity(tokens: Iterable[str], lexicon: SentimentLexicon) -> int:
    """Signed hit count; negation flips the hit that immediately follows it."""
    score = 0
    prev = None
    for token in tokens:
        hit = 0
        if token in lexicon.positive:
            hit = 1
        elif token in lexicon.negative:
            hit = -1
        if hit and prev in lexicon.negation:
            hit = -hit
        score += hit
        prev = token
    return score


def sentiment_score(tokens: Iterable[str], lexicon: SentimentLexicon) -> str:
    tokens = list(tokens)
    pol = polarity(tokens, lexicon)
    if pol == 0 and not any(t in lexicon.positive or t in lexicon.negative for t in tokens):
        log.debug("no lexicon hits; defaulting to positive (low confidence)")
    return POSITIVE if pol >= 0 else NEGATIVE


def sentiment_clarity(tokens: Iterable[str], lexicon: SentimentLexicon) -> float:
    """|polarity| normalized by hit count, in [0,1]; 0 when no hits."""
    tokens = list(tokens)
    hits = sum(1 for t in tokens if t in lexicon.positive or t in lexicon.negative)
    if hits == 0:
        return 0.0
    return min(1.0, abs(polarity(tokens, lexicon)) / hits)


def save_lexicon(path: str, lexicon: SentimentLexicon) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "positive": sorted(lexicon.positive),
                "negative": sorted(lexicon.negative),
                "negation": sorted(lexicon.negation),
            },
            fh,
            ensure_ascii=False,
            sort_keys=True,
        )


def load_lexicon(path: str) -> SentimentLexicon:
    if not os.path.exists(path):
        raise DataError(f"missing lexicon file: {path}")
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        return make_lexicon(data["positive"], data["negative"], data.get("negation", []))
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed lexicon file {path}: {exc}") from exc
