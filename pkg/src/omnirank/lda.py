"""Topic model: collapsed Gibbs sampling LDA.

Token-topic assignments are resampled sequentially from count statistics;
the fitted model keeps the raw topic-word counts so the smoothed topic-word
distributions can be recovered exactly. The sampler's inner loop runs on
plain Python lists: per-token work is a handful of float ops and numpy's
per-element overhead would dominate at this scale.
"""
from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .seeding import derive_pyrandom

log = logging.getLogger(__name__)

DEFAULT_ETA = 0.01
DEFAULT_FIT_ITERS = 500
DEFAULT_INFER_ITERS = 50
# the fit-time document prior (50/K) would flatten short documents toward
# uniform when reused at inference; proportions use a small prior instead
DEFAULT_INFER_ALPHA = 0.1


def default_alpha(k: int) -> float:
    return 50.0 / k


@dataclass
class LdaModel:
    k: int
    alpha: float
    eta: float
    vocab: tuple[str, ...]
    topic_word: np.ndarray  # (K, V) assignment counts
    iterations: int

    @property
    def vocab_index(self) -> dict[str, int]:
        cached = getattr(self, "_vocab_index", None)
        if cached is None:
            cached = {t: i for i, t in enumerate(self.vocab)}
            object.__setattr__(self, "_vocab_index", cached)
        return cached

    def topic_word_dist(self) -> np.ndarray:
        """Smoothed topic-word distributions; rows sum to 1."""
        v = len(self.vocab)
        counts = self.topic_word.astype(float)
        dist = (counts + self.eta) / (counts.sum(axis=1, keepdims=True) + v * self.eta)
        return dist


def _encode(docs: Sequence[Sequence[str]], vocab_index: dict[str, int]) -> list[list[int]]:
    return [[vocab_index[t] for t in doc if t in vocab_index] for doc in docs]


def lda_fit(
    docs: Sequence[Sequence[str]],
    k: int,
    alpha: float | None = None,
    eta: float = DEFAULT_ETA,
    iters: int = DEFAULT_FIT_ITERS,
    seed: int = 0,
) -> LdaModel:
    """Fit by collapsed Gibbs sampling; deterministic given the seed.

    Final assignment counts are read directly (no burn-in discard).
    """
    if not docs:
        raise DataError("lda_fit needs at least one document")
    if k < 1:
        raise DataError(f"topic count must be >= 1, got {k}")
    vocab = sorted({t for doc in docs for t in doc})
    v = len(vocab)
    if v == 0:
        raise DataError("empty vocabulary")
    if k > v:
        raise DataError(f"more topics ({k}) than distinct tokens ({v})")
    if alpha is None:
        alpha = default_alpha(k)

    vocab_index = {t: i for i, t in enumerate(vocab)}
    encoded = _encode(docs, vocab_index)
    rng = derive_pyrandom(seed, "lda-fit")

    n_kt = [[0] * v for _ in range(k)]
    n_dk = [[0] * k for _ in range(len(encoded))]
    n_k = [0] * k
    assignments: list[list[int]] = []
    for d, doc in enumerate(encoded):
        z_doc = []
        row = n_dk[d]
        for t in doc:
            z = rng.randrange(k)
            z_doc.append(z)
            n_kt[z][t] += 1
            row[z] += 1
            n_k[z] += 1
        assignments.append(z_doc)

    v_eta = v * eta
    topics = range(k)
    rand = rng.random
    for _ in range(iters):
        for d, doc in enumerate(encoded):
            z_doc = assignments[d]
            row = n_dk[d]
            for pos, t in enumerate(doc):
                z = z_doc[pos]
                n_kt[z][t] -= 1
                row[z] -= 1
                n_k[z] -= 1
                total = 0.0
                weights = []
                for j in topics:
                    w = (n_kt[j][t] + eta) / (n_k[j] + v_eta) * (row[j] + alpha)
                    total += w
                    weights.append(total)
                u = rand() * total
                z = 0
                while weights[z] < u:
                    z += 1
                z_doc[pos] = z
                n_kt[z][t] += 1
                row[z] += 1
                n_k[z] += 1

    return LdaModel(
        k=k,
        alpha=alpha,
        eta=eta,
        vocab=tuple(vocab),
        topic_word=np.array(n_kt, dtype=np.int64),
        iterations=iters,
    )


def lda_infer(
    model: LdaModel,
    doc: Sequence[str],
    iters: int = DEFAULT_INFER_ITERS,
    seed: int = 0,
    alpha: float | None = None,
) -> np.ndarray:
    """Topic proportions for one document under a fitted model.

    Out-of-vocabulary tokens are skipped; a document with no in-vocabulary
    tokens falls back to the uniform vector. Output sums to 1.
    """
    k = model.k
    tokens = [model.vocab_index[t] for t in doc if t in model.vocab_index]
    if not tokens:
        log.debug("document has no in-vocabulary tokens; returning uniform topics")
        return np.full(k, 1.0 / k)
    if alpha is None:
        alpha = DEFAULT_INFER_ALPHA
    phi = model.topic_word_dist()
    rng = derive_pyrandom(seed, "lda-infer")
    n_dk = [0] * k
    z_doc = []
    for t in tokens:
        z = rng.randrange(k)
        z_doc.append(z)
        n_dk[z] += 1
    phi_cols = [phi[:, t] for t in tokens]
    rand = rng.random
    for _ in range(iters):
        for pos, t in enumerate(tokens):
            z = z_doc[pos]
            n_dk[z] -= 1
            col = phi_cols[pos]
            total = 0.0
            weights = []
            for j in range(k):
                w = col[j] * (n_dk[j] + alpha)
                total += w
                weights.append(total)
            u = rand() * total
            z = 0
            while weights[z] < u:
                z += 1
            z_doc[pos] = z
            n_dk[z] += 1
    props = np.array([(c + alpha) for c in n_dk], dtype=float)
    return props / props.sum()


def top_words(model: LdaModel, topic: int, n: int) -> list[str]:
    """The n most probable tokens of a topic; ties break by token string."""
    if not 0 <= topic < model.k:
        raise DataError(f"topic index out of range: {topic}")
    if n <= 0:
        return []
    dist = model.topic_word_dist()[topic]
    order = sorted(zip(model.vocab, dist), key=lambda pair: (-pair[1], pair[0]))
    return [t for t, _ in order[: min(n, len(model.vocab))]]


def perplexity(
    model: LdaModel,
    docs: Sequence[Sequence[str]],
    infer_iters: int = DEFAULT_INFER_ITERS,
    seed: int = 0,
) -> float:
    """Held-out style perplexity from point-estimate mixtures."""
    phi = model.topic_word_dist()
    log_lik = 0.0
    n_tokens = 0
    for i, doc in enumerate(docs):
        theta = lda_infer(model, doc, iters=infer_iters, seed=seed + i)
        for token in doc:
            t = model.vocab_index.get(token)
            if t is None:
                continue
            log_lik += math.log(float(theta @ phi[:, t]))
            n_tokens += 1
    if n_tokens == 0:
        raise DataError("no in-vocabulary tokens to score")
    return math.exp(-log_lik / n_tokens)


def save_lda(path: str, model: LdaModel) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    payload = {
        "schema_version": 1,
        "k": model.k,
        "alpha": model.alpha,
        "eta": model.eta,
        "vocab": list(model.vocab),
        "topic_word": model.topic_word.tolist(),
        "iterations": model.iterations,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def load_lda(path: str) -> LdaModel:
    if not os.path.exists(path):
        raise DataError(f"missing model file: {path}")
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        return LdaModel(
            k=int(data["k"]),
            alpha=float(data["alpha"]),
            eta=float(data["eta"]),
            vocab=tuple(data["vocab"]),
            topic_word=np.array(data["topic_word"], dtype=np.int64),
            iterations=int(data["iterations"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model file {path}: {exc}") from exc
