"""Synthetic platform universe with a planted, tunable risk signal.

Each platform draws a latent risk r in [0,1]. Problem status follows a steep
logistic in r (offset calibrated so the expected problem count matches the
configured fraction exactly). What the features can see is the blend
r_obs = w*r + (1-w)*noise with w = min(signal_strength, 1), so
signal_strength=0 yields chance-level learnability and 1 the full plant.

r_obs drives every branch: advertised rate (with a nature-dependent slope, a
deliberately nonlinear cross-branch interaction), registered capital, index
trends, news topic mixtures, comment sentiment, officer sharing and missing
attributes. Problem platforms additionally ramp up "distress" in the months
before failure and hold it afterwards; series keep reporting through the
horizon so silence alone never marks a failure.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass

import numpy as np

from .dataio import write_docs, write_platforms
from .domain import (
    COMMENT,
    NEWS,
    Label,
    MonthlySeries,
    PlatformRecord,
    TextDocument,
    month_index,
)
from .errors import ConfigError
from .seeding import derive_rng
from .sentiment import SentimentLexicon, make_lexicon, save_lexicon

DEFAULT_START_MONTH = month_index(2014, 1)


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 42
    n_platforms: int = 400
    problem_fraction: float = 1378 / 3050
    horizon_months: int = 24
    signal_strength: float = 1.0
    vocab_news: int = 400
    vocab_comments: int = 250
    n_topics_true: int = 5
    interest_risk_coupling: float = 5.0
    start_month: int = DEFAULT_START_MONTH
    news_rate: float = 0.35  # mean news docs per platform-month
    comment_rate: float = 0.7  # mean comments per platform-month
    label_steepness: float = 9.0
    n_people: int = 700
    n_positions: int = 40
    n_tags: int = 15
    n_natures: int = 8
    n_regions: int = 29
    n_guarantee_modes: int = 4
    missing_rate: float = 0.05

    def validate(self) -> None:
        if self.n_platforms < 2:
            raise ConfigError(f"n_platforms must be >= 2, got {self.n_platforms}")
        if not 0.0 < self.problem_fraction < 1.0:
            raise ConfigError(f"problem_fraction must be in (0,1), got {self.problem_fraction}")
        if self.horizon_months < 3:
            raise ConfigError("horizon_months must be >= 3")
        if self.signal_strength < 0:
            raise ConfigError("signal_strength must be >= 0")
        if self.n_topics_true < 1 or self.n_topics_true > self.vocab_news:
            raise ConfigError("n_topics_true must be in [1, vocab_news]")


INDEX_CHANNELS = (
    "volume",
    "rate",
    "net_inflow",
    "investor_count",
    "borrower_count",
    "loan_count",
    "mean_term",
)

NUMERIC_FIELDS = ("registered_capital", "interest_rate", "guarantee_amount", "team_size")

N_JUNK_TOKENS = 6
N_SENT_TOKENS = 30


def _sigmoid(x: np.ndarray | float):
    return 1.0 / (1.0 + np.exp(-x))


def planted_topics(rng: np.random.Generator, k: int, vocab_size: int) -> np.ndarray:
    """Block-structured topic-word distributions with light global smoothing."""
    topic_word = np.full((k, vocab_size), 0.05 / vocab_size)
    bounds = np.linspace(0, vocab_size, k + 1).astype(int)
    for topic in range(k):
        lo, hi = bounds[topic], bounds[topic + 1]
        block = rng.dirichlet(np.full(hi - lo, 0.8))
        topic_word[topic, lo:hi] += 0.95 * block
    return topic_word / topic_word.sum(axis=1, keepdims=True)


def sample_topic_corpus(
    seed: int,
    n_docs: int,
    vocab_size: int,
    k: int,
    mean_doc_len: float = 20.0,
    doc_topic_conc: float = 0.5,
) -> tuple[list[list[str]], np.ndarray]:
    """Corpus drawn from planted topics, with the ground-truth topic matrix."""
    rng = derive_rng(seed, "topic-corpus")
    vocab = [f"nw{i:03d}" for i in range(vocab_size)]
    topic_word = planted_topics(rng, k, vocab_size)
    cums = np.cumsum(topic_word, axis=1)
    docs = []
    for _ in range(n_docs):
        theta = rng.dirichlet(np.full(k, doc_topic_conc))
        length = max(3, rng.poisson(mean_doc_len))
        z_counts = rng.multinomial(length, theta)
        tokens: list[str] = []
        for topic, count in enumerate(z_counts):
            if count:
                ids = np.searchsorted(cums[topic], rng.random(count))
                tokens.extend(vocab[i] for i in ids)
        rng.shuffle(tokens)
        docs.append(tokens)
    return docs, topic_word


def default_lexicon() -> SentimentLexicon:
    positive = [f"pos_{i:02d}" for i in range(N_SENT_TOKENS)]
    negative = [f"neg_{i:02d}" for i in range(N_SENT_TOKENS)]
    return make_lexicon(positive, negative, ["not_0", "not_1"])


def _calibrate_offset_bisect(risk: np.ndarray, steepness: float, target: float) -> float:
    """Offset r0 with mean sigmoid(k*(r-r0)) == target, by bisection."""
    lo, hi = -2.0, 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        mean = float(np.mean(_sigmoid(steepness * (risk - mid))))
        if mean > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def generate_universe(config: GeneratorConfig) -> tuple[list[PlatformRecord], dict]:
    """Deterministic synthetic dataset plus ground truth for assertions."""
    config.validate()
    n = config.n_platforms
    w = min(config.signal_strength, 1.0)
    start = config.start_month
    end = start + config.horizon_months - 1

    risk_rng = derive_rng(config.seed, "risk")
    risk = risk_rng.random(n)
    obs_noise = risk_rng.random(n)
    r_obs = w * risk + (1.0 - w) * obs_noise

    # labels: steep logistic in true risk, calibrated to the target fraction
    offset = _calibrate_offset_bisect(risk, config.label_steepness, config.problem_fraction)
    p_problem = _sigmoid(config.label_steepness * (risk - offset))
    is_problem = risk_rng.random(n) < p_problem

    topics_rng = derive_rng(config.seed, "topics")
    news_vocab = [f"nw{i:03d}" for i in range(config.vocab_news)]
    topic_word = planted_topics(topics_rng, config.n_topics_true, config.vocab_news)
    topic_cums = np.cumsum(topic_word, axis=1)
    # topic risk loading: first two topics lean safe, last two lean risky
    k = config.n_topics_true
    safe_mask = np.zeros(k)
    risky_mask = np.zeros(k)
    safe_mask[: max(1, k // 2)] = 1.0
    risky_mask[-max(1, k // 2):] = 1.0

    comment_vocab = [f"cw{i:03d}" for i in range(config.vocab_comments)]
    comment_weights = 1.0 / (np.arange(config.vocab_comments) + 5.0)
    comment_weights /= comment_weights.sum()
    comment_cum = np.cumsum(comment_weights)
    junk_tokens = [f"junk_{i}" for i in range(N_JUNK_TOKENS)]
    pos_tokens = [f"pos_{i:02d}" for i in range(N_SENT_TOKENS)]
    neg_tokens = [f"neg_{i:02d}" for i in range(N_SENT_TOKENS)]

    # per-nature additive rate offsets (flavor noise on the advertised rate)
    slope_rng = derive_rng(config.seed, "nature-slopes")
    nature_slopes = np.linspace(0.2, 1.8, config.n_natures)
    slope_rng.shuffle(nature_slopes)

    region_weights = 1.0 / (np.arange(config.n_regions) + 2.0)
    region_weights /= region_weights.sum()
    # complaint culture varies by region, independently of risk
    bias_rng = derive_rng(config.seed, "region-bias")
    region_biases = bias_rng.uniform(-0.1, 0.2, size=config.n_regions)

    records: list[PlatformRecord] = []
    news_counter = 0
    comment_counter = 0
    risky_people_cut = max(1, config.n_people // 4)

    for i in range(n):
        rng = derive_rng(config.seed, "platform", i)
        r = float(r_obs[i])
        online = start + int(rng.integers(0, config.horizon_months // 2 + 1))
        problem = bool(is_problem[i])
        failure = None
        if problem:
            lo = min(online + 1, end)
            failure = int(rng.integers(lo, end + 1))

        nature_idx = int(rng.integers(config.n_natures))
        nature = f"nature_{nature_idx}"
        region_idx = int(rng.choice(config.n_regions, p=region_weights))
        region = f"region_{region_idx:02d}"
        guarantee = f"guarantee_{int(rng.integers(config.n_guarantee_modes))}"
        # first tags lean risky, last ones lean safe
        tag_weights = np.ones(config.n_tags)
        tag_weights[:3] += 0.5 * r
        tag_weights[-3:] += 0.5 * (1 - r)
        tag_weights /= tag_weights.sum()
        n_tags = 1 + int(rng.integers(3))
        tags = tuple(
            sorted(f"tag_{t:02d}" for t in rng.choice(config.n_tags, size=n_tags, replace=False, p=tag_weights))
        )

        log_capital = rng.normal(8.8, 0.6) - 0.15 * r
        capital = math.exp(log_capital)
        size_z = (log_capital - 8.8) / 0.6  # roughly standard normal
        # how strongly the advertised rate reflects risk depends on platform
        # size: to read the rate you must condition on capital (a product,
        # invisible to a linear scorer)
        rate_slope = 0.3 + 1.4 * float(_sigmoid(2.0 * size_z))
        nature_offset = 0.6 * (nature_slopes[nature_idx] - 1.0)
        interest_rate = float(
            7.5 + config.interest_risk_coupling * r * rate_slope + nature_offset + rng.normal(0, 0.5)
        )
        guarantee_amount = math.exp(rng.normal(6.0, 0.8) - 0.1 * r)
        team_size = float(5 + rng.poisson(10))
        numeric: dict[str, float | None] = {
            "registered_capital": capital,
            "interest_rate": interest_rate,
            "guarantee_amount": guarantee_amount,
            "team_size": team_size,
        }
        categorical: dict[str, object] = {
            "nature": nature,
            "region": region,
            "guarantee_mode": guarantee,
            "tags": tags,
        }
        # riskier platforms are likelier to leave fields blank
        p_missing = config.missing_rate * (0.5 + 1.5 * r)
        for field in ("guarantee_amount", "team_size"):
            if rng.random() < p_missing:
                numeric[field] = None
        for field in ("nature", "region"):
            if rng.random() < p_missing * 0.6:
                categorical[field] = None

        n_officers = 2 + int(rng.integers(3))
        officers = []
        for _ in range(n_officers):
            if rng.random() < 0.2 + 0.4 * r:
                person = int(rng.integers(risky_people_cut))
            else:
                person = int(rng.integers(risky_people_cut, config.n_people))
            position = person % config.n_positions
            officers.append(f"person_{person:04d}::position_{position:02d}")
        officers = tuple(sorted(set(officers)))

        # distress: problems ramp up over the 6 months before failure and
        # hold the level afterwards; normals drift mildly with tenure
        def distress(month: int) -> float:
            if problem and failure is not None:
                ramp = min(1.0, max(0.0, (month - (failure - 6)) / 6.0))
                return w * (0.4 + 0.6 * r) * ramp
            tenure = (month - online) / max(1, config.horizon_months)
            return w * 0.1 * r * tenure

        base_volume = math.exp(5.2 + 0.7 * rng.normal())
        base_investors = math.exp(4.3 + 0.6 * rng.normal())
        base_borrowers = math.exp(3.9 + 0.6 * rng.normal())
        base_loans = math.exp(3.5 + 0.5 * rng.normal())
        # risky platforms run noisier books, and distress makes the swings
        # wild: a second-moment signal a linear reader of levels cannot see
        base_churn = 1.0 + 2.0 * w * r
        # where distress shows depends on platform size: big platforms bleed
        # investors first, small ones bleed volume/inflow first
        is_big = size_z > 0.0
        volume_hit, investor_hit = (0.04, 0.45) if is_big else (0.45, 0.04)
        # benign promotion dips hit the channel this size class does NOT use
        # for distress, so a dip only signals risk combined with capital
        dip_start = None
        dip_depth = 0.0
        if rng.random() < 0.65:
            dip_start = online + int(rng.integers(0, config.horizon_months))
            dip_depth = 0.35 + 0.3 * rng.random()
        series_points: dict[str, list[tuple[int, float]]] = {c: [] for c in INDEX_CHANNELS}
        for month in range(online, end + 1):
            tau = (month - online) / max(1, config.horizon_months)
            d = distress(month)
            churn = base_churn + 7.0 * w * d
            benign = dip_depth if dip_start is not None and dip_start <= month < dip_start + 4 else 0.0
            volume_dip = volume_hit * d + (benign if is_big else 0.0)
            investor_dip = investor_hit * d + (0.0 if is_big else benign)
            eps = rng.normal(size=7)
            volume = float(
                base_volume * (1 + 0.25 * tau) * (1 - volume_dip) * math.exp(0.08 * churn * eps[0])
            )
            series_points["volume"].append((month, volume))
            series_points["rate"].append((month, float(interest_rate + 0.25 * eps[1])))
            inflow = float(volume * (0.18 * (1 - 1.7 * volume_dip) + 0.06 * churn * eps[2]))
            series_points["net_inflow"].append((month, inflow))
            series_points["investor_count"].append(
                (
                    month,
                    float(
                        base_investors * (1 + 0.3 * tau) * (1 - investor_dip) * math.exp(0.1 * churn * eps[3])
                    ),
                )
            )
            series_points["borrower_count"].append(
                (month, float(base_borrowers * (1 + 0.25 * tau) * (1 - 0.25 * investor_dip) * math.exp(0.1 * churn * eps[4])))
            )
            series_points["loan_count"].append(
                (month, float(base_loans * (1 + 0.2 * tau) * (1 - 0.15 * d) * math.exp(0.1 * churn * eps[5])))
            )
            series_points["mean_term"].append((month, float(6.0 + 3.0 * _sigmoid(eps[6]))))

        news_docs: list[TextDocument] = []
        comment_docs: list[TextDocument] = []
        complaint_bias = float(region_biases[region_idx])
        user_pool = [f"user_{i:04d}_{j}" for j in range(3 + int(rng.poisson(5)))]
        user_weights = 1.0 / (np.arange(len(user_pool)) + 1.0)
        user_weights /= user_weights.sum()
        for month in range(online, end + 1):
            d = distress(month)
            mix_r = min(1.0, r + 0.5 * d)
            prior = np.ones(k) + 0.6 * (1 - mix_r) * safe_mask + 0.6 * mix_r * risky_mask
            prior /= prior.sum()

            n_news = rng.poisson(config.news_rate * (1 + 0.25 * d))
            for _ in range(n_news):
                theta = rng.dirichlet(8.0 * prior)
                length = 8 + rng.poisson(6)
                z_counts = rng.multinomial(length, theta)
                tokens: list[str] = []
                for topic, count in enumerate(z_counts):
                    if count:
                        ids = np.searchsorted(topic_cums[topic], rng.random(count))
                        tokens.extend(news_vocab[t] for t in ids)
                rng.shuffle(tokens)
                p_neg = float(np.clip(0.25 + 0.15 * w * (r - 0.4) + 0.15 * d, 0.02, 0.95))
                for _ in range(1 + int(length > 12)):
                    pool = neg_tokens if rng.random() < p_neg else pos_tokens
                    tokens.append(pool[int(rng.integers(len(pool)))])
                news_docs.append(
                    TextDocument(
                        doc_id=f"n{news_counter:06d}",
                        platform_id=f"p{i:04d}",
                        month=month,
                        day=1 + int(rng.integers(28)),
                        tokens=tuple(tokens),
                        kind=NEWS,
                    )
                )
                news_counter += 1
                if rng.random() < 0.06:  # syndicated reprint of the same story
                    news_docs.append(
                        TextDocument(
                            doc_id=f"n{news_counter:06d}",
                            platform_id=f"p{i:04d}",
                            month=month,
                            day=1 + int(rng.integers(28)),
                            tokens=tuple(tokens),
                            kind=NEWS,
                        )
                    )
                    news_counter += 1

            n_comments = rng.poisson(config.comment_rate)
            for _ in range(n_comments):
                author = user_pool[int(rng.choice(len(user_pool), p=user_weights))]
                if rng.random() < 0.12:
                    tokens = tuple(
                        junk_tokens[int(rng.integers(N_JUNK_TOKENS))]
                        for _ in range(2 + int(rng.integers(2)))
                    )
                else:
                    length = 4 + rng.poisson(4)
                    ids = np.searchsorted(comment_cum, rng.random(length))
                    body = [comment_vocab[t] for t in ids]
                    p_neg = float(np.clip(0.3 + complaint_bias + 0.15 * w * (r - 0.45) + 0.15 * d, 0.02, 0.98))
                    n_sent = 1 + int(rng.random() < 0.7)
                    for _ in range(n_sent):
                        pool = neg_tokens if rng.random() < p_neg else pos_tokens
                        body.append(pool[int(rng.integers(len(pool)))])
                    rng.shuffle(body)
                    tokens = tuple(body)
                comment_docs.append(
                    TextDocument(
                        doc_id=f"c{comment_counter:06d}",
                        platform_id=f"p{i:04d}",
                        month=month,
                        day=1 + int(rng.integers(28)),
                        tokens=tokens,
                        kind=COMMENT,
                        author=author,
                    )
                )
                comment_counter += 1

        records.append(
            PlatformRecord(
                id=f"p{i:04d}",
                name=f"Platform {i:04d}",
                online_month=online,
                status=Label.PROBLEM if problem else Label.NORMAL,
                failure_month=failure,
                static_numeric=numeric,
                static_categorical=categorical,
                index_series={c: MonthlySeries(tuple(points)) for c, points in series_points.items()},
                news_docs=tuple(news_docs),
                comment_docs=tuple(comment_docs),
                officers=officers,
            )
        )

    truth = {
        "latent_risk": {f"p{i:04d}": float(risk[i]) for i in range(n)},
        "observable_risk": {f"p{i:04d}": float(r_obs[i]) for i in range(n)},
        "topic_word": topic_word.tolist(),
        "config": asdict(config),
    }
    return records, truth


def write_universe(out_dir: str, records: list[PlatformRecord], truth: dict) -> None:
    os.makedirs(out_dir, exist_ok=True)
    write_platforms(os.path.join(out_dir, "platforms.jsonl"), records)
    write_docs(os.path.join(out_dir, "news.jsonl"), (d for r in records for d in r.news_docs))
    write_docs(os.path.join(out_dir, "comments.jsonl"), (d for r in records for d in r.comment_docs))
    with open(os.path.join(out_dir, "truth.json"), "w", encoding="utf-8") as fh:
        json.dump(truth, fh, ensure_ascii=False, sort_keys=True)
    save_lexicon(os.path.join(out_dir, "lexicon.json"), default_lexicon())
