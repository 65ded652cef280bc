"""Run configuration: INI file with sections, env overrides for paths/seed.

Example:

    [run]
    seed = 42
    data_dir = data/raw
    out_dir = out

    [features]
    window_months = 12
    lda_k = 5
    lda_fit_iters = 200

    [train]
    epochs = 60
    batch_size = 32

    [evaluate]
    months = 2015-10:2015-11
    folds = 5

Environment variables OMNIRANK_SEED, OMNIRANK_DATA_DIR and OMNIRANK_OUT_DIR
override only the seed and the two paths.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, replace

from .domain import parse_month
from .errors import ConfigError
from .features import FeatureConfig
from .nn.network import NetworkConfig, TrainConfig


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    data_dir: str = "data"
    out_dir: str = "out"
    lexicon_path: str | None = None  # default: <data_dir>/lexicon.json
    ugc_threshold: float = 0.2
    dedup_jaccard: float = 0.9
    feature: FeatureConfig = FeatureConfig()
    network: NetworkConfig = NetworkConfig()
    train: TrainConfig = TrainConfig()
    eval_months: tuple[int, ...] = ()
    folds: int = 5
    normal_fraction: float = 0.6
    dashboard_limit: int = 100

    def resolved_lexicon_path(self) -> str:
        return self.lexicon_path or os.path.join(self.data_dir, "lexicon.json")


def parse_months_range(text: str) -> tuple[int, ...]:
    """"2015-11:2016-04" -> inclusive range of month indices; single months
    and comma lists also accepted."""
    months: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo_text, hi_text = part.split(":", 1)
            lo, hi = parse_month(lo_text), parse_month(hi_text)
            if hi < lo:
                raise ConfigError(f"month range end before start: {part}")
            months.extend(range(lo, hi + 1))
        else:
            months.append(parse_month(part))
    return tuple(sorted(set(months)))


def _get(parser: configparser.ConfigParser, section: str, option: str, cast, default):
    if not parser.has_option(section, option):
        return default
    raw = parser.get(section, option)
    try:
        if cast is bool:
            return parser.getboolean(section, option)
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {option}: cannot parse {raw!r}") from exc


def load_config(path: str | None = None) -> RunConfig:
    parser = configparser.ConfigParser()
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        parser.read(path)

    seed = _get(parser, "run", "seed", int, 42)
    data_dir = _get(parser, "run", "data_dir", str, "data")
    out_dir = _get(parser, "run", "out_dir", str, "out")
    lexicon_path = _get(parser, "run", "lexicon", str, None)

    feature = FeatureConfig(
        window_months=_get(parser, "features", "window_months", int, 12),
        lda_k=_get(parser, "features", "lda_k", int, 5),
        lda_alpha=_get(parser, "features", "lda_alpha", float, None),
        lda_eta=_get(parser, "features", "lda_eta", float, 0.01),
        lda_fit_iters=_get(parser, "features", "lda_fit_iters", int, 200),
        lda_infer_iters=_get(parser, "features", "lda_infer_iters", int, 30),
        seed=seed,
    )
    network = NetworkConfig(
        branch_dim=_get(parser, "network", "branch_dim", int, 16),
        fusion_dim=_get(parser, "network", "fusion_dim", int, 16),
        hidden_dim=_get(parser, "network", "hidden_dim", int, 64),
        lstm_hidden=_get(parser, "network", "lstm_hidden", int, 16),
        conv_filters=_get(parser, "network", "conv_filters", int, 16),
        conv_width=_get(parser, "network", "conv_width", int, 3),
        dropout=_get(parser, "network", "dropout", float, 0.3),
        embedding_dim=_get(parser, "network", "embedding_dim", int, 32),
        seed=seed,
    )
    train = TrainConfig(
        optimizer=_get(parser, "train", "optimizer", str, "adam"),
        learning_rate=_get(parser, "train", "learning_rate", float, 1e-3),
        beta1=_get(parser, "train", "beta1", float, 0.9),
        beta2=_get(parser, "train", "beta2", float, 0.999),
        epsilon=_get(parser, "train", "epsilon", float, 1e-8),
        epochs=_get(parser, "train", "epochs", int, 60),
        batch_size=_get(parser, "train", "batch_size", int, 32),
        seed=seed,
        patience=_get(parser, "train", "patience", int, 0),
        val_fraction=_get(parser, "train", "val_fraction", float, 0.15),
    )
    months_text = _get(parser, "evaluate", "months", str, "")
    config = RunConfig(
        seed=seed,
        data_dir=data_dir,
        out_dir=out_dir,
        lexicon_path=lexicon_path,
        ugc_threshold=_get(parser, "cleaning", "ugc_threshold", float, 0.2),
        dedup_jaccard=_get(parser, "cleaning", "dedup_jaccard", float, 0.9),
        feature=feature,
        network=network,
        train=train,
        eval_months=parse_months_range(months_text) if months_text else (),
        folds=_get(parser, "evaluate", "folds", int, 5),
        normal_fraction=_get(parser, "evaluate", "normal_fraction", float, 0.6),
        dashboard_limit=_get(parser, "dashboard", "limit", int, 100),
    )
    return apply_env_overrides(config)


def load_generator_config(path: str | None):
    """GeneratorConfig from the [generator] section of an INI file."""
    from .synth import GeneratorConfig

    parser = configparser.ConfigParser()
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        parser.read(path)
    section = "generator"
    base = GeneratorConfig()
    return GeneratorConfig(
        seed=_get(parser, section, "seed", int, _get(parser, "run", "seed", int, base.seed)),
        n_platforms=_get(parser, section, "n_platforms", int, base.n_platforms),
        problem_fraction=_get(parser, section, "problem_fraction", float, base.problem_fraction),
        horizon_months=_get(parser, section, "horizon_months", int, base.horizon_months),
        signal_strength=_get(parser, section, "signal_strength", float, base.signal_strength),
        vocab_news=_get(parser, section, "vocab_news", int, base.vocab_news),
        vocab_comments=_get(parser, section, "vocab_comments", int, base.vocab_comments),
        n_topics_true=_get(parser, section, "n_topics_true", int, base.n_topics_true),
        interest_risk_coupling=_get(
            parser, section, "interest_risk_coupling", float, base.interest_risk_coupling
        ),
        start_month=_get(parser, section, "start_month", int, base.start_month),
        news_rate=_get(parser, section, "news_rate", float, base.news_rate),
        comment_rate=_get(parser, section, "comment_rate", float, base.comment_rate),
        missing_rate=_get(parser, section, "missing_rate", float, base.missing_rate),
    )


def apply_env_overrides(config: RunConfig) -> RunConfig:
    """Only paths and the seed may come from the environment."""
    env_seed = os.environ.get("OMNIRANK_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"OMNIRANK_SEED must be an integer, got {env_seed!r}") from exc
        config = replace(
            config,
            seed=seed,
            feature=replace(config.feature, seed=seed),
            network=replace(config.network, seed=seed),
            train=replace(config.train, seed=seed),
        )
    data_dir = os.environ.get("OMNIRANK_DATA_DIR")
    if data_dir:
        config = replace(config, data_dir=data_dir)
    out_dir = os.environ.get("OMNIRANK_OUT_DIR")
    if out_dir:
        config = replace(config, out_dir=out_dir)
    return config


def validate_config(config: RunConfig) -> None:
    if config.feature.window_months < 1:
        raise ConfigError("window_months must be >= 1")
    if config.feature.lda_k < 1:
        raise ConfigError("lda_k must be >= 1")
    if not 0.0 < config.normal_fraction < 1.0:
        raise ConfigError("normal_fraction must be in (0,1)")
    if not 0.0 <= config.ugc_threshold:
        raise ConfigError("ugc_threshold must be >= 0")
    if config.folds < 2:
        raise ConfigError("folds must be >= 2")
    config.train.validate()
