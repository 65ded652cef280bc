import time

import pytest

from omnirank.cleaning import clean_dataset
from omnirank.evaluation import EvalConfig, dataset_horizon, rolling_evaluate
from omnirank.features import FeatureConfig
from omnirank.nn.network import NetworkConfig, TrainConfig
from omnirank.synth import GeneratorConfig, default_lexicon, generate_universe


@pytest.fixture(scope="session")
def planted_run():
    """The reference end-to-end run: default generator (≈400 platforms,
    24 months), default feature/network/training configs, fixed seeds.
    Cleaned once, evaluated at the last month with next-month labels."""
    t0 = time.time()
    generator = GeneratorConfig()  # defaults: 400 platforms, 24 months, seed 42
    records, truth = generate_universe(generator)
    lexicon = default_lexicon()
    cleaned, cleaning_report = clean_dataset(records, lexicon)
    horizon = dataset_horizon(cleaned)
    config = EvalConfig(
        feature=FeatureConfig(seed=42),
        network=NetworkConfig(seed=42),
        train=TrainConfig(seed=42),
        seed=42,
    )
    cutoff = horizon - 1
    reports = rolling_evaluate(cleaned, [cutoff], config, lexicon, horizon=horizon)
    return {
        "generator": generator,
        "records": records,
        "cleaned": cleaned,
        "truth": truth,
        "lexicon": lexicon,
        "cleaning_report": cleaning_report,
        "horizon": horizon,
        "cutoff": cutoff,
        "report": reports[0],
        "elapsed_s": time.time() - t0,
    }
