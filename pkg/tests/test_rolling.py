"""Rolling-protocol behavior over multiple months (reduced scale)."""
import numpy as np
import pytest

from omnirank.errors import DataError
from omnirank.evaluation import EvalConfig, rolling_evaluate
from omnirank.features import FeatureConfig
from omnirank.nn.network import NetworkConfig, TrainConfig
from omnirank.synth import GeneratorConfig, default_lexicon, generate_universe


def small_eval_config(seed=6):
    return EvalConfig(
        folds=3,
        feature=FeatureConfig(window_months=6, lda_fit_iters=12, lda_infer_iters=4, seed=seed),
        network=NetworkConfig(seed=seed),
        train=TrainConfig(epochs=10, seed=seed),
        seed=seed,
        include_baseline=False,
    )


@pytest.fixture(scope="module")
def universe():
    generator = GeneratorConfig(n_platforms=80, horizon_months=16, seed=23)
    records, _ = generate_universe(generator)
    return generator, records, default_lexicon()


def spearman(xs, ys):
    rx = np.argsort(np.argsort(xs))
    ry = np.argsort(np.argsort(ys))
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    return float((rx * ry).sum() / np.sqrt((rx**2).sum() * (ry**2).sum()))


class TestRolling:
    def test_six_months_auc_trend_non_negative(self, universe):
        generator, records, lexicon = universe
        horizon = generator.start_month + generator.horizon_months - 1
        months = list(range(horizon - 6, horizon))
        reports = rolling_evaluate(records, months, small_eval_config(), lexicon, horizon=horizon)
        assert [r.cutoff_month for r in reports] == months
        aucs = [r.auc for r in reports]
        assert spearman(np.arange(len(aucs)), np.array(aucs)) >= 0.0

    def test_single_month(self, universe):
        generator, records, lexicon = universe
        horizon = generator.start_month + generator.horizon_months - 1
        reports = rolling_evaluate(records, [horizon - 1], small_eval_config(), lexicon, horizon=horizon)
        assert len(reports) == 1
        assert sum(reports[0].histogram["normal"]) + sum(reports[0].histogram["problem"]) == reports[0].n_platforms

    def test_empty_month_list(self, universe):
        generator, records, lexicon = universe
        assert rolling_evaluate(records, [], small_eval_config(), lexicon) == []

    def test_month_at_horizon_rejected(self, universe):
        generator, records, lexicon = universe
        horizon = generator.start_month + generator.horizon_months - 1
        with pytest.raises(DataError):
            rolling_evaluate(records, [horizon], small_eval_config(), lexicon, horizon=horizon)

    def test_too_few_platforms_rejected(self, universe):
        generator, records, lexicon = universe
        horizon = generator.start_month + generator.horizon_months - 1
        config = small_eval_config()
        with pytest.raises(DataError):
            rolling_evaluate(records[:4], [horizon - 1], config, lexicon, horizon=horizon)
