"""Shared fixtures-in-code for the test suite."""
import numpy as np

from omnirank.domain import FeatureBundle, Label


def make_bundle(pid, label, rng, planted=0.0):
    """Synthetic bundle; `planted` shifts static/index features by the label."""
    shift = planted * (1.0 if label is Label.NORMAL else -1.0)
    return FeatureBundle(
        platform_id=pid,
        cutoff_month=550,
        x_s_num=rng.normal(size=4) + shift,
        x_s_cat=(rng.random(size=(3, 10)) < 0.15).astype(float),
        x_di=rng.normal(size=(8, 4)) + shift,
        x_dn=rng.normal(size=(8, 7)),
        x_dc=rng.normal(size=(8, 4)),
        kg_vec=rng.normal(size=2),
        label_at_cutoff=label,
    )


def toy_bundles(n=40, planted=2.0, seed=0):
    rng = np.random.default_rng(seed)
    return [
        make_bundle(f"p{i:03d}", Label.NORMAL if i % 2 == 0 else Label.PROBLEM, rng, planted)
        for i in range(n)
    ]
