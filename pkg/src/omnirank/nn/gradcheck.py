"""Finite-difference verification of the hand-written gradients.

Central differences (L(theta+eps) - L(theta-eps)) / 2*eps per sampled
parameter, compared against the analytic gradient. Parameters are sampled
per layer kind so every kind gets coverage regardless of its share of the
parameter vector. Run with dropout disabled (train=False everywhere).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import NumericError
from ..seeding import derive_rng
from .layers import ParameterStore

DEFAULT_EPSILON = 1e-5
DEFAULT_SAMPLES_PER_KIND = 200
REL_ERR_FLOOR = 1e-6  # denominators below this count as zero gradients


@dataclass
class GradCheckResult:
    max_rel_err: float
    per_kind: dict[str, float] = field(default_factory=dict)
    n_checked: int = 0

    def failing_kinds(self, tolerance: float) -> list[str]:
        return sorted(k for k, v in self.per_kind.items() if v >= tolerance)

    def report(self, tolerance: float) -> str:
        lines = [f"max relative error {self.max_rel_err:.3e} over {self.n_checked} parameters"]
        for kind in self.failing_kinds(tolerance):
            lines.append(f"  FAIL {kind}: {self.per_kind[kind]:.3e} >= {tolerance:.1e}")
        return "\n".join(lines)


def grad_check(
    loss_fn: Callable[[], float],
    grad_fn: Callable[[], np.ndarray],
    store: ParameterStore,
    epsilon: float = DEFAULT_EPSILON,
    samples_per_kind: int = DEFAULT_SAMPLES_PER_KIND,
    seed: int = 0,
) -> GradCheckResult:
    """Compare analytic gradients against central finite differences.

    loss_fn recomputes the scalar loss from the current flat parameters;
    grad_fn returns the full analytic gradient at the unperturbed point.
    """
    analytic = np.array(grad_fn(), dtype=float)
    base = loss_fn()
    if not np.isfinite(base) or not np.all(np.isfinite(analytic)):
        raise NumericError("non-finite loss or gradient before checking")

    rng = derive_rng(seed, "grad-check")
    theta = store.theta
    result = GradCheckResult(max_rel_err=0.0)
    for kind, segments in store.segments_by_kind().items():
        indices = np.concatenate([np.arange(a, b) for a, b in segments])
        if indices.size > samples_per_kind:
            indices = rng.choice(indices, size=samples_per_kind, replace=False)
        worst = 0.0
        for i in indices:
            saved = theta[i]
            theta[i] = saved + epsilon
            up = loss_fn()
            theta[i] = saved - epsilon
            down = loss_fn()
            theta[i] = saved
            fd = (up - down) / (2.0 * epsilon)
            denom = max(abs(fd), abs(analytic[i]), REL_ERR_FLOOR)
            worst = max(worst, abs(fd - analytic[i]) / denom)
        result.per_kind[kind] = worst
        result.max_rel_err = max(result.max_rel_err, worst)
        result.n_checked += int(indices.size)
    return result


def grad_check_model(model, batch, labels, epsilon: float = DEFAULT_EPSILON,
                     samples_per_kind: int = DEFAULT_SAMPLES_PER_KIND, seed: int = 0) -> GradCheckResult:
    """Convenience wrapper for anything exposing loss / loss_and_grad / store."""

    def loss_fn() -> float:
        return model.loss(batch, labels, train=False)

    def grad_fn() -> np.ndarray:
        model.loss_and_grad(batch, labels, train=False)
        return model.store.grad.copy()

    return grad_check(loss_fn, grad_fn, model.store, epsilon, samples_per_kind, seed)
