"""Posterior-predictive confusion matrices and the variance-inflation audit.

Synthetic matrices answer "what would another lab observe at sample size n":
draw a cell-probability vector from the posterior, then a multinomial count
vector of size n from it.  Metrics computed on those counts spread wider than
the metric posterior itself; for cell proportions the inflation factor is
exactly 1 + alpha0/n under the Dirichlet model, which the audit checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CELL_NAMES, MetricId, metric_values
from .posterior import ModelKind, PosteriorModel, _draw_cell_probs, resolve_seed, sample_cpm

__all__ = [
    "SyntheticCmSet",
    "EmpiricalDistribution",
    "ComponentAudit",
    "SpreadComparison",
    "synthesize_cms",
    "empirical_metric_distribution",
    "variance_audit",
    "empirical_vs_true_spread",
]

# Distinct metric values on a count grid are separated by >= 1/n_synth**2;
# rounding to 12 decimals merges float noise without merging grid points.
_GROUP_DECIMALS = 12


@dataclass(frozen=True)
class SyntheticCmSet:
    """Integer count vectors drawn from the posterior predictive.

    ``draws`` has shape (d, 4) in (TP, FN, TN, FP) order; every row sums to
    ``n_synth``.
    """

    draws: np.ndarray
    n_synth: int
    source: PosteriorModel
    seed: int

    def __post_init__(self):
        draws = np.asarray(self.draws)
        if draws.ndim != 2 or draws.shape[1] != 4:
            raise ValueError(f"expected (d, 4) count vectors, got {draws.shape}")
        if np.any(draws < 0) or np.any(draws.sum(axis=1) != self.n_synth):
            raise ValueError("count vectors must be non-negative and sum to n_synth")
        draws.setflags(write=False)
        object.__setattr__(self, "draws", draws)


def synthesize_cms(
    model: PosteriorModel, n_synth: int, draws: int, seed: int | None = None
) -> SyntheticCmSet:
    """Draw ``draws`` synthetic confusion matrices of size ``n_synth``.

    Each draw uses a fresh cell-probability vector from the posterior, so the
    set reflects both sampling noise at size ``n_synth`` and posterior
    uncertainty.
    """
    if n_synth < 1:
        raise ValueError("n_synth must be at least 1")
    if draws < 1:
        raise ValueError("need at least one draw")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    theta = _draw_cell_probs(model, draws, rng)
    theta = theta / theta.sum(axis=1, keepdims=True)
    counts = rng.multinomial(n_synth, theta)
    return SyntheticCmSet(draws=counts, n_synth=n_synth, source=model, seed=seed)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Discrete distribution of a metric over synthetic matrices.

    ``values`` are the achievable metric values observed (a finite grid fixed
    by ``n_synth``), ``probs`` their frequencies.  Draws where the metric is
    undefined (zero denominator at small n) are reported in
    ``undefined_prob`` rather than dropped.
    """

    metric: MetricId
    values: np.ndarray
    probs: np.ndarray
    undefined_prob: float
    n_synth: int

    def __post_init__(self):
        for name in ("values", "probs"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def prob_of(self, value: float, atol: float = 1e-9) -> float:
        mask = np.abs(self.values - value) <= atol
        return float(self.probs[mask].sum())


def empirical_metric_distribution(
    cms: SyntheticCmSet, metric: MetricId
) -> EmpiricalDistribution:
    """Distribution of ``metric`` across the synthetic count vectors."""
    props = cms.draws / cms.n_synth
    raw = metric_values(props, metric, validate=False)
    finite = raw[np.isfinite(raw)]
    undefined_prob = 1.0 - finite.size / raw.size
    values, counts = np.unique(np.round(finite, _GROUP_DECIMALS), return_counts=True)
    return EmpiricalDistribution(
        metric=MetricId(metric),
        values=values,
        probs=counts / raw.size,
        undefined_prob=undefined_prob,
        n_synth=cms.n_synth,
    )


@dataclass(frozen=True)
class ComponentAudit:
    """Observed vs predicted variance inflation for one cell proportion.

    ``observed_ratio`` compares the Monte Carlo variance of the synthetic cell
    proportion against the exact posterior variance of the cell probability;
    ``predicted_ratio`` is the closed form 1 + alpha0/n.
    """

    component: str
    empirical_mean: float
    true_mean: float
    empirical_var: float
    true_var: float
    predicted_ratio: float
    observed_ratio: float


def variance_audit(
    model: PosteriorModel, n_synth: int, draws: int, seed: int | None = None
) -> list[ComponentAudit]:
    """Check the variance-inflation law on each cell of the Dirichlet model."""
    if model.kind is not ModelKind.DIRICHLET:
        raise ValueError("the variance audit requires the dirichlet model")
    alpha = np.asarray(model.dirichlet_alpha, dtype=float)
    alpha0 = float(alpha.sum())
    cms = synthesize_cms(model, n_synth=n_synth, draws=draws, seed=seed)
    props = cms.draws / n_synth
    emp_mean = props.mean(axis=0)
    emp_var = props.var(axis=0, ddof=1)
    true_mean = alpha / alpha0
    true_var = true_mean * (1.0 - true_mean) / (1.0 + alpha0)
    predicted = 1.0 + alpha0 / n_synth
    return [
        ComponentAudit(
            component=CELL_NAMES[i],
            empirical_mean=float(emp_mean[i]),
            true_mean=float(true_mean[i]),
            empirical_var=float(emp_var[i]),
            true_var=float(true_var[i]),
            predicted_ratio=predicted,
            observed_ratio=float(emp_var[i] / true_var[i]),
        )
        for i in range(4)
    ]


@dataclass(frozen=True)
class SpreadComparison:
    """Standard deviation of a metric on synthetic counts vs on the posterior."""

    metric: MetricId
    empirical_std: float
    true_std: float

    @property
    def ratio(self) -> float:
        return self.empirical_std / self.true_std


def empirical_vs_true_spread(
    model: PosteriorModel,
    metric: MetricId,
    n_synth: int,
    draws: int,
    seed: int | None = None,
) -> SpreadComparison:
    """Compare the spread of ``metric`` on synthetic counts against the posterior.

    No closed-form prediction is attached here; for nonlinear metrics the
    inflation factor is reported as observed.
    """
    seed = resolve_seed(seed)
    cms = synthesize_cms(model, n_synth=n_synth, draws=draws, seed=seed)
    raw = metric_values(cms.draws / n_synth, metric, validate=False)
    empirical = raw[np.isfinite(raw)]
    true = metric_values(
        sample_cpm(model, s=draws, seed=seed + 1).samples, metric, validate=False
    )
    true = true[np.isfinite(true)]
    return SpreadComparison(
        metric=MetricId(metric),
        empirical_std=float(np.std(empirical, ddof=1)),
        true_std=float(np.std(true, ddof=1)),
    )
