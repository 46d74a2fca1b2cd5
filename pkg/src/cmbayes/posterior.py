"""Posterior construction from a confusion matrix and cell-probability sampling.

Two conjugate models are supported.  The three-rate model places independent
Beta posteriors on prevalence, TPR, and TNR and maps draws onto the four cell
probabilities

    theta_tp = tpr * prev        theta_fn = (1 - tpr) * prev
    theta_tn = tnr * (1 - prev)  theta_fp = (1 - tnr) * (1 - prev)

The single-Dirichlet model treats the four cells as one multinomial with a
Dirichlet posterior (observed counts plus a symmetric prior vector).  Both are
sampled exactly; no Markov chain is involved.  The split potential scale
reduction diagnostic is still applied to sampled streams as a sanity gate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import (
    I_FN,
    I_FP,
    I_TN,
    I_TP,
    BetaParams,
    ConfusionMatrix,
    ImproperPosteriorError,
    PrevalenceMode,
    PrevalencePolicy,
    PriorKind,
    Priors,
    PriorSpec,
    RatePriors,
    SimplexViolationError,
    TooFewSamplesError,
)

__all__ = [
    "ModelKind",
    "PosteriorModel",
    "CellProbSamples",
    "ConvergenceReport",
    "build_posterior",
    "sample_cpm",
    "split_rhat",
    "gelman_rubin",
    "convergence_report",
    "resolve_seed",
]

DEFAULT_SAMPLES = 20_000
RC_THRESHOLD = 1.01


class ModelKind(str, enum.Enum):
    THREE_BETA = "three-beta"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class PosteriorModel:
    """Conjugate posterior over the cell probabilities of a confusion matrix.

    For ``THREE_BETA``, ``prev``/``tpr``/``tnr`` hold Beta parameters;
    ``fixed_prev`` replaces ``prev`` when prevalence is pinned to a constant.
    For ``DIRICHLET``, ``dirichlet_alpha`` holds the four concentration
    parameters in (TP, FN, TN, FP) order.
    """

    kind: ModelKind
    prevalence_policy: PrevalencePolicy
    prev: BetaParams | None = None
    tpr: BetaParams | None = None
    tnr: BetaParams | None = None
    fixed_prev: float | None = None
    dirichlet_alpha: tuple[float, float, float, float] | None = None

    @property
    def alpha0(self) -> float:
        """Total Dirichlet concentration (Dirichlet model only)."""
        if self.dirichlet_alpha is None:
            raise ValueError("alpha0 is only defined for the dirichlet model")
        return float(sum(self.dirichlet_alpha))

    @property
    def is_proper(self) -> bool:
        if self.kind is ModelKind.DIRICHLET:
            return self.dirichlet_alpha is not None and all(
                a > 0 for a in self.dirichlet_alpha
            )
        rates = [self.tpr, self.tnr]
        if self.fixed_prev is None:
            rates.append(self.prev)
        return all(r is not None and r.is_proper for r in rates)


@dataclass(frozen=True)
class CellProbSamples:
    """Monte Carlo draws of the cell-probability vector, one row per draw.

    ``samples`` has shape (s, 4) in (TP, FN, TN, FP) order; every row lies on
    the probability simplex.  The array is read-only so sample sets can be
    shared freely.
    """

    samples: np.ndarray
    seed: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 4:
            raise SimplexViolationError(f"expected (s, 4) samples, got {samples.shape}")
        if np.any(samples < 0) or np.any(samples > 1):
            raise SimplexViolationError("cell probabilities outside [0, 1]")
        if np.any(np.abs(samples.sum(axis=1) - 1.0) > 1e-9):
            raise SimplexViolationError("sample rows do not lie on the simplex")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def s(self) -> int:
        return self.samples.shape[0]


def _prior_rates(prior: Priors) -> RatePriors:
    if isinstance(prior, RatePriors):
        return prior
    return RatePriors.uniform(prior)


def _beta_posterior(name: str, successes: int, failures: int, prior: PriorSpec) -> BetaParams:
    params = BetaParams(successes + prior.alpha, failures + prior.beta)
    if not params.is_proper:
        raise ImproperPosteriorError(
            f"{name} posterior Beta({params.alpha:g}, {params.beta:g}) is improper; "
            "choose a prior with positive pseudo-counts (laplace or jeffreys)"
        )
    return params


def _dirichlet_prior_value(prior: Priors) -> float:
    """Per-cell pseudo-count for the Dirichlet model.

    The Dirichlet model has a single symmetric prior over the four cells, so a
    custom Beta prior is accepted only when alpha == beta.
    """
    if isinstance(prior, RatePriors):
        specs = {(p.kind, p.alpha, p.beta) for p in (prior.prev, prior.tpr, prior.tnr)}
        if len(specs) != 1:
            raise ValueError("the dirichlet model takes one prior for all cells")
        prior = prior.tpr
    if prior.kind is PriorKind.CUSTOM and prior.alpha != prior.beta:
        raise ValueError(
            "the dirichlet model needs a symmetric prior; custom requires alpha == beta"
        )
    return prior.alpha


def build_posterior(
    cm: ConfusionMatrix,
    prior: Priors = PriorSpec.laplace(),
    prev_policy: PrevalencePolicy = PrevalencePolicy.inferred(),
    kind: ModelKind = ModelKind.THREE_BETA,
) -> PosteriorModel:
    """Build the conjugate posterior for ``cm`` under the given prior and policy.

    Raises ImproperPosteriorError when a zero-pseudo-count prior meets a zero
    count on the relevant margin.
    """
    kind = ModelKind(kind)
    if kind is ModelKind.DIRICHLET:
        if prev_policy.mode is not PrevalenceMode.INFERRED:
            raise ValueError(
                "fixed or external prevalence requires the three-beta model; "
                "the dirichlet model cannot exchange the prevalence margin"
            )
        a = _dirichlet_prior_value(prior)
        alpha = (cm.tp + a, cm.fn + a, cm.tn + a, cm.fp + a)
        if any(x <= 0 for x in alpha):
            raise ImproperPosteriorError(
                "dirichlet posterior has a zero concentration; "
                "choose a prior with positive pseudo-counts (laplace or jeffreys)"
            )
        return PosteriorModel(
            kind=kind, prevalence_policy=prev_policy, dirichlet_alpha=alpha
        )

    rates = _prior_rates(prior)
    tpr = _beta_posterior("TPR", cm.tp, cm.fn, rates.tpr)
    tnr = _beta_posterior("TNR", cm.tn, cm.fp, rates.tnr)
    prev: BetaParams | None = None
    fixed_prev: float | None = None
    if prev_policy.mode is PrevalenceMode.INFERRED:
        prev = _beta_posterior("prevalence", cm.tp + cm.fn, cm.fp + cm.tn, rates.prev)
    elif prev_policy.mode is PrevalenceMode.FIXED:
        fixed_prev = prev_policy.value
    else:
        assert prev_policy.params is not None
        if not prev_policy.params.is_proper:
            raise ImproperPosteriorError("external prevalence Beta parameters are improper")
        prev = prev_policy.params
    return PosteriorModel(
        kind=kind,
        prevalence_policy=prev_policy,
        prev=prev,
        tpr=tpr,
        tnr=tnr,
        fixed_prev=fixed_prev,
    )


def resolve_seed(seed: int | None) -> int:
    """Return ``seed`` or draw a fresh 32-bit one so runs stay replayable."""
    if seed is None:
        return int(np.random.SeedSequence().entropy % (2**32))
    return int(seed)


def _draw_cell_probs(model: PosteriorModel, s: int, rng: np.random.Generator) -> np.ndarray:
    if not model.is_proper:
        raise ImproperPosteriorError("cannot sample from an improper posterior")
    if model.kind is ModelKind.DIRICHLET:
        return rng.dirichlet(np.asarray(model.dirichlet_alpha, dtype=float), size=s)
    if model.fixed_prev is not None:
        prev = np.full(s, model.fixed_prev)
    else:
        prev = rng.beta(model.prev.alpha, model.prev.beta, size=s)
    tpr = rng.beta(model.tpr.alpha, model.tpr.beta, size=s)
    tnr = rng.beta(model.tnr.alpha, model.tnr.beta, size=s)
    theta = np.empty((s, 4))
    theta[:, I_TP] = tpr * prev
    theta[:, I_FN] = (1.0 - tpr) * prev
    theta[:, I_TN] = tnr * (1.0 - prev)
    theta[:, I_FP] = (1.0 - tnr) * (1.0 - prev)
    return theta


def sample_cpm(
    model: PosteriorModel, s: int = DEFAULT_SAMPLES, seed: int | None = None
) -> CellProbSamples:
    """Draw ``s`` cell-probability vectors from the posterior.

    Sampling is exact conjugate sampling and is deterministic for a fixed
    seed.  When ``seed`` is None a fresh seed is drawn and recorded on the
    returned sample set.
    """
    if s < 1:
        raise ValueError("need at least one sample")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    return CellProbSamples(_draw_cell_probs(model, s, rng), seed=seed)


def split_rhat(samples: np.ndarray, n_chains: int = 2) -> float:
    """Split potential scale reduction of a single stream of draws.

    The stream is cut into ``n_chains`` consecutive segments (a trailing
    remainder is dropped) and the classic between/within-variance estimator is
    applied.  Values are clipped below at 1.0; a constant stream counts as
    converged.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 4 or x.size < 2 * n_chains:
        raise TooFewSamplesError(f"{x.size} draws are too few for {n_chains} chains")
    m = x.size // n_chains
    chains = x[: m * n_chains].reshape(n_chains, m)
    within = float(np.mean(np.var(chains, axis=1, ddof=1)))
    between_over_m = float(np.var(np.mean(chains, axis=1), ddof=1))
    if within == 0.0:
        return 1.0 if between_over_m == 0.0 else float("inf")
    v_hat = (m - 1) / m * within + between_over_m
    return max(1.0, float(np.sqrt(v_hat / within)))


@dataclass(frozen=True)
class ConvergenceReport:
    """Split potential scale reduction per monitored stream."""

    rc: dict[str, float]
    threshold: float = RC_THRESHOLD

    @property
    def passed(self) -> bool:
        return all(v < self.threshold for v in self.rc.values())

    @property
    def worst(self) -> float:
        return max(self.rc.values())


def gelman_rubin(
    samples: np.ndarray, n_chains: int = 2, name: str = "samples"
) -> ConvergenceReport:
    """Convergence report for a single stream of draws."""
    return ConvergenceReport(rc={name: split_rhat(samples, n_chains=n_chains)})


def convergence_report(
    streams: Mapping[str, np.ndarray], n_chains: int = 2
) -> ConvergenceReport:
    """Convergence report across several monitored streams."""
    return ConvergenceReport(
        rc={name: split_rhat(value, n_chains=n_chains) for name, value in streams.items()}
    )
