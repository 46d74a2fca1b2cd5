"""Metric posteriors from cell-probability samples.

The headline quantity is metric uncertainty: the length of the 95% highest
posterior density interval of a metric.  Intervals are estimated by the
shortest window over the sorted samples, which is distribution-free and exact
for the unimodal posteriors that conjugate models produce.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import AllSamplesInvalidError, MetricId, metric_values
from .posterior import CellProbSamples

__all__ = [
    "MetricPosterior",
    "BmAssessment",
    "hpd_interval",
    "point_summaries",
    "metric_posterior",
    "bm_assessment",
]

# A single interior gap wider than this fraction of the interval flags a
# suspected multimodal posterior; the single-interval estimate is then dubious.
MULTIMODAL_GAP_FRACTION = 0.02


def _sorted_window(sorted_samples: np.ndarray, mass: float) -> tuple[int, int]:
    """Index range [i, j] of the shortest window holding ``mass`` of the samples.

    Ties go to the smallest lower endpoint.
    """
    s = sorted_samples.size
    m = min(s, max(1, int(np.ceil(mass * s))))
    if m == s:
        return 0, s - 1
    widths = sorted_samples[m - 1 :] - sorted_samples[: s - m + 1]
    i = int(np.argmin(widths))
    return i, i + m - 1


def hpd_interval(samples: np.ndarray, credibility: float = 0.95) -> tuple[float, float]:
    """Highest posterior density interval estimated from samples.

    Sorts the draws and returns the shortest contiguous window containing
    ``ceil(credibility * s)`` of them.
    """
    if not 0.0 < credibility < 1.0:
        raise ValueError("credibility must be in (0, 1)")
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise AllSamplesInvalidError("no samples to form an interval from")
    i, j = _sorted_window(x, credibility)
    return float(x[i]), float(x[j])


def point_summaries(samples: np.ndarray) -> tuple[float, float, float]:
    """(mean, median, mode estimate) of a sample stream.

    The mode is estimated as the midpoint of the shortest window holding 10%
    of the samples.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise AllSamplesInvalidError("no samples to summarize")
    i, j = _sorted_window(x, 0.10)
    mode = (float(x[i]) + float(x[j])) / 2.0
    return float(np.mean(x)), float(np.median(x)), mode


def _multimodal_flag(sorted_window: np.ndarray) -> bool:
    if sorted_window.size < 3:
        return False
    width = float(sorted_window[-1] - sorted_window[0])
    if width <= 0.0:
        return False
    return float(np.max(np.diff(sorted_window))) > MULTIMODAL_GAP_FRACTION * width


@dataclass(frozen=True)
class MetricPosterior:
    """Posterior summary of one metric.

    ``mu`` is the length of the credibility-level HPD interval.  ``samples``
    holds only the finite draws; ``n_invalid`` counts draws excluded because a
    denominator was zero.  ``multimodal`` marks sample sets where the single
    HPD interval looks unreliable.
    """

    metric: MetricId
    samples: np.ndarray
    hpd_low: float
    hpd_high: float
    mu: float
    mean: float
    median: float
    mode_estimate: float
    credibility: float = 0.95
    n_invalid: int = 0
    multimodal: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)


def _posterior_from_values(
    metric: MetricId, values: np.ndarray, credibility: float
) -> MetricPosterior:
    finite = values[np.isfinite(values)]
    n_invalid = values.size - finite.size
    if finite.size == 0:
        raise AllSamplesInvalidError(
            f"all {values.size} draws undefined for {MetricId(metric).name} "
            "(degenerate prevalence or boundary input)"
        )
    if n_invalid:
        warnings.warn(
            f"{n_invalid} of {values.size} draws undefined for "
            f"{MetricId(metric).name}; excluded",
            RuntimeWarning,
            stacklevel=3,
        )
    x = np.sort(finite)
    i, j = _sorted_window(x, credibility)
    low, high = float(x[i]), float(x[j])
    mean, median, mode = point_summaries(x)
    return MetricPosterior(
        metric=MetricId(metric),
        samples=finite,
        hpd_low=low,
        hpd_high=high,
        mu=high - low,
        mean=mean,
        median=median,
        mode_estimate=mode,
        credibility=credibility,
        n_invalid=n_invalid,
        multimodal=_multimodal_flag(x[i : j + 1]),
    )


def metric_posterior(
    cpm: CellProbSamples, metric: MetricId, credibility: float = 0.95
) -> MetricPosterior:
    """Posterior of ``metric`` under the draws in ``cpm``."""
    if not 0.0 < credibility < 1.0:
        raise ValueError("credibility must be in (0, 1)")
    values = metric_values(cpm.samples, metric, validate=False)
    return _posterior_from_values(metric, values, credibility)


@dataclass(frozen=True)
class BmAssessment:
    """Posterior split of informedness into informative and deceptive mass.

    ``r_inf`` is the probability that informedness is positive (the classifier
    beats coin flipping), ``r_dec`` that it is negative.  Draws exactly at
    zero count to neither side.
    """

    r_inf: float
    r_dec: float
    posterior: MetricPosterior


def bm_assessment(cpm: CellProbSamples, credibility: float = 0.95) -> BmAssessment:
    """Informedness posterior with informative/deceptive probabilities."""
    values = metric_values(cpm.samples, MetricId.BM, validate=False)
    posterior = _posterior_from_values(MetricId.BM, values, credibility)
    finite = posterior.samples
    return BmAssessment(
        r_inf=float(np.mean(finite > 0.0)),
        r_dec=float(np.mean(finite < 0.0)),
        posterior=posterior,
    )
