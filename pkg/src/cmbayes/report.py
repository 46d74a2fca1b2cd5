"""Analysis orchestration, report documents, and input parsing.

A report carries full-precision numbers for machines plus rendered strings
whose digits are capped by the metric's uncertainty: nothing finer than a
tenth of the HPD length is printed, so a wide posterior cannot masquerade as
a precise result.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import (
    AllSamplesInvalidError,
    ConfusionMatrix,
    MetricId,
    ParseError,
    PrevalenceMode,
    PrevalencePolicy,
    Priors,
    PriorSpec,
    RatePriors,
    point_estimate,
    validate_cm,
)
from .metrics import BmAssessment, MetricPosterior, bm_assessment, metric_posterior
from .posterior import (
    DEFAULT_SAMPLES,
    ConvergenceReport,
    ModelKind,
    build_posterior,
    convergence_report,
    resolve_seed,
    sample_cpm,
)

__all__ = [
    "DEFAULT_METRICS",
    "HistogramSeries",
    "MetricReport",
    "AnalysisReport",
    "mu_decimals",
    "render_value",
    "render_mu_pp",
    "parse_cm",
    "run_analysis",
    "report_from_dict",
]

DEFAULT_METRICS = (
    MetricId.PREV,
    MetricId.ACC,
    MetricId.TPR,
    MetricId.TNR,
    MetricId.PPV,
    MetricId.NPV,
    MetricId.F1,
    MetricId.MCC,
    MetricId.BM,
)
DEFAULT_HISTOGRAM_BINS = 200


def mu_decimals(mu: float) -> int:
    """Decimal places justified by an HPD length: the place of (mu/10)'s
    leading digit, capped at 6."""
    step = mu / 10.0
    if step <= 0.0:
        return 6
    if step >= 1.0:
        return 0
    return min(6, max(0, math.ceil(-math.log10(step) - 1e-12)))


def render_value(value: float, mu: float) -> str:
    """Format a metric value with no digits finer than mu/10."""
    if mu <= 0.0:
        return f"{value:g}"
    return f"{value:.{mu_decimals(mu)}f}"


def render_mu_pp(mu: float) -> str:
    """HPD length in percentage points, two significant digits."""
    return f"{mu * 100.0:.2g}"


@dataclass(frozen=True)
class HistogramSeries:
    """Plot-ready density histogram of one metric posterior.

    Densities are normalized so that sum(density * bin width) is 1; the HPD
    endpoints ride along for band shading.
    """

    metric: str
    bin_edges: tuple[float, ...]
    densities: tuple[float, ...]
    hpd_low: float
    hpd_high: float

    @classmethod
    def from_posterior(
        cls, posterior: MetricPosterior, bins: int = DEFAULT_HISTOGRAM_BINS
    ) -> "HistogramSeries":
        samples = posterior.samples
        lo, hi = float(np.min(samples)), float(np.max(samples))
        if hi <= lo:
            # degenerate stream (e.g. fixed prevalence): one tiny bin
            half = max(abs(lo), 1.0) * 1e-9
            edges = np.array([lo - half, lo + half])
        else:
            edges = np.linspace(lo, hi, bins + 1)
        densities, edges = np.histogram(samples, bins=edges, density=True)
        return cls(
            metric=posterior.metric.value,
            bin_edges=tuple(float(e) for e in edges),
            densities=tuple(float(d) for d in densities),
            hpd_low=posterior.hpd_low,
            hpd_high=posterior.hpd_high,
        )

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "bin_edges": list(self.bin_edges),
            "densities": list(self.densities),
            "hpd_low": self.hpd_low,
            "hpd_high": self.hpd_high,
        }


@dataclass(frozen=True)
class MetricReport:
    """Summary of one metric: full-precision numbers plus rendered strings."""

    metric: str
    point: float | None
    mean: float
    median: float
    mode: float
    hpd_low: float
    hpd_high: float
    mu: float
    n_invalid: int
    multimodal: bool
    rendered: dict[str, str]

    @classmethod
    def from_posterior(
        cls, posterior: MetricPosterior, point: float | None
    ) -> "MetricReport":
        mu = posterior.mu
        rendered = {
            "point": None if point is None else render_value(point, mu),
            "mean": render_value(posterior.mean, mu),
            "median": render_value(posterior.median, mu),
            "mode": render_value(posterior.mode_estimate, mu),
            "hpd": f"[{render_value(posterior.hpd_low, mu)}, "
            f"{render_value(posterior.hpd_high, mu)}]",
            "mu_pp": render_mu_pp(mu),
        }
        return cls(
            metric=posterior.metric.value,
            point=point,
            mean=posterior.mean,
            median=posterior.median,
            mode=posterior.mode_estimate,
            hpd_low=posterior.hpd_low,
            hpd_high=posterior.hpd_high,
            mu=mu,
            n_invalid=posterior.n_invalid,
            multimodal=posterior.multimodal,
            rendered=rendered,
        )

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "point": self.point,
            "mean": self.mean,
            "median": self.median,
            "mode": self.mode,
            "hpd_low": self.hpd_low,
            "hpd_high": self.hpd_high,
            "mu": self.mu,
            "n_invalid": self.n_invalid,
            "multimodal": self.multimodal,
            "rendered": dict(self.rendered),
        }


def _prior_dict(prior: PriorSpec) -> dict:
    return {"kind": prior.kind.value, "alpha": prior.alpha, "beta": prior.beta}


def _prevalence_dict(policy: PrevalencePolicy) -> dict:
    out: dict = {"mode": policy.mode.value}
    if policy.mode is PrevalenceMode.FIXED:
        out["value"] = policy.value
    elif policy.mode is PrevalenceMode.EXTERNAL:
        out["alpha"] = policy.params.alpha
        out["beta"] = policy.params.beta
    return out


@dataclass(frozen=True)
class AnalysisReport:
    """Complete machine-readable result of one analysis run."""

    cm: dict
    priors: dict
    prevalence: dict
    model: str
    samples: int
    seed: int
    credibility: float
    metrics: dict[str, MetricReport]
    skipped_metrics: dict[str, str]
    r_inf: float | None
    r_dec: float | None
    convergence: dict[str, float]
    converged: bool
    histograms: tuple[HistogramSeries, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "cm": dict(self.cm),
            "priors": dict(self.priors),
            "prevalence": dict(self.prevalence),
            "model": self.model,
            "samples": self.samples,
            "seed": self.seed,
            "credibility": self.credibility,
            "metrics": {k: v.to_dict() for k, v in self.metrics.items()},
            "skipped_metrics": dict(self.skipped_metrics),
            "bm_assessment": {"r_inf": self.r_inf, "r_dec": self.r_dec},
            "convergence": {"rc": dict(self.convergence), "passed": self.converged},
            "histograms": [h.to_dict() for h in self.histograms],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


def report_from_dict(data: dict) -> AnalysisReport:
    """Rebuild an AnalysisReport from its dictionary form."""
    metrics = {
        k: MetricReport(**v) for k, v in data["metrics"].items()
    }
    histograms = tuple(
        HistogramSeries(
            metric=h["metric"],
            bin_edges=tuple(h["bin_edges"]),
            densities=tuple(h["densities"]),
            hpd_low=h["hpd_low"],
            hpd_high=h["hpd_high"],
        )
        for h in data.get("histograms", [])
    )
    return AnalysisReport(
        cm=data["cm"],
        priors=data["priors"],
        prevalence=data["prevalence"],
        model=data["model"],
        samples=data["samples"],
        seed=data["seed"],
        credibility=data["credibility"],
        metrics=metrics,
        skipped_metrics=data.get("skipped_metrics", {}),
        r_inf=data["bm_assessment"]["r_inf"],
        r_dec=data["bm_assessment"]["r_dec"],
        convergence=data["convergence"]["rc"],
        converged=data["convergence"]["passed"],
        histograms=histograms,
    )


def _cm_from_record(record: dict, context: str) -> ConfusionMatrix:
    counts = {}
    lowered = {str(k).strip().lower(): v for k, v in record.items()}
    for name in ("tp", "fn", "fp", "tn"):
        if name not in lowered:
            raise ParseError(f"{context}: missing field {name!r}")
        try:
            counts[name] = int(lowered[name])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{context}: field {name!r} is not an integer") from exc
    return validate_cm(**counts)


def _cm_from_table(rows: Sequence[Sequence], context: str) -> ConfusionMatrix:
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ParseError(f"{context}: expected a 2x2 table")
    try:
        (tp, fn), (fp, tn) = ((int(c) for c in row) for row in rows)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{context}: table entries must be integers") from exc
    return validate_cm(tp, fn, fp, tn)


def parse_cm(source: str | Path) -> ConfusionMatrix:
    """Parse a confusion matrix from a file or an inline ``tp,fn,fp,tn`` string.

    JSON files hold either a record with fields tp/fn/fp/tn or a 2x2 array
    laid out [[TP, FN], [FP, TN]]; CSV files hold the same 2x2 table.
    """
    text = str(source)
    path = Path(text)
    if path.suffix.lower() in {".json", ".csv"} or path.exists():
        if not path.exists():
            raise ParseError(f"{path}: no such file")
        content = path.read_text()
        if path.suffix.lower() == ".csv":
            rows = [line.split(",") for line in content.strip().splitlines() if line.strip()]
            return _cm_from_table(rows, str(path))
        try:
            data = json.loads(content)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
        if isinstance(data, dict):
            return _cm_from_record(data, str(path))
        if isinstance(data, list):
            return _cm_from_table(data, str(path))
        raise ParseError(f"{path}: expected a JSON object or 2x2 array")
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ParseError(
            f"inline counts need exactly four fields tp,fn,fp,tn; got {text!r}"
        )
    try:
        tp, fn, fp, tn = (int(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"inline counts must be integers; got {text!r}") from exc
    return validate_cm(tp, fn, fp, tn)


def run_analysis(
    cm: ConfusionMatrix,
    prior: Priors = PriorSpec.laplace(),
    prev_policy: PrevalencePolicy = PrevalencePolicy.inferred(),
    model_kind: ModelKind = ModelKind.THREE_BETA,
    metrics: Sequence[MetricId] = DEFAULT_METRICS,
    samples: int = DEFAULT_SAMPLES,
    seed: int | None = None,
    credibility: float = 0.95,
    include_histograms: bool = True,
    histogram_bins: int = DEFAULT_HISTOGRAM_BINS,
) -> AnalysisReport:
    """Run the full pipeline: posterior, samples, metric summaries, diagnostics."""
    seed = resolve_seed(seed)
    model = build_posterior(cm, prior=prior, prev_policy=prev_policy, kind=model_kind)
    cpm = sample_cpm(model, s=samples, seed=seed)

    metric_ids = [MetricId(m) for m in metrics]
    if MetricId.BM not in metric_ids:
        metric_ids.append(MetricId.BM)

    reports: dict[str, MetricReport] = {}
    posteriors: dict[str, MetricPosterior] = {}
    skipped: dict[str, str] = {}
    streams: dict[str, np.ndarray] = {}
    for metric in metric_ids:
        try:
            posterior = metric_posterior(cpm, metric, credibility=credibility)
        except AllSamplesInvalidError as exc:
            skipped[metric.value] = str(exc)
            continue
        posteriors[metric.value] = posterior
        reports[metric.value] = MetricReport.from_posterior(
            posterior, point_estimate(cm, metric)
        )
        streams[metric.value] = posterior.samples

    assessment: BmAssessment | None = None
    if MetricId.BM.value in reports:
        assessment = bm_assessment(cpm, credibility=credibility)
    diagnostics: ConvergenceReport = convergence_report(streams)

    histograms: tuple[HistogramSeries, ...] = ()
    if include_histograms:
        histograms = tuple(
            HistogramSeries.from_posterior(posteriors[name], bins=histogram_bins)
            for name in reports
        )

    rate_priors = prior if isinstance(prior, RatePriors) else RatePriors.uniform(prior)
    return AnalysisReport(
        cm={"tp": cm.tp, "fn": cm.fn, "fp": cm.fp, "tn": cm.tn, "n": cm.n},
        priors={
            "prev": _prior_dict(rate_priors.prev),
            "tpr": _prior_dict(rate_priors.tpr),
            "tnr": _prior_dict(rate_priors.tnr),
        },
        prevalence=_prevalence_dict(prev_policy),
        model=ModelKind(model_kind).value,
        samples=samples,
        seed=seed,
        credibility=credibility,
        metrics=reports,
        skipped_metrics=skipped,
        r_inf=None if assessment is None else assessment.r_inf,
        r_dec=None if assessment is None else assessment.r_dec,
        convergence=dict(diagnostics.rc),
        converged=diagnostics.passed,
        histograms=histograms,
    )
