"""Shared domain types, priors, and metric definitions for 2x2 confusion matrices.

Counts follow the row-major layout [[TP, FN], [FP, TN]]: reference label on
rows, predicted label on columns.  Probability vectors over the four cells
use the component order (TP, FN, TN, FP) everywhere in this package; all
sampling and metric code sticks to that order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

__all__ = [
    "CmBayesError",
    "NegativeCountError",
    "EmptyMatrixError",
    "SimplexViolationError",
    "ImproperPosteriorError",
    "TooFewSamplesError",
    "AllSamplesInvalidError",
    "RoundingInconsistentError",
    "OutOfRegimeError",
    "TargetUnreachableError",
    "ParseError",
    "I_TP",
    "I_FN",
    "I_TN",
    "I_FP",
    "CELL_NAMES",
    "ConfusionMatrix",
    "validate_cm",
    "BetaParams",
    "PriorKind",
    "PriorSpec",
    "RatePriors",
    "PrevalenceMode",
    "PrevalencePolicy",
    "MetricId",
    "metric_fn",
    "metric_values",
    "point_estimate",
    "require_simplex",
]

# Indices into cell-probability vectors, fixed as (TP, FN, TN, FP).
I_TP, I_FN, I_TN, I_FP = 0, 1, 2, 3
CELL_NAMES = ("tp", "fn", "tn", "fp")


class CmBayesError(Exception):
    """Base class for domain errors. ``code`` is the stable machine-readable name."""

    code = "Error"


class NegativeCountError(CmBayesError):
    code = "NegativeCount"


class EmptyMatrixError(CmBayesError):
    code = "EmptyMatrix"


class SimplexViolationError(CmBayesError):
    code = "SimplexViolation"


class ImproperPosteriorError(CmBayesError):
    code = "ImproperPosterior"


class TooFewSamplesError(CmBayesError):
    code = "TooFewSamples"


class AllSamplesInvalidError(CmBayesError):
    code = "AllSamplesInvalid"


class RoundingInconsistentError(CmBayesError):
    code = "RoundingInconsistent"


class OutOfRegimeError(CmBayesError):
    code = "OutOfRegime"


class TargetUnreachableError(CmBayesError):
    code = "TargetUnreachable"


class ParseError(CmBayesError):
    code = "ParseError"


@dataclass(frozen=True)
class ConfusionMatrix:
    """Four non-negative integer counts of a binary classification test."""

    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fn", "fp", "tn"):
            value = getattr(self, name)
            if value != int(value):
                raise ValueError(f"count {name}={value!r} is not an integer")
            object.__setattr__(self, name, int(value))
            if value < 0:
                raise NegativeCountError(f"count {name}={value} is negative")
        if self.n == 0:
            raise EmptyMatrixError("all four counts are zero")

    @property
    def n(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def as_table(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Row-major 2x2 layout [[TP, FN], [FP, TN]]."""
        return ((self.tp, self.fn), (self.fp, self.tn))

    def proportions(self) -> np.ndarray:
        """Observed cell proportions in (TP, FN, TN, FP) order."""
        return np.array([self.tp, self.fn, self.tn, self.fp], dtype=float) / self.n


def validate_cm(tp, fn, fp, tn) -> ConfusionMatrix:
    """Validate four raw counts and return a ConfusionMatrix.

    Raises NegativeCountError for negative entries and EmptyMatrixError when
    all counts are zero.
    """
    return ConfusionMatrix(tp, fn, fp, tn)


@dataclass(frozen=True)
class BetaParams:
    """Beta distribution parameters (prior pseudo-counts plus observed counts).

    alpha = beta = 0 is permitted so that the zero-pseudo-count prior can be
    declared, but such parameters are improper until data arrives.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError(f"negative Beta parameters ({self.alpha}, {self.beta})")

    @property
    def is_proper(self) -> bool:
        return self.alpha > 0 and self.beta > 0

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @property
    def var(self) -> float:
        s = self.alpha + self.beta
        return self.alpha * self.beta / (s * s * (s + 1.0))

    @property
    def std(self) -> float:
        return math.sqrt(self.var)


class PriorKind(str, enum.Enum):
    LAPLACE = "laplace"
    JEFFREYS = "jeffreys"
    HALDANE = "haldane"
    CUSTOM = "custom"


_PRIOR_PSEUDO_COUNTS = {
    PriorKind.LAPLACE: (1.0, 1.0),
    PriorKind.JEFFREYS: (0.5, 0.5),
    PriorKind.HALDANE: (0.0, 0.0),
}


@dataclass(frozen=True)
class PriorSpec:
    """Prior on a single rate (prevalence, TPR, or TNR)."""

    kind: PriorKind
    alpha: float
    beta: float

    @classmethod
    def laplace(cls) -> "PriorSpec":
        return cls(PriorKind.LAPLACE, 1.0, 1.0)

    @classmethod
    def jeffreys(cls) -> "PriorSpec":
        return cls(PriorKind.JEFFREYS, 0.5, 0.5)

    @classmethod
    def haldane(cls) -> "PriorSpec":
        return cls(PriorKind.HALDANE, 0.0, 0.0)

    @classmethod
    def custom(cls, alpha: float, beta: float) -> "PriorSpec":
        if alpha < 0 or beta < 0:
            raise ValueError("custom prior requires alpha >= 0 and beta >= 0")
        return cls(PriorKind.CUSTOM, float(alpha), float(beta))

    @classmethod
    def parse(cls, text: str) -> "PriorSpec":
        """Parse ``laplace``, ``jeffreys``, ``haldane``, or ``custom:a,b``."""
        text = text.strip().lower()
        if text.startswith("custom:"):
            try:
                a, b = (float(part) for part in text[len("custom:"):].split(","))
            except ValueError as exc:
                raise ParseError(f"cannot parse custom prior {text!r}") from exc
            return cls.custom(a, b)
        try:
            kind = PriorKind(text)
        except ValueError as exc:
            raise ParseError(f"unknown prior {text!r}") from exc
        if kind is PriorKind.CUSTOM:
            raise ParseError("custom prior requires parameters, e.g. custom:2,0.5")
        a, b = _PRIOR_PSEUDO_COUNTS[kind]
        return cls(kind, a, b)

    @property
    def params(self) -> BetaParams:
        return BetaParams(self.alpha, self.beta)


@dataclass(frozen=True)
class RatePriors:
    """Independent priors for the three modeled rates."""

    prev: PriorSpec
    tpr: PriorSpec
    tnr: PriorSpec

    @classmethod
    def uniform(cls, prior: PriorSpec) -> "RatePriors":
        return cls(prev=prior, tpr=prior, tnr=prior)


Priors = Union[PriorSpec, RatePriors]


class PrevalenceMode(str, enum.Enum):
    INFERRED = "inferred"
    FIXED = "fixed"
    EXTERNAL = "external"


@dataclass(frozen=True)
class PrevalencePolicy:
    """How prevalence enters the model: inferred from the matrix, fixed to a
    known constant (e.g. a designed 50/50 test set), or supplied as external
    Beta evidence replacing the matrix margin."""

    mode: PrevalenceMode
    value: float | None = None
    params: BetaParams | None = None

    @classmethod
    def inferred(cls) -> "PrevalencePolicy":
        return cls(PrevalenceMode.INFERRED)

    @classmethod
    def fixed(cls, value: float) -> "PrevalencePolicy":
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"fixed prevalence {value} outside [0, 1]")
        return cls(PrevalenceMode.FIXED, value=float(value))

    @classmethod
    def external(cls, params: BetaParams) -> "PrevalencePolicy":
        return cls(PrevalenceMode.EXTERNAL, params=params)


class MetricId(str, enum.Enum):
    PREV = "prev"
    ACC = "acc"
    TPR = "tpr"
    TNR = "tnr"
    PPV = "ppv"
    NPV = "npv"
    F1 = "f1"
    MCC = "mcc"
    BM = "bm"
    MK = "mk"
    BACC = "bacc"


def require_simplex(theta: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    """Check that rows of ``theta`` are probability vectors over the four cells.

    Components may be zero (boundary draws are legal); negative entries or row
    sums off 1 raise SimplexViolationError.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != 4:
        raise SimplexViolationError(f"expected 4 components, got shape {theta.shape}")
    if np.any(theta < 0):
        raise SimplexViolationError("negative cell probability")
    sums = theta.sum(axis=-1)
    if np.any(np.abs(sums - 1.0) > atol):
        worst = float(np.max(np.abs(sums - 1.0)))
        raise SimplexViolationError(f"rows deviate from the simplex by up to {worst:.3g}")
    return theta


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Elementwise num/den with NaN where the denominator is not positive."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.full(np.broadcast(num, den).shape, np.nan)
    np.divide(num, den, out=out, where=den > 0)
    return out


# Metric definitions on cell probabilities (TP, FN, TN, FP).  Zero
# denominators yield NaN; callers count and exclude those draws.

def _prev(t):
    return t[..., I_TP] + t[..., I_FN]


def _acc(t):
    return t[..., I_TP] + t[..., I_TN]


def _tpr(t):
    return _ratio(t[..., I_TP], t[..., I_TP] + t[..., I_FN])


def _tnr(t):
    return _ratio(t[..., I_TN], t[..., I_TN] + t[..., I_FP])


def _ppv(t):
    return _ratio(t[..., I_TP], t[..., I_TP] + t[..., I_FP])


def _npv(t):
    return _ratio(t[..., I_TN], t[..., I_TN] + t[..., I_FN])


def _f1(t):
    return _ratio(2.0 * t[..., I_TP], 2.0 * t[..., I_TP] + t[..., I_FP] + t[..., I_FN])


def _bm(t):
    return _tpr(t) + _tnr(t) - 1.0


def _mk(t):
    return _ppv(t) + _npv(t) - 1.0


def _bacc(t):
    return (_tpr(t) + _tnr(t)) / 2.0


def _mcc(t):
    tp, fn, tn, fp = (t[..., i] for i in (I_TP, I_FN, I_TN, I_FP))
    num = tp * tn - fp * fn
    den2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    return _ratio(num, np.sqrt(den2))


_REGISTRY: dict[MetricId, Callable[[np.ndarray], np.ndarray]] = {
    MetricId.PREV: _prev,
    MetricId.ACC: _acc,
    MetricId.TPR: _tpr,
    MetricId.TNR: _tnr,
    MetricId.PPV: _ppv,
    MetricId.NPV: _npv,
    MetricId.F1: _f1,
    MetricId.MCC: _mcc,
    MetricId.BM: _bm,
    MetricId.MK: _mk,
    MetricId.BACC: _bacc,
}


def metric_fn(metric: MetricId) -> Callable[[np.ndarray], np.ndarray]:
    """Return the vectorized function mapping cell probabilities to a metric.

    The function accepts arrays of shape (..., 4) in (TP, FN, TN, FP) order
    and returns values of shape (...).  Draws where a required denominator is
    zero come back as NaN.
    """
    return _REGISTRY[MetricId(metric)]


def metric_values(theta: np.ndarray, metric: MetricId, *, validate: bool = True) -> np.ndarray:
    """Evaluate ``metric`` on cell-probability rows."""
    theta = np.asarray(theta, dtype=float)
    if validate:
        require_simplex(theta)
    return metric_fn(metric)(theta)


def point_estimate(cm: ConfusionMatrix, metric: MetricId) -> float | None:
    """Classical count-based point estimate; None when undefined on these counts."""
    value = float(metric_fn(metric)(cm.proportions()))
    return None if math.isnan(value) else value
