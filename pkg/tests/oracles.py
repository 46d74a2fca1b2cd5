"""Independent oracles used to pin expected values in tests.

These deliberately avoid the package's own code paths: the HPD oracle works
on a density grid instead of sorted samples, metric formulas are written in
count form, and comparison probabilities come from brute-force sampling.
"""

from __future__ import annotations

import numpy as np
from scipy import stats


def beta_hpd_grid(a: float, b: float, mass: float = 0.95, npts: int = 100_000):
    """HPD interval of Beta(a, b) by density threshold search on a fine grid."""
    x = np.linspace(0.0, 1.0, npts)
    pdf = stats.beta.pdf(x, a, b)
    pdf[~np.isfinite(pdf)] = np.max(pdf[np.isfinite(pdf)]) * 10.0
    order = np.argsort(pdf)[::-1]
    csum = np.cumsum(pdf[order]) / pdf.sum()
    k = int(np.searchsorted(csum, mass))
    sel = order[: k + 1]
    return float(x[sel.min()]), float(x[sel.max()])


def prob_x_greater_y(a1, b1, a2, b2, draws: int = 1_000_000, seed: int = 12345) -> float:
    """P(X > Y) for independent X ~ Beta(a1, b1), Y ~ Beta(a2, b2)."""
    rng = np.random.default_rng(seed)
    return float(np.mean(rng.beta(a1, b1, draws) > rng.beta(a2, b2, draws)))


def equal_tailed(samples, mass: float = 0.95):
    """Equal-tailed credible interval from samples."""
    lo = (1.0 - mass) / 2.0
    return float(np.quantile(samples, lo)), float(np.quantile(samples, 1.0 - lo))


def beta_mean_tolerance(a: float, b: float, s: int, k: float = 4.0) -> float:
    """k standard errors of the sample mean of Beta(a, b) over s draws."""
    return k * float(stats.beta.std(a, b)) / np.sqrt(s)


def beta_var_tolerance(a: float, b: float, s: int, k: float = 4.0) -> float:
    """k asymptotic standard errors of the sample variance of Beta(a, b)."""
    var = float(stats.beta.var(a, b))
    kurt = float(stats.beta.stats(a, b, moments="k"))  # excess kurtosis
    mu4 = (kurt + 3.0) * var**2
    return k * np.sqrt(max(mu4 - var**2, 0.0) / s)


# Classical count-based metric formulas, written independently of the package.
def count_metrics(tp: int, fn: int, fp: int, tn: int) -> dict[str, float]:
    n = tp + fn + fp + tn
    tpr = tp / (tp + fn)
    tnr = tn / (tn + fp)
    ppv = tp / (tp + fp)
    npv = tn / (tn + fn)
    mcc = (tp * tn - fp * fn) / np.sqrt(
        float(tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    )
    return {
        "prev": (tp + fn) / n,
        "acc": (tp + tn) / n,
        "tpr": tpr,
        "tnr": tnr,
        "ppv": ppv,
        "npv": npv,
        "f1": 2 * tp / (2 * tp + fp + fn),
        "mcc": mcc,
        "bm": tpr + tnr - 1.0,
        "mk": ppv + npv - 1.0,
        "bacc": (tpr + tnr) / 2.0,
    }
