"""Sample-size determination for rate metrics.

Two routes: the closed-form bound MU <= 2/sqrt(N) (valid for N > 20, worst
case at a balanced rate), and a power simulation that draws plausible data
from a Beta specified by its mode and concentration, forms the posterior at
each candidate N, and reads off the HPD width achieved at a given power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats

from .core import (
    BetaParams,
    OutOfRegimeError,
    PriorSpec,
    TargetUnreachableError,
)

__all__ = [
    "SampleSizePlan",
    "mode_to_beta",
    "beta_mode",
    "mu_bound",
    "n_for_mu",
    "beta_hpd_width",
    "default_candidate_ns",
    "power_simulation",
]

MU_BOUND_MIN_N = 20
DEFAULT_SIMS_PER_N = 1000
MIN_SIMS_PER_N = 200
# tail-probability grid resolution for the exact Beta HPD width search
_HPD_GRID_POINTS = 101


def mode_to_beta(omega: float, concentration: float) -> BetaParams:
    """Beta parameters with mode ``omega`` and concentration ``concentration``."""
    if not 0.0 < omega < 1.0:
        raise ValueError("mode must be in (0, 1)")
    if concentration <= 2.0:
        raise ValueError("concentration must exceed 2")
    return BetaParams(
        omega * (concentration - 2.0) + 1.0,
        (1.0 - omega) * (concentration - 2.0) + 1.0,
    )


def beta_mode(params: BetaParams) -> float:
    """Mode of a Beta with both parameters above 1."""
    if params.alpha <= 1.0 or params.beta <= 1.0:
        raise ValueError("mode requires alpha > 1 and beta > 1")
    return (params.alpha - 1.0) / (params.alpha + params.beta - 2.0)


def mu_bound(n: int) -> float:
    """Worst-case metric uncertainty 2/sqrt(n) for a rate tested on n samples.

    The bound comes from the normal limit of the Beta posterior and is only
    trustworthy for n > 20.
    """
    if n <= MU_BOUND_MIN_N:
        raise OutOfRegimeError(f"the 2/sqrt(n) bound is unreliable for n = {n} <= 20")
    return 2.0 / math.sqrt(n)


def n_for_mu(target_mu: float) -> int:
    """Smallest sample size whose worst-case metric uncertainty meets the target."""
    if not 0.0 < target_mu < 1.0:
        raise ValueError("target MU must be in (0, 1)")
    return math.ceil(4.0 / target_mu**2 - 1e-9)


def beta_hpd_width(
    alpha: np.ndarray, beta: np.ndarray, mass: float = 0.95
) -> np.ndarray:
    """Exact HPD width of Beta distributions, vectorized over parameters.

    Minimizes ppf(p + mass) - ppf(p) over the lower tail probability p on a
    fine grid; the width is flat near its minimum, so the grid error is far
    below quantile accuracy.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    p0 = np.linspace(0.0, 1.0 - mass, _HPD_GRID_POINTS)
    lo = stats.beta.ppf(p0[None, :], alpha[:, None], beta[:, None])
    hi = stats.beta.ppf(p0[None, :] + mass, alpha[:, None], beta[:, None])
    return np.min(hi - lo, axis=1)


def default_candidate_ns(
    start: int = 10, stop: int = 1_000_000, per_decade: int = 10
) -> list[int]:
    """Logarithmic candidate grid, ``per_decade`` points per decade."""
    decades = math.log10(stop) - math.log10(start)
    points = int(round(decades * per_decade)) + 1
    grid = np.unique(np.round(np.logspace(math.log10(start), math.log10(stop), points)))
    return [int(n) for n in grid]


@dataclass(frozen=True)
class SampleSizePlan:
    """Inputs and results of a sample-size determination run.

    ``generating_mode`` and ``concentration`` parameterize the Beta that
    simulated studies draw their true rate from; ``curve`` holds
    (N, HPD width achieved at the requested power) pairs once simulated.
    """

    target_mu: float
    power: float = 0.95
    generating_mode: float = 0.8
    concentration: float = 10.0
    prior: PriorSpec = field(default_factory=PriorSpec.laplace)
    credibility: float = 0.95
    result_n: int | None = None
    curve: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        if not 0.0 < self.target_mu < 0.95:
            raise ValueError("target MU must be in (0, 0.95)")
        if not 0.0 < self.power < 1.0:
            raise ValueError("power must be in (0, 1)")
        # validates mode/concentration ranges
        mode_to_beta(self.generating_mode, self.concentration)

    @property
    def closed_form_n(self) -> int:
        return n_for_mu(self.target_mu)


def _achieved_mu(
    n: int,
    generating: BetaParams,
    prior: PriorSpec,
    power: float,
    credibility: float,
    sims: int,
    rng: np.random.Generator,
) -> float:
    theta = rng.beta(generating.alpha, generating.beta, size=sims)
    z = rng.binomial(n, theta)
    widths = beta_hpd_width(z + prior.alpha, n - z + prior.beta, mass=credibility)
    return float(np.quantile(widths, power, method="linear"))


def power_simulation(
    plan: SampleSizePlan,
    candidate_ns: list[int] | None = None,
    sims_per_n: int = DEFAULT_SIMS_PER_N,
    seed: int | None = None,
    full_curve: bool = False,
) -> SampleSizePlan:
    """Simulate studies over candidate sample sizes and fill in the plan.

    For each candidate N, ``sims_per_n`` studies are simulated: a true rate is
    drawn from the generating Beta, successes from a binomial at size N, and
    the posterior HPD width recorded.  The achieved MU at N is the ``power``
    quantile of those widths; ``result_n`` is the smallest N whose achieved MU
    meets the target.  The sweep stops at ``result_n`` unless ``full_curve``
    asks for every candidate.

    Raises TargetUnreachableError when no candidate suffices; the exception
    carries the completed plan on its ``plan`` attribute.
    """
    if candidate_ns is None:
        candidate_ns = default_candidate_ns()
    if not candidate_ns:
        raise ValueError("empty candidate grid")
    if sorted(candidate_ns) != list(candidate_ns):
        raise ValueError("candidate sample sizes must be sorted ascending")
    if any(n < 1 for n in candidate_ns):
        raise ValueError("candidate sample sizes must be positive")
    if sims_per_n < MIN_SIMS_PER_N:
        raise ValueError(f"need at least {MIN_SIMS_PER_N} simulations per N")
    if not plan.prior.params.is_proper:
        raise ValueError("the power simulation needs a proper prior")

    generating = mode_to_beta(plan.generating_mode, plan.concentration)
    root = np.random.SeedSequence(seed)
    curve: list[tuple[int, float]] = []
    result_n: int | None = None
    for n, child in zip(candidate_ns, root.spawn(len(candidate_ns))):
        achieved = _achieved_mu(
            n,
            generating,
            plan.prior,
            plan.power,
            plan.credibility,
            sims_per_n,
            np.random.default_rng(child),
        )
        curve.append((int(n), achieved))
        if result_n is None and achieved <= plan.target_mu:
            result_n = int(n)
            if not full_curve:
                break
    done = replace(plan, result_n=result_n, curve=tuple(curve))
    if result_n is None:
        largest_n, largest_mu = curve[-1]
        error = TargetUnreachableError(
            f"no candidate N reaches MU <= {plan.target_mu:g}; "
            f"largest tested N = {largest_n} achieved {largest_mu:.4g}"
        )
        error.plan = done
        raise error
    return done
