"""Bayesian uncertainty quantification for binary-classifier metrics.

Point estimates computed from a confusion matrix hide how little a finite
test set pins them down.  This package replaces them with full posterior
distributions: conjugate Beta/Dirichlet models over the matrix, highest
posterior density intervals and their length as the uncertainty measure,
the risk that a classifier is worse than guessing, probabilistic
leaderboards, posterior-predictive reproducibility checks, and sample-size
planning.
"""

from .core import (
    AllSamplesInvalidError,
    BetaParams,
    CmBayesError,
    ConfusionMatrix,
    EmptyMatrixError,
    ImproperPosteriorError,
    MetricId,
    NegativeCountError,
    OutOfRegimeError,
    ParseError,
    PrevalenceMode,
    PrevalencePolicy,
    PriorKind,
    PriorSpec,
    RatePriors,
    RoundingInconsistentError,
    SimplexViolationError,
    TargetUnreachableError,
    TooFewSamplesError,
    metric_fn,
    metric_values,
    point_estimate,
    validate_cm,
)
from .leaderboard import (
    PrizeAllocation,
    RankProbabilityMatrix,
    Submission,
    acc_posterior,
    allocate_prizes,
    prob_best,
    rank_distribution,
    read_submissions_csv,
)
from .metrics import (
    BmAssessment,
    MetricPosterior,
    bm_assessment,
    hpd_interval,
    metric_posterior,
    point_summaries,
)
from .posterior import (
    CellProbSamples,
    ConvergenceReport,
    ModelKind,
    PosteriorModel,
    build_posterior,
    convergence_report,
    gelman_rubin,
    sample_cpm,
    split_rhat,
)
from .predictive import (
    ComponentAudit,
    EmpiricalDistribution,
    SyntheticCmSet,
    empirical_metric_distribution,
    empirical_vs_true_spread,
    synthesize_cms,
    variance_audit,
)
from .report import (
    AnalysisReport,
    HistogramSeries,
    MetricReport,
    parse_cm,
    run_analysis,
)
from .samplesize import (
    SampleSizePlan,
    beta_hpd_width,
    mode_to_beta,
    mu_bound,
    n_for_mu,
    power_simulation,
)

__version__ = "0.1.0"
