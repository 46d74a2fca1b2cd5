"""HTTP JSON facade over the analysis, leaderboard, predictive, and
sample-size pipelines.

Handlers are stateless and pure per request; every response echoes the seed
actually used so results can be replayed exactly.  Invalid bodies map to 400
with the domain error code, improper posteriors to 422.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .core import (
    BetaParams,
    CmBayesError,
    ImproperPosteriorError,
    MetricId,
    PrevalencePolicy,
    PriorSpec,
    RatePriors,
    validate_cm,
)
from .leaderboard import (
    Submission,
    allocate_prizes,
    prob_best,
    rank_distribution,
)
from .posterior import DEFAULT_SAMPLES, ModelKind, build_posterior, resolve_seed
from .predictive import empirical_metric_distribution, synthesize_cms, variance_audit
from .report import DEFAULT_METRICS, run_analysis
from .samplesize import (
    SampleSizePlan,
    default_candidate_ns,
    mu_bound,
    n_for_mu,
    power_simulation,
)

DEFAULT_MAX_GRID = 40
DEFAULT_MAX_SIMS = 2000


class CmBody(BaseModel):
    tp: int
    fn: int
    fp: int
    tn: int


class AnalyzeRequest(BaseModel):
    cm: CmBody
    prior: str = "laplace"
    prior_prev: str | None = None
    prior_tpr: str | None = None
    prior_tnr: str | None = None
    prev_fixed: float | None = None
    prev_counts: tuple[float, float] | None = None
    model: str = ModelKind.THREE_BETA.value
    metrics: list[str] | None = None
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    seed: int | None = None
    credibility: float = Field(default=0.95, gt=0.0, lt=1.0)
    include_histograms: bool = True
    histogram_bins: int = Field(default=200, ge=1, le=2000)


class SubmissionBody(BaseModel):
    name: str
    accuracy: float = Field(ge=0.0, le=1.0)
    n: int | None = Field(default=None, ge=1)


class LeaderboardRequest(BaseModel):
    submissions: list[SubmissionBody]
    n: int | None = Field(default=None, ge=1)
    draws: int = Field(default=10_000, ge=1)
    seed: int | None = None
    prior: str = "laplace"
    prizes: list[float] | None = None


class SamplesizeRequest(BaseModel):
    target_mu: float
    power: float = Field(default=0.95, gt=0.0, lt=1.0)
    generating_mode: float = Field(default=0.8, gt=0.0, lt=1.0)
    concentration: float = Field(default=10.0, gt=2.0)
    prior: str = "laplace"
    simulate: bool = False
    candidate_ns: list[int] | None = None
    sims_per_n: int = Field(default=1000, ge=200)
    seed: int | None = None
    full_curve: bool = False


class PredictiveRequest(BaseModel):
    cm: CmBody
    n_synth: int = Field(ge=1)
    draws: int = Field(default=10_000, ge=1)
    metric: str = "acc"
    prior: str = "laplace"
    model: str = ModelKind.DIRICHLET.value
    seed: int | None = None
    audit: bool = False


def _priors(req: AnalyzeRequest) -> PriorSpec | RatePriors:
    base = PriorSpec.parse(req.prior)
    if req.prior_prev is None and req.prior_tpr is None and req.prior_tnr is None:
        return base
    return RatePriors(
        prev=PriorSpec.parse(req.prior_prev) if req.prior_prev else base,
        tpr=PriorSpec.parse(req.prior_tpr) if req.prior_tpr else base,
        tnr=PriorSpec.parse(req.prior_tnr) if req.prior_tnr else base,
    )


def _prev_policy(req: AnalyzeRequest) -> PrevalencePolicy:
    if req.prev_fixed is not None and req.prev_counts is not None:
        raise CmBayesError("prev_fixed and prev_counts are mutually exclusive")
    if req.prev_fixed is not None:
        return PrevalencePolicy.fixed(req.prev_fixed)
    if req.prev_counts is not None:
        return PrevalencePolicy.external(BetaParams(*req.prev_counts))
    return PrevalencePolicy.inferred()


def create_app(
    cors_origins: list[str] | None = None,
    max_grid: int = DEFAULT_MAX_GRID,
    max_sims: int = DEFAULT_MAX_SIMS,
) -> FastAPI:
    """Build the service app; caps bound the synchronous simulation work."""
    app = FastAPI(title="cmbayes", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(CmBayesError)
    async def domain_error(_: Request, exc: CmBayesError) -> JSONResponse:
        status = 422 if isinstance(exc, ImproperPosteriorError) else 400
        return JSONResponse(
            status_code=status, content={"error": exc.code, "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": "ValidationError", "message": str(exc.errors())},
        )

    @app.exception_handler(ValueError)
    async def value_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"error": "ValueError", "message": str(exc)}
        )

    @app.get("/api/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/analyze")
    async def analyze(req: AnalyzeRequest) -> JSONResponse:
        cm = validate_cm(req.cm.tp, req.cm.fn, req.cm.fp, req.cm.tn)
        metrics = DEFAULT_METRICS
        if req.metrics is not None:
            metrics = [MetricId(m.lower()) for m in req.metrics]
        report = run_analysis(
            cm,
            prior=_priors(req),
            prev_policy=_prev_policy(req),
            model_kind=ModelKind(req.model),
            metrics=metrics,
            samples=req.samples,
            seed=req.seed,
            credibility=req.credibility,
            include_histograms=req.include_histograms,
            histogram_bins=req.histogram_bins,
        )
        return JSONResponse(content=report.to_dict())

    @app.post("/api/leaderboard")
    async def leaderboard(req: LeaderboardRequest) -> JSONResponse:
        if len(req.submissions) < 2:
            raise CmBayesError("ranking needs at least two submissions")
        subs = []
        for body in req.submissions:
            n = body.n if body.n is not None else req.n
            if n is None:
                raise CmBayesError(f"{body.name}: no test-set size given")
            subs.append(Submission.from_accuracy(body.name, body.accuracy, n))
        matrix = rank_distribution(
            subs, draws=req.draws, seed=req.seed, prior=PriorSpec.parse(req.prior)
        )
        doc = {
            "names": list(matrix.names),
            "entries": matrix.entries.tolist(),
            "draws": matrix.draws,
            "seed": matrix.seed,
            "prob_best": prob_best(subs, matrix=matrix),
        }
        if req.prizes:
            allocation = allocate_prizes(matrix, req.prizes)
            doc["prizes"] = list(allocation.prizes)
            doc["expected_prize"] = {
                name: allocation.expected_prize(name) for name in matrix.names
            }
        return JSONResponse(content=doc)

    @app.post("/api/samplesize")
    async def samplesize(req: SamplesizeRequest) -> JSONResponse:
        doc: dict = {
            "target_mu": req.target_mu,
            "closed_form_n": n_for_mu(req.target_mu),
        }
        if req.simulate:
            seed = resolve_seed(req.seed)
            candidate_ns = req.candidate_ns
            if candidate_ns is None:
                candidate_ns = [
                    n for n in default_candidate_ns(per_decade=7) if n > 1
                ]
            if len(candidate_ns) > max_grid:
                raise CmBayesError(
                    f"candidate grid of {len(candidate_ns)} exceeds the cap of "
                    f"{max_grid}; run larger sweeps through the CLI"
                )
            if req.sims_per_n > max_sims:
                raise CmBayesError(
                    f"sims_per_n {req.sims_per_n} exceeds the cap of {max_sims}; "
                    "run larger sweeps through the CLI"
                )
            plan = SampleSizePlan(
                target_mu=req.target_mu,
                power=req.power,
                generating_mode=req.generating_mode,
                concentration=req.concentration,
                prior=PriorSpec.parse(req.prior),
            )
            plan = power_simulation(
                plan,
                candidate_ns=sorted(candidate_ns),
                sims_per_n=req.sims_per_n,
                seed=seed,
                full_curve=req.full_curve,
            )
            doc["result_n"] = plan.result_n
            doc["curve"] = [[n, mu] for n, mu in plan.curve]
            doc["power"] = req.power
            doc["seed"] = seed
        try:
            doc["mu_bound_at_closed_form_n"] = mu_bound(doc["closed_form_n"])
        except CmBayesError:
            pass
        return JSONResponse(content=doc)

    @app.post("/api/predictive")
    async def predictive(req: PredictiveRequest) -> JSONResponse:
        cm = validate_cm(req.cm.tp, req.cm.fn, req.cm.fp, req.cm.tn)
        model = build_posterior(
            cm, prior=PriorSpec.parse(req.prior), kind=ModelKind(req.model)
        )
        cms = synthesize_cms(model, n_synth=req.n_synth, draws=req.draws, seed=req.seed)
        dist = empirical_metric_distribution(cms, MetricId(req.metric.lower()))
        doc = {
            "metric": dist.metric.value,
            "n_synth": req.n_synth,
            "draws": req.draws,
            "seed": cms.seed,
            "support": [float(v) for v in dist.values],
            "probs": [float(p) for p in dist.probs],
            "undefined_prob": dist.undefined_prob,
        }
        if req.audit:
            if ModelKind(req.model) is not ModelKind.DIRICHLET:
                raise CmBayesError("the variance audit requires the dirichlet model")
            doc["audit"] = [
                {
                    "component": a.component,
                    "empirical_mean": a.empirical_mean,
                    "true_mean": a.true_mean,
                    "empirical_var": a.empirical_var,
                    "true_var": a.true_var,
                    "predicted_ratio": a.predicted_ratio,
                    "observed_ratio": a.observed_ratio,
                }
                for a in variance_audit(
                    model, n_synth=req.n_synth, draws=req.draws, seed=req.seed
                )
            ]
        return JSONResponse(content=doc)

    return app


app = create_app()
