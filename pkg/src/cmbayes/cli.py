"""Command-line surface: analyze, bm, predictive, leaderboard, samplesize, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import (
    BetaParams,
    CmBayesError,
    ImproperPosteriorError,
    MetricId,
    PrevalencePolicy,
    PriorSpec,
    RatePriors,
)
from .leaderboard import (
    allocate_prizes,
    prob_best,
    rank_distribution,
    read_submissions_csv,
)
from .posterior import DEFAULT_SAMPLES, ModelKind, build_posterior
from .predictive import empirical_metric_distribution, synthesize_cms, variance_audit
from .report import DEFAULT_METRICS, parse_cm, run_analysis
from .samplesize import (
    SampleSizePlan,
    mu_bound,
    n_for_mu,
    power_simulation,
)

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_IMPROPER = 3


def _add_cm_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--cm",
        required=True,
        help="confusion matrix: JSON/CSV path or inline 'tp,fn,fp,tn'",
    )


def _add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--prior", default="laplace", help="laplace|jeffreys|haldane|custom:a,b")
    parser.add_argument("--prior-prev", default=None, help="override prior for prevalence")
    parser.add_argument("--prior-tpr", default=None, help="override prior for TPR")
    parser.add_argument("--prior-tnr", default=None, help="override prior for TNR")
    parser.add_argument("--prev-fixed", type=float, default=None, metavar="P",
                        help="treat prevalence as exactly P")
    parser.add_argument("--prev-counts", default=None, metavar="A,B",
                        help="external prevalence evidence as Beta pseudo-counts a,b")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--credibility", type=float, default=0.95)
    parser.add_argument("--model", choices=[k.value for k in ModelKind],
                        default=ModelKind.THREE_BETA.value)


def _add_format_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["table", "json"], default="table")


def _priors_from_args(args: argparse.Namespace) -> PriorSpec | RatePriors:
    base = PriorSpec.parse(args.prior)
    overrides = (args.prior_prev, args.prior_tpr, args.prior_tnr)
    if all(o is None for o in overrides):
        return base
    return RatePriors(
        prev=PriorSpec.parse(args.prior_prev) if args.prior_prev else base,
        tpr=PriorSpec.parse(args.prior_tpr) if args.prior_tpr else base,
        tnr=PriorSpec.parse(args.prior_tnr) if args.prior_tnr else base,
    )


def _prev_policy_from_args(args: argparse.Namespace) -> PrevalencePolicy:
    if args.prev_fixed is not None and args.prev_counts is not None:
        raise CmBayesError("--prev-fixed and --prev-counts are mutually exclusive")
    if args.prev_fixed is not None:
        return PrevalencePolicy.fixed(args.prev_fixed)
    if args.prev_counts is not None:
        try:
            a, b = (float(x) for x in args.prev_counts.split(","))
        except ValueError:
            raise CmBayesError(f"cannot parse --prev-counts {args.prev_counts!r}")
        return PrevalencePolicy.external(BetaParams(a, b))
    return PrevalencePolicy.inferred()


def _report_table(report) -> str:
    lines = []
    cm = report.cm
    lines.append(
        f"confusion matrix  tp={cm['tp']} fn={cm['fn']} fp={cm['fp']} tn={cm['tn']}  (n={cm['n']})"
    )
    lines.append(
        f"model={report.model}  samples={report.samples}  seed={report.seed}  "
        f"credibility={report.credibility:g}"
    )
    header = f"{'metric':<8}{'point':>10}{'mean':>10}{'median':>10}{'hpd':>18}{'mu(pp)':>9}"
    lines.append(header)
    lines.append("-" * len(header))
    for name, m in report.metrics.items():
        point = m.rendered["point"] if m.rendered["point"] is not None else "n/a"
        row = (
            f"{name:<8}{point:>10}{m.rendered['mean']:>10}{m.rendered['median']:>10}"
            f"{m.rendered['hpd']:>18}{m.rendered['mu_pp']:>9}"
        )
        if m.multimodal:
            row += "  (multimodal?)"
        lines.append(row)
    for name, reason in report.skipped_metrics.items():
        lines.append(f"{name:<8}skipped: {reason}")
    if report.r_inf is not None:
        lines.append(
            f"informedness: P(informative) = {report.r_inf:.4f}, "
            f"P(deceptive) = {report.r_dec:.4f}"
        )
    if report.convergence:
        status = "ok" if report.converged else "NOT CONVERGED"
        lines.append(
            f"convergence: max Rc = {max(report.convergence.values()):.5f} ({status})"
        )
    return "\n".join(lines)


def _write_histograms(report, directory: str) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for series in report.histograms:
        path = out / f"{series.metric}.json"
        path.write_text(json.dumps(series.to_dict(), sort_keys=True))


def _cmd_analyze(args: argparse.Namespace) -> int:
    cm = parse_cm(args.cm)
    metrics = DEFAULT_METRICS
    if args.metrics:
        metrics = [MetricId(m.strip().lower()) for m in args.metrics.split(",")]
    report = run_analysis(
        cm,
        prior=_priors_from_args(args),
        prev_policy=_prev_policy_from_args(args),
        model_kind=ModelKind(args.model),
        metrics=metrics,
        samples=args.samples,
        seed=args.seed,
        credibility=args.credibility,
        include_histograms=bool(args.histograms) or args.format == "json",
    )
    if args.histograms:
        _write_histograms(report, args.histograms)
    if args.format == "json":
        print(report.to_json())
    else:
        print(_report_table(report))
    return EXIT_OK


def _cmd_bm(args: argparse.Namespace) -> int:
    cm = parse_cm(args.cm)
    report = run_analysis(
        cm,
        prior=_priors_from_args(args),
        prev_policy=_prev_policy_from_args(args),
        model_kind=ModelKind(args.model),
        metrics=[MetricId.BM],
        samples=args.samples,
        seed=args.seed,
        credibility=args.credibility,
        include_histograms=False,
    )
    if args.format == "json":
        doc = report.to_dict()
        doc.pop("histograms")
        print(json.dumps(doc, sort_keys=True))
        return EXIT_OK
    if "bm" not in report.metrics:
        raise CmBayesError(report.skipped_metrics.get("bm", "informedness undefined"))
    m = report.metrics["bm"]
    print(f"informedness (tpr + tnr - 1) for tp={cm.tp} fn={cm.fn} fp={cm.fp} tn={cm.tn}")
    print(f"  point {m.rendered['point']}  mean {m.rendered['mean']}  "
          f"hpd {m.rendered['hpd']}  mu {m.rendered['mu_pp']} pp")
    print(f"  P(informative) = {report.r_inf:.4f}")
    print(f"  P(deceptive)   = {report.r_dec:.4f}")
    return EXIT_OK


def _cmd_predictive(args: argparse.Namespace) -> int:
    cm = parse_cm(args.cm)
    model = build_posterior(
        cm,
        prior=_priors_from_args(args),
        prev_policy=_prev_policy_from_args(args),
        kind=ModelKind(args.model),
    )
    cms = synthesize_cms(model, n_synth=args.n_synth, draws=args.draws, seed=args.seed)
    metric = MetricId(args.metric.lower())
    dist = empirical_metric_distribution(cms, metric)
    doc = {
        "metric": metric.value,
        "n_synth": args.n_synth,
        "draws": args.draws,
        "seed": cms.seed,
        "support": list(map(float, dist.values)),
        "probs": list(map(float, dist.probs)),
        "undefined_prob": dist.undefined_prob,
    }
    if args.audit:
        if ModelKind(args.model) is not ModelKind.DIRICHLET:
            raise CmBayesError("--audit requires --model dirichlet")
        doc["audit"] = [
            {
                "component": a.component,
                "empirical_var": a.empirical_var,
                "true_var": a.true_var,
                "predicted_ratio": a.predicted_ratio,
                "observed_ratio": a.observed_ratio,
            }
            for a in variance_audit(model, n_synth=args.n_synth, draws=args.draws,
                                    seed=args.seed)
        ]
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
        return EXIT_OK
    print(f"{metric.value} across {args.draws} synthetic matrices of size {args.n_synth}")
    for value, p in zip(dist.values, dist.probs):
        print(f"  {value:8.4f}  {p:.4f}")
    if dist.undefined_prob > 0:
        print(f"  undefined  {dist.undefined_prob:.4f}")
    if args.audit:
        print("variance audit (empirical/true, predicted ratio "
              f"{doc['audit'][0]['predicted_ratio']:.4f}):")
        for a in doc["audit"]:
            print(f"  {a['component']}: observed {a['observed_ratio']:.4f}")
    return EXIT_OK


def _cmd_leaderboard(args: argparse.Namespace) -> int:
    subs = read_submissions_csv(args.csv, default_n=args.n)
    matrix = rank_distribution(
        subs, draws=args.draws, seed=args.seed, prior=PriorSpec.parse(args.prior)
    )
    best = prob_best(subs, matrix=matrix)
    prizes = None
    if args.prizes:
        prizes = [float(p) for p in args.prizes.split(",")]
        allocation = allocate_prizes(matrix, prizes)
    if args.format == "json":
        doc = {
            "names": list(matrix.names),
            "entries": matrix.entries.tolist(),
            "draws": matrix.draws,
            "seed": matrix.seed,
            "prob_best": best,
        }
        if prizes:
            doc["prizes"] = prizes
            doc["expected_prize"] = {
                name: allocation.expected_prize(name) for name in matrix.names
            }
        print(json.dumps(doc, sort_keys=True))
        return EXIT_OK
    k = min(args.top, len(subs))
    print(f"rank probabilities over {matrix.draws} draws (seed {matrix.seed})")
    header = f"{'name':<20}" + "".join(f"P(#{p + 1})".rjust(9) for p in range(k))
    if prizes:
        header += f"{'E[prize]':>12}"
    print(header)
    for i, name in enumerate(matrix.names):
        row = f"{name:<20}" + "".join(
            f"{matrix.entries[i, p]:9.4f}" for p in range(k)
        )
        if prizes:
            row += f"{allocation.expected_prize(name):12.2f}"
        print(row)
    print(f"P(top point estimate is truly best) = {best:.4f}")
    return EXIT_OK


def _cmd_samplesize(args: argparse.Namespace) -> int:
    if args.n is not None:
        bound = mu_bound(args.n)
        if args.format == "json":
            print(json.dumps({"n": args.n, "mu_bound": bound}, sort_keys=True))
        else:
            print(f"worst-case MU at n={args.n}: {bound:.4g}")
        return EXIT_OK
    needed = n_for_mu(args.target_mu)
    doc = {"target_mu": args.target_mu, "closed_form_n": needed}
    if args.simulate:
        plan = SampleSizePlan(
            target_mu=args.target_mu,
            power=args.power,
            generating_mode=args.omega,
            concentration=args.concentration,
            prior=PriorSpec.parse(args.prior),
        )
        candidate_ns = None
        if args.grid:
            candidate_ns = sorted(int(x) for x in args.grid.split(","))
        plan = power_simulation(
            plan, candidate_ns=candidate_ns, sims_per_n=args.sims, seed=args.seed,
            full_curve=args.full_curve,
        )
        doc["result_n"] = plan.result_n
        doc["curve"] = [[n, mu] for n, mu in plan.curve]
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
        return EXIT_OK
    print(f"closed form: n >= {needed} for MU <= {args.target_mu:g}")
    if args.simulate:
        print(f"simulated result_n = {doc['result_n']} "
              f"(power {args.power:g}, mode {args.omega:g}, concentration {args.concentration:g})")
        for n, mu in doc["curve"]:
            print(f"  n={n:>8d}  achieved MU={mu:.4g}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cors_origins=args.cors_origin or None)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmbayes",
        description="Bayesian uncertainty for binary-classifier metrics from a confusion matrix",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="metric posteriors, HPD intervals, and MU for a CM")
    _add_cm_argument(p)
    _add_model_arguments(p)
    _add_format_argument(p)
    p.add_argument("--metrics", default=None, help="comma-separated subset, e.g. tpr,tnr,bm")
    p.add_argument("--histograms", default=None, metavar="DIR",
                   help="write per-metric histogram series JSON into DIR")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("bm", help="informedness assessment: P(informative), P(deceptive)")
    _add_cm_argument(p)
    _add_model_arguments(p)
    _add_format_argument(p)
    p.set_defaults(func=_cmd_bm)

    p = sub.add_parser("predictive", help="metric distribution over synthetic matrices")
    _add_cm_argument(p)
    _add_model_arguments(p)
    _add_format_argument(p)
    p.add_argument("--n-synth", type=int, required=True, help="size of each synthetic matrix")
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--metric", default="acc")
    p.add_argument("--audit", action="store_true",
                   help="also run the variance-inflation audit (dirichlet model)")
    p.set_defaults(func=_cmd_predictive)

    p = sub.add_parser("leaderboard", help="probabilistic ranking from a submissions CSV")
    p.add_argument("csv", help="CSV with header name,accuracy[,n]")
    p.add_argument("--n", type=int, default=None, help="global test-set size when no n column")
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prior", default="laplace")
    p.add_argument("--prizes", default=None, help="prize vector, e.g. 10000,2000,1000")
    p.add_argument("--top", type=int, default=3, help="positions to print in the table")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_leaderboard)

    p = sub.add_parser("samplesize", help="sample size for a target metric uncertainty")
    p.add_argument("--target-mu", type=float, default=None)
    p.add_argument("--n", type=int, default=None, help="report the MU bound at this n instead")
    p.add_argument("--simulate", action="store_true", help="run the power simulation")
    p.add_argument("--power", type=float, default=0.95)
    p.add_argument("--omega", type=float, default=0.8, help="generating mode")
    p.add_argument("--concentration", type=float, default=10.0)
    p.add_argument("--prior", default="laplace")
    p.add_argument("--grid", default=None, help="comma-separated candidate sample sizes")
    p.add_argument("--sims", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full-curve", action="store_true",
                   help="evaluate every candidate instead of stopping at result_n")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_samplesize)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--cors-origin", action="append", default=None,
                   help="allowed origin for browser clients (repeatable)")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "samplesize" and args.n is None and args.target_mu is None:
        parser.error("samplesize needs --target-mu or --n")
    try:
        return args.func(args)
    except ImproperPosteriorError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_IMPROPER
    except CmBayesError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
