import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from cmbayes import (
    BetaParams,
    CellProbSamples,
    ImproperPosteriorError,
    MetricId,
    ModelKind,
    PosteriorModel,
    PrevalencePolicy,
    PriorSpec,
    RatePriors,
    SimplexViolationError,
    TooFewSamplesError,
    build_posterior,
    convergence_report,
    gelman_rubin,
    metric_values,
    sample_cpm,
    split_rhat,
    validate_cm,
)

from oracles import beta_mean_tolerance


class TestBuildPosterior:
    def test_laplace_margins(self, small_cm):
        model = build_posterior(small_cm)
        assert model.tpr == BetaParams(27, 1)
        assert model.tnr == BetaParams(7, 3)
        assert model.prev == BetaParams(27, 9)

    def test_haldane_improper_on_zero_margin(self, single_obs_cm):
        priors = RatePriors(
            prev=PriorSpec.laplace(), tpr=PriorSpec.laplace(), tnr=PriorSpec.haldane()
        )
        with pytest.raises(ImproperPosteriorError):
            build_posterior(single_obs_cm, prior=priors)

    def test_haldane_proper_with_positive_margins(self):
        cm = validate_cm(5, 3, 2, 4)
        model = build_posterior(cm, prior=PriorSpec.haldane())
        assert model.tpr == BetaParams(5, 3)

    def test_jeffreys_fractional_counts(self, small_cm):
        model = build_posterior(small_cm, prior=PriorSpec.jeffreys())
        assert model.tpr == BetaParams(26.5, 0.5)

    def test_fractional_custom_prior_proper_with_data(self):
        # pseudo-counts below 1 are fine once each margin has a count
        cm = validate_cm(3, 1, 2, 4)
        model = build_posterior(cm, prior=PriorSpec.custom(0.3, 0.2))
        assert model.tpr == BetaParams(3.3, 1.2)
        assert model.is_proper

    def test_fractional_custom_prior_improper_on_zero_margin(self, single_obs_cm):
        with pytest.raises(ImproperPosteriorError):
            build_posterior(single_obs_cm, prior=PriorSpec.custom(0.5, 0.0))

    def test_dirichlet_concentrations(self, small_cm):
        model = build_posterior(small_cm, kind=ModelKind.DIRICHLET)
        assert model.dirichlet_alpha == (27, 1, 7, 3)
        assert model.alpha0 == 38

    def test_dirichlet_rejects_prevalence_exchange(self, small_cm):
        with pytest.raises(ValueError):
            build_posterior(
                small_cm,
                prev_policy=PrevalencePolicy.fixed(0.5),
                kind=ModelKind.DIRICHLET,
            )

    def test_dirichlet_rejects_asymmetric_custom(self, small_cm):
        with pytest.raises(ValueError):
            build_posterior(
                small_cm, prior=PriorSpec.custom(2.0, 1.0), kind=ModelKind.DIRICHLET
            )

    def test_fixed_prevalence_stored(self, small_cm):
        model = build_posterior(small_cm, prev_policy=PrevalencePolicy.fixed(0.5))
        assert model.fixed_prev == 0.5
        assert model.prev is None

    def test_external_prevalence_substitutes(self, small_cm):
        policy = PrevalencePolicy.external(BetaParams(3, 7))
        model = build_posterior(small_cm, prev_policy=policy)
        assert model.prev == BetaParams(3, 7)


@given(st.tuples(*[st.integers(0, 200) for _ in range(4)]))
def test_laplace_margins_property(counts):
    # posterior parameters are observed margins plus pseudo-counts
    if sum(counts) == 0:
        return
    tp, fn, fp, tn = counts
    model = build_posterior(validate_cm(tp, fn, fp, tn))
    assert model.tpr == BetaParams(tp + 1, fn + 1)
    assert model.tnr == BetaParams(tn + 1, fp + 1)
    assert model.prev == BetaParams(tp + fn + 1, fp + tn + 1)


class TestSampleCpm:
    def test_three_beta_mean_matches_analytic(self, small_cm):
        model = build_posterior(small_cm)
        cpm = sample_cpm(model, 20_000, seed=11)
        tpr = metric_values(cpm.samples, MetricId.TPR)
        assert abs(tpr.mean() - 27 / 28) < beta_mean_tolerance(27, 1, 20_000, k=3)

    def test_dirichlet_marginal_mean(self, small_cm):
        model = build_posterior(small_cm, kind=ModelKind.DIRICHLET)
        cpm = sample_cpm(model, 20_000, seed=12)
        tn = cpm.samples[:, 2]
        assert abs(tn.mean() - 7 / 38) < beta_mean_tolerance(7, 31, 20_000, k=3)

    def test_fixed_prevalence_exact(self, small_cm):
        model = build_posterior(small_cm, prev_policy=PrevalencePolicy.fixed(0.5))
        cpm = sample_cpm(model, 5_000, seed=13)
        prev = cpm.samples[:, 0] + cpm.samples[:, 1]
        assert np.all(prev == 0.5)

    def test_rows_on_simplex(self, small_cm):
        model = build_posterior(small_cm)
        cpm = sample_cpm(model, 10_000, seed=14)
        np.testing.assert_allclose(cpm.samples.sum(axis=1), 1.0, atol=1e-12)
        assert cpm.samples.min() >= 0.0 and cpm.samples.max() <= 1.0

    def test_seed_determinism(self, small_cm):
        model = build_posterior(small_cm)
        a = sample_cpm(model, 1_000, seed=99)
        b = sample_cpm(model, 1_000, seed=99)
        assert np.array_equal(a.samples, b.samples)
        assert a.seed == b.seed == 99

    def test_fresh_seed_recorded(self, small_cm):
        model = build_posterior(small_cm)
        cpm = sample_cpm(model, 100)
        replay = sample_cpm(model, 100, seed=cpm.seed)
        assert np.array_equal(cpm.samples, replay.samples)

    def test_improper_model_refused(self):
        model = PosteriorModel(
            kind=ModelKind.THREE_BETA,
            prevalence_policy=PrevalencePolicy.inferred(),
            prev=BetaParams(1, 1),
            tpr=BetaParams(0, 1),
            tnr=BetaParams(1, 1),
        )
        with pytest.raises(ImproperPosteriorError):
            sample_cpm(model, 100, seed=0)

    def test_samples_read_only(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), 100, seed=0)
        with pytest.raises(ValueError):
            cpm.samples[0, 0] = 0.5

    @pytest.mark.parametrize("prior_name, a, b", [
        ("laplace", 1.0, 1.0), ("jeffreys", 0.5, 0.5),
    ])
    def test_moment_checks_all_margins(self, small_cm, prior_name, a, b):
        prior = PriorSpec.parse(prior_name)
        model = build_posterior(small_cm, prior=prior)
        cpm = sample_cpm(model, 20_000, seed=hash(prior_name) % 2**31)
        checks = {
            MetricId.TPR: (26 + a, 0 + b),
            MetricId.TNR: (6 + a, 2 + b),
            MetricId.PREV: (26 + a, 8 + b),
        }
        for metric, (alpha, beta) in checks.items():
            draws = metric_values(cpm.samples, metric)
            assert abs(draws.mean() - alpha / (alpha + beta)) < beta_mean_tolerance(
                alpha, beta, 20_000
            )

    def test_dirichlet_marginals_match_beta(self, small_cm):
        # each Dirichlet marginal i is Beta(alpha_i, alpha0 - alpha_i)
        model = build_posterior(small_cm, kind=ModelKind.DIRICHLET)
        cpm = sample_cpm(model, 20_000, seed=21)
        alpha = np.array(model.dirichlet_alpha)
        a0 = alpha.sum()
        for i in range(4):
            result = stats.kstest(cpm.samples[:, i], "beta", args=(alpha[i], a0 - alpha[i]))
            assert result.pvalue > 0.01, (i, result)


class TestCellProbSamples:
    def test_rejects_bad_shape(self):
        with pytest.raises(SimplexViolationError):
            CellProbSamples(np.ones((10, 3)) / 3.0, seed=0)

    def test_rejects_off_simplex(self):
        rows = np.tile([0.3, 0.3, 0.3, 0.3], (5, 1))
        with pytest.raises(SimplexViolationError):
            CellProbSamples(rows, seed=0)


class TestGelmanRubin:
    def test_constant_stream_converged(self):
        report = gelman_rubin(np.full(1000, 0.7))
        assert report.rc["samples"] == 1.0
        assert report.passed

    def test_iid_beta_converges(self):
        rng = np.random.default_rng(31)
        report = gelman_rubin(rng.beta(27, 1, 20_000))
        assert report.worst < 1.01

    def test_adversarial_split_fails(self):
        rng = np.random.default_rng(32)
        halves = np.concatenate([rng.beta(2, 8, 10_000), rng.beta(8, 2, 10_000)])
        report = gelman_rubin(halves)
        assert report.worst > 1.01
        assert not report.passed

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamplesError):
            split_rhat(np.array([0.1, 0.2, 0.3]))

    def test_clipped_at_one(self):
        rng = np.random.default_rng(33)
        assert split_rhat(rng.normal(size=10_000)) >= 1.0

    def test_report_over_streams(self):
        rng = np.random.default_rng(34)
        report = convergence_report(
            {"a": rng.beta(2, 2, 5_000), "b": rng.beta(9, 1, 5_000)}
        )
        assert set(report.rc) == {"a", "b"}
        assert report.passed


@settings(max_examples=25)
@given(st.integers(0, 3))
def test_determinism_across_models(model_index):
    # identical (model, s, seed) must be bit-identical, for both model kinds
    cms = [(26, 0, 2, 6), (5, 5, 5, 5), (1, 0, 0, 0), (0, 1, 1, 0)]
    cm = validate_cm(*cms[model_index])
    for kind in ModelKind:
        model = build_posterior(cm, kind=kind)
        a = sample_cpm(model, 500, seed=7)
        b = sample_cpm(model, 500, seed=7)
        assert np.array_equal(a.samples, b.samples)
