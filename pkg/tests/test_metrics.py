import numpy as np
import pytest
from scipy import stats

from cmbayes import (
    AllSamplesInvalidError,
    BetaParams,
    MetricId,
    ModelKind,
    PosteriorModel,
    PrevalencePolicy,
    bm_assessment,
    build_posterior,
    hpd_interval,
    metric_posterior,
    point_summaries,
    sample_cpm,
    validate_cm,
)

from oracles import beta_hpd_grid, beta_mean_tolerance, equal_tailed

S = 20_000


def prior_only_model():
    """Uniform Beta on every rate, as before seeing any data."""
    return PosteriorModel(
        kind=ModelKind.THREE_BETA,
        prevalence_policy=PrevalencePolicy.inferred(),
        prev=BetaParams(1, 1),
        tpr=BetaParams(1, 1),
        tnr=BetaParams(1, 1),
    )


class TestHpdInterval:
    def test_tpr_interval_smalln(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=101)
        post = metric_posterior(cpm, MetricId.TPR)
        assert post.hpd_low == pytest.approx(0.89, abs=0.01)
        assert post.hpd_high == pytest.approx(1.00, abs=0.01)

    def test_tnr_interval_smalln(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=101)
        post = metric_posterior(cpm, MetricId.TNR)
        assert post.hpd_low == pytest.approx(0.43, abs=0.02)
        assert post.hpd_high == pytest.approx(0.95, abs=0.02)

    def test_monotone_density_closed_form(self):
        # for an increasing density the HPD is [q, 1] with q solving x**27 = 0.05
        rng = np.random.default_rng(102)
        low, high = hpd_interval(rng.beta(27, 1, S))
        assert low == pytest.approx(0.05 ** (1 / 27), abs=0.005)
        assert high == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize("a,b", [(2, 5), (27, 1), (7, 3), (50, 50), (1, 10)])
    def test_agrees_with_grid_oracle(self, a, b):
        rng = np.random.default_rng(a * 100 + b)
        low, high = hpd_interval(rng.beta(a, b, S))
        oracle_low, oracle_high = beta_hpd_grid(a, b)
        assert low == pytest.approx(oracle_low, abs=0.01)
        assert high == pytest.approx(oracle_high, abs=0.01)

    def test_uniform_width_is_the_mass(self):
        # the uniform ties every window, so only the width is identifiable:
        # any interval of length 0.95 carries the mass
        rng = np.random.default_rng(100)
        low, high = hpd_interval(rng.beta(1, 1, S))
        assert high - low == pytest.approx(0.95, abs=0.01)

    @pytest.mark.parametrize("a,b,seed", [(7, 3, 1), (2, 9, 2), (40, 15, 3), (1, 1, 4)])
    def test_never_wider_than_equal_tailed(self, a, b, seed):
        samples = np.random.default_rng(seed).beta(a, b, S)
        lo, hi = hpd_interval(samples)
        et_lo, et_hi = equal_tailed(samples)
        assert hi - lo <= et_hi - et_lo + 1e-12

    def test_symmetric_case_matches_equal_tailed(self):
        samples = np.random.default_rng(105).beta(5, 5, S)
        lo, hi = hpd_interval(samples)
        et_lo, et_hi = equal_tailed(samples)
        # quantile Monte Carlo error at the 2.5% tails of Beta(5, 5)
        for boundary, (got, want) in zip((0.025, 0.975), ((lo, et_lo), (hi, et_hi))):
            q = stats.beta.ppf(boundary, 5, 5)
            se = np.sqrt(0.025 * 0.975 / S) / stats.beta.pdf(q, 5, 5)
            assert abs(got - want) < 2 * se

    def test_contains_stated_mass(self):
        samples = np.random.default_rng(106).beta(7, 3, S)
        lo, hi = hpd_interval(samples)
        inside = np.mean((samples >= lo) & (samples <= hi))
        assert 0.95 - 4 / np.sqrt(S) <= inside <= 0.95 + 4 / np.sqrt(S)

    def test_interval_brackets_median(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=107)
        for metric in (MetricId.TPR, MetricId.TNR, MetricId.ACC, MetricId.BM):
            post = metric_posterior(cpm, metric)
            assert post.hpd_low <= post.median <= post.hpd_high

    def test_credibility_validated(self):
        with pytest.raises(ValueError):
            hpd_interval(np.arange(10.0), credibility=1.5)

    def test_empty_rejected(self):
        with pytest.raises(AllSamplesInvalidError):
            hpd_interval(np.array([]))


class TestMetricUncertainty:
    def test_mu_is_interval_length(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=110)
        post = metric_posterior(cpm, MetricId.TNR)
        assert post.mu == pytest.approx(post.hpd_high - post.hpd_low, abs=1e-15)

    def test_mu_shrinks_with_sample_size(self):
        # scaling all counts up narrows the interval
        mus = []
        for k in (1, 2, 4, 8):
            cm = validate_cm(26 * k, 0, 2 * k, 6 * k)
            cpm = sample_cpm(build_posterior(cm), S, seed=111)
            mus.append(metric_posterior(cpm, MetricId.TNR).mu)
        assert all(a > b for a, b in zip(mus, mus[1:])), mus

    def test_mu_capped_for_unit_metrics(self):
        # proper unimodal posteriors on [0, 1] cannot exceed 0.95
        cpm = sample_cpm(prior_only_model(), S, seed=112)
        for metric in (MetricId.PREV, MetricId.ACC, MetricId.TPR, MetricId.TNR):
            assert metric_posterior(cpm, metric).mu <= 0.95 + 0.01


class TestPointSummaries:
    def test_constant_stream(self):
        mean, median, mode = point_summaries(np.full(100, 0.3))
        assert mean == median == mode == 0.3

    def test_beta_mean(self):
        samples = np.random.default_rng(120).beta(27, 9, S)
        mean, _, _ = point_summaries(samples)
        assert abs(mean - 0.75) < beta_mean_tolerance(27, 9, S, k=3)

    def test_uniform_median(self):
        samples = np.random.default_rng(121).random(S)
        _, median, _ = point_summaries(samples)
        assert median == pytest.approx(0.5, abs=0.01)

    def test_mode_tracks_peak(self):
        samples = np.random.default_rng(122).beta(27, 9, S)
        _, _, mode = point_summaries(samples)
        assert mode == pytest.approx(26 / 34, abs=0.03)


class TestInvalidSamples:
    def test_all_invalid_raises(self, small_cm):
        model = build_posterior(small_cm, prev_policy=PrevalencePolicy.fixed(1.0))
        cpm = sample_cpm(model, 1_000, seed=130)
        with pytest.raises(AllSamplesInvalidError):
            metric_posterior(cpm, MetricId.TNR)  # no negatives exist at prev = 1

    def test_counted_warning_on_partial(self, small_cm):
        model = build_posterior(small_cm, prev_policy=PrevalencePolicy.fixed(1.0))
        cpm = sample_cpm(model, 1_000, seed=131)
        post = metric_posterior(cpm, MetricId.TPR)  # defined everywhere at prev = 1
        assert post.n_invalid == 0
        assert post.samples.size == 1_000


class TestMultimodalFlag:
    def test_unimodal_not_flagged(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=140)
        assert not metric_posterior(cpm, MetricId.TPR).multimodal

    def test_bimodal_flagged(self):
        rng = np.random.default_rng(141)
        from cmbayes.metrics import _posterior_from_values

        mixture = np.concatenate([rng.beta(60, 4, S // 2), rng.beta(4, 60, S // 2)])
        post = _posterior_from_values(MetricId.ACC, mixture, 0.95)
        assert post.multimodal


class TestBmAssessment:
    def test_prior_only_symmetry(self):
        cpm = sample_cpm(prior_only_model(), S, seed=150)
        assessment = bm_assessment(cpm)
        assert assessment.r_dec == pytest.approx(0.5, abs=0.01)

    def test_strong_classifier_low_risk(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=151)
        assert bm_assessment(cpm).r_dec < 0.005

    def test_fixture_with_moderate_risk(self):
        # oracle: P(tpr + tnr < 1) with tpr ~ Beta(5, 3), tnr ~ Beta(6, 4)
        rng = np.random.default_rng(152)
        oracle = np.mean(rng.beta(5, 3, 1_000_000) + rng.beta(6, 4, 1_000_000) < 1.0)
        cm = validate_cm(4, 2, 3, 5)
        cpm = sample_cpm(build_posterior(cm), S, seed=153)
        assessment = bm_assessment(cpm)
        assert assessment.r_dec == pytest.approx(oracle, abs=0.03)
        assert 0.10 < assessment.r_dec < 0.20

    def test_split_sums_to_one(self, small_cm):
        cpm = sample_cpm(build_posterior(small_cm), S, seed=154)
        assessment = bm_assessment(cpm)
        assert assessment.r_inf + assessment.r_dec == pytest.approx(
            1.0, abs=2 / np.sqrt(S)
        )

    def test_identity_per_draw(self, small_cm):
        from cmbayes import metric_values

        cpm = sample_cpm(build_posterior(small_cm), 2_000, seed=155)
        bm = metric_values(cpm.samples, MetricId.BM)
        tpr = metric_values(cpm.samples, MetricId.TPR)
        tnr = metric_values(cpm.samples, MetricId.TNR)
        assert np.array_equal(bm, tpr + tnr - 1.0)
