import numpy as np
import pytest
from hypothesis import given, strategies as st

from cmbayes import (
    BetaParams,
    EmptyMatrixError,
    MetricId,
    NegativeCountError,
    ParseError,
    PrevalencePolicy,
    PriorSpec,
    SimplexViolationError,
    metric_fn,
    metric_values,
    point_estimate,
    validate_cm,
)
from cmbayes.core import require_simplex

from oracles import count_metrics


class TestValidateCm:
    def test_counts_and_n(self, small_cm):
        assert (small_cm.tp, small_cm.fn, small_cm.fp, small_cm.tn) == (26, 0, 2, 6)
        assert small_cm.n == 34

    def test_single_observation(self):
        assert validate_cm(1, 0, 0, 0).n == 1

    def test_empty_matrix_rejected(self):
        with pytest.raises(EmptyMatrixError):
            validate_cm(0, 0, 0, 0)

    @pytest.mark.parametrize("counts", [(-1, 0, 0, 1), (1, -2, 0, 0), (0, 0, 0, -5)])
    def test_negative_rejected(self, counts):
        with pytest.raises(NegativeCountError):
            validate_cm(*counts)

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError):
            validate_cm(1.5, 0, 0, 1)

    def test_table_layout(self, small_cm):
        assert small_cm.as_table() == ((26, 0), (2, 6))

    def test_immutable(self, small_cm):
        with pytest.raises(AttributeError):
            small_cm.tp = 3


class TestMetricFunctions:
    def test_uniform_cells_give_zero_informedness(self):
        theta = np.array([0.25, 0.25, 0.25, 0.25])
        assert metric_fn(MetricId.BM)(theta) == pytest.approx(0.0, abs=1e-15)

    def test_perfect_classifier_boundary(self):
        # zero FN/FP components with positive denominators are fine
        theta = np.array([0.5, 0.0, 0.5, 0.0])
        assert metric_fn(MetricId.TPR)(theta) == 1.0
        assert metric_fn(MetricId.TNR)(theta) == 1.0
        assert metric_fn(MetricId.BM)(theta) == 1.0

    def test_cells_recomposed_from_rates(self):
        # tpr=1, tnr=0.75, prev=26/34 recompose the observed 34-sample matrix
        prev, tpr, tnr = 26 / 34, 1.0, 0.75
        theta = np.array(
            [tpr * prev, (1 - tpr) * prev, tnr * (1 - prev), (1 - tnr) * (1 - prev)]
        )
        assert theta == pytest.approx([0.7647, 0.0, 0.1765, 0.0588], abs=1e-4)
        assert metric_fn(MetricId.ACC)(theta) == pytest.approx(32 / 34, abs=1e-12)

    def test_zero_denominator_gives_nan(self):
        all_negative = np.array([0.0, 0.0, 0.6, 0.4])
        assert np.isnan(metric_fn(MetricId.TPR)(all_negative))
        assert np.isnan(metric_fn(MetricId.BM)(all_negative))
        assert metric_fn(MetricId.TNR)(all_negative) == 0.6

    def test_vectorized_shape(self):
        theta = np.tile([0.4, 0.1, 0.3, 0.2], (7, 1))
        assert metric_values(theta, MetricId.F1).shape == (7,)

    def test_simplex_sum_checked(self):
        with pytest.raises(SimplexViolationError):
            metric_values(np.array([0.5, 0.5, 0.5, 0.5]), MetricId.ACC)

    def test_negative_component_checked(self):
        with pytest.raises(SimplexViolationError):
            require_simplex(np.array([1.1, -0.1, 0.0, 0.0]))


positive_cells = st.tuples(*[st.floats(0.01, 1.0) for _ in range(4)])


@given(positive_cells)
def test_algebraic_identities(cells):
    theta = np.array(cells) / sum(cells)
    tpr = metric_fn(MetricId.TPR)(theta)
    tnr = metric_fn(MetricId.TNR)(theta)
    prev = metric_fn(MetricId.PREV)(theta)
    bm = metric_fn(MetricId.BM)(theta)
    assert bm == pytest.approx(tpr + tnr - 1.0, abs=1e-12)
    assert metric_fn(MetricId.BACC)(theta) == pytest.approx((bm + 1.0) / 2.0, abs=1e-12)
    assert metric_fn(MetricId.ACC)(theta) == pytest.approx(
        prev * tpr + (1.0 - prev) * tnr, abs=1e-12
    )


@given(st.tuples(*[st.integers(1, 500) for _ in range(4)]))
def test_matches_count_formulas(counts):
    # cell probabilities built from counts reproduce the classical formulas
    cm = validate_cm(*counts)
    expected = count_metrics(*counts)
    theta = cm.proportions()
    for metric in MetricId:
        assert metric_fn(metric)(theta) == pytest.approx(
            expected[metric.value], abs=1e-9
        ), metric


def test_point_estimate_none_when_undefined():
    cm = validate_cm(0, 0, 2, 6)  # no positives: TPR undefined on counts
    assert point_estimate(cm, MetricId.TPR) is None
    assert point_estimate(cm, MetricId.TNR) == pytest.approx(0.75)


class TestPriorSpec:
    @pytest.mark.parametrize(
        "text,alpha,beta",
        [("laplace", 1.0, 1.0), ("jeffreys", 0.5, 0.5), ("haldane", 0.0, 0.0),
         ("custom:2,0.5", 2.0, 0.5)],
    )
    def test_parse(self, text, alpha, beta):
        prior = PriorSpec.parse(text)
        assert (prior.alpha, prior.beta) == (alpha, beta)

    def test_parse_rejects_unknown(self):
        with pytest.raises(ParseError):
            PriorSpec.parse("flat")

    def test_parse_rejects_bare_custom(self):
        with pytest.raises(ParseError):
            PriorSpec.parse("custom")

    def test_custom_rejects_negative(self):
        with pytest.raises(ValueError):
            PriorSpec.custom(-1.0, 1.0)

    def test_haldane_params_improper(self):
        assert not PriorSpec.haldane().params.is_proper


class TestBetaParams:
    def test_moments(self):
        p = BetaParams(27, 9)
        assert p.mean == pytest.approx(0.75)
        assert p.var == pytest.approx(27 * 9 / (36**2 * 37))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            BetaParams(-0.5, 1.0)


class TestPrevalencePolicy:
    def test_fixed_range(self):
        with pytest.raises(ValueError):
            PrevalencePolicy.fixed(1.5)

    def test_fixed_value(self):
        assert PrevalencePolicy.fixed(0.5).value == 0.5
