"""Classification machinery: trend labels, fits, and the disk integrals.

The trend labeler is exercised on hand-built ladders where the correct
answer is a matter of inspection; the quotient and integral conditions
are checked against measures whose tails and integrals have closed
forms, so every label asserted here can be verified by hand.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cesarops.carleson import (
    LABEL_DIVERGING,
    LABEL_FINITE,
    LABEL_INCONCLUSIVE,
    LABEL_VANISHING,
    CarlesonParams,
    carleson_integral,
    carleson_quotient,
    classify_measure,
    classify_moments,
    classify_tail,
    conclusive_agreement,
    dyadic_t_ladder,
    fit_moment_decay,
    integral_profile,
    trend_label,
)
from cesarops.measure import (
    MomentSequence,
    PointMass,
    PowerLogDensity,
    RadialMeasure,
    moments,
    scale_measure,
)
from cesarops.quadrature import QuadratureError


# -------------------------------------------------------------- trend label


def test_trend_label_needs_enough_points():
    assert trend_label([1.0, 2.0, 3.0]).label == LABEL_INCONCLUSIVE


def test_trend_label_rejects_nan():
    vals = [1.0, 1.0, 1.0, float("nan"), 1.0, 1.0, 1.0]
    assert trend_label(vals).label == LABEL_INCONCLUSIVE


def test_trend_label_infinity_means_diverging():
    vals = [1.0, 2.0, float("inf"), 4.0, 5.0, 6.0]
    assert trend_label(vals).label == LABEL_DIVERGING


def test_trend_label_all_zero_is_vanishing():
    assert trend_label([0.0] * 8).label == LABEL_VANISHING


def test_trend_label_dead_tail_is_vanishing():
    # Grows, then dies exactly; the dead tail must win over the early
    # growth, which is the situation of an atom past its location.
    vals = [1.0, 2.0, 4.0, 8.0, 0.0, 0.0, 0.0, 0.0]
    fit = trend_label(vals)
    assert fit.label == LABEL_VANISHING
    assert fit.terminal == 0.0
    assert fit.peak == 8.0


def test_trend_label_geometric_growth_is_diverging():
    vals = [2.0 ** j for j in range(10)]
    fit = trend_label(vals)
    assert fit.label == LABEL_DIVERGING
    assert fit.slope == pytest.approx(1.0, abs=1e-12)


def test_trend_label_constant_is_finite_looking():
    fit = trend_label([5.0] * 10)
    assert fit.label == LABEL_FINITE
    assert fit.slope == pytest.approx(0.0, abs=1e-12)


def test_trend_label_burn_in_discards_transient():
    # A huge transient in the first two entries must not hide the
    # geometric growth that follows.
    vals = [1e9, 1e9] + [2.0 ** j for j in range(8)]
    assert trend_label(vals).label == LABEL_DIVERGING


def test_trend_label_unsettled_window_is_inconclusive():
    vals = [100.0, 1.0] * 5
    assert trend_label(vals).label == LABEL_INCONCLUSIVE


def test_trend_label_zeros_are_dropped_from_the_fit():
    vals = [0.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
    assert trend_label(vals).label == LABEL_DIVERGING


# ---------------------------------------------------------------- quotient


def test_quotient_for_lebesgue_is_identically_one(catalog):
    params = CarlesonParams(1.0, 0.0)
    for t in dyadic_t_ladder(14):
        got = carleson_quotient(catalog["lebesgue"], t, params)
        assert got == pytest.approx(1.0, rel=1e-12)


def test_quotient_domain_is_half_open(catalog):
    params = CarlesonParams(1.0, 0.0)
    with pytest.raises(ValueError):
        carleson_quotient(catalog["lebesgue"], 1.0, params)
    with pytest.raises(ValueError):
        carleson_quotient(catalog["lebesgue"], -0.1, params)


def test_tail_classification_closed_forms(catalog):
    params = CarlesonParams(1.0, 0.0)
    res = classify_tail(catalog["lebesgue"], params)
    assert res.label == LABEL_FINITE
    assert np.allclose(res.values, 1.0, rtol=1e-12)

    res = classify_tail(catalog["atom09"], params)
    assert res.label == LABEL_VANISHING
    # Up to t = 7/8 the tail is the full mass; past the atom it is zero.
    assert res.values[3] == pytest.approx(8.0)
    assert res.values[4:] == (0.0,) * (len(res.values) - 4)


def test_parameter_validation():
    with pytest.raises(ValueError):
        CarlesonParams(0.0, 0.0)
    with pytest.raises(ValueError):
        CarlesonParams(1.0, -0.5)
    with pytest.raises(ValueError):
        CarlesonParams(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        CarlesonParams(1.0, 0.0, 1.0, 1.0)  # r_exp must stay below s


# ------------------------------------------------------------- moment fits


def synthetic_moments(shape, n_max=2 ** 13):
    n = np.arange(n_max + 1, dtype=float)
    return MomentSequence(shape(n), n_max, 0.0)


def test_fit_recovers_pure_power_law():
    mu = synthetic_moments(lambda n: (n + 1.0) ** -1.3)
    exponent, log_exponent, resid = fit_moment_decay(mu)
    assert exponent == pytest.approx(-1.3, abs=1e-9)
    assert log_exponent == pytest.approx(0.0, abs=1e-7)
    assert resid < 1e-10


def test_fit_recovers_logarithmic_correction():
    mu = synthetic_moments(
        lambda n: (n + 1.0) ** -1.0 * np.log(n + 2.0) ** -0.8)
    exponent, log_exponent, _ = fit_moment_decay(mu)
    assert exponent == pytest.approx(-1.0, abs=0.01)
    assert log_exponent == pytest.approx(-0.8, abs=0.05)


def test_fit_with_too_few_points_is_nan():
    mu = synthetic_moments(lambda n: (n + 1.0) ** -1.0, n_max=64)
    exponent, log_exponent, resid = fit_moment_decay(mu, n_lo=64)
    assert math.isnan(exponent) and math.isnan(log_exponent)
    assert math.isnan(resid)


def test_classify_moments_needs_a_long_ladder(catalog):
    mu = moments(catalog["lebesgue"], 512)
    with pytest.raises(ValueError):
        classify_moments(mu, CarlesonParams(1.0, 0.0))


def test_classify_moments_lebesgue(catalog):
    mu = moments(catalog["lebesgue"], 2 ** 12)
    res = classify_moments(mu, CarlesonParams(1.0, 0.0))
    assert res.label == LABEL_FINITE
    assert res.fitted_exponent == pytest.approx(-1.0, abs=1e-6)


# ----------------------------------------------------------- disk integral


def test_integral_of_origin_atom_is_its_mass():
    m = RadialMeasure((PointMass(1.0, 0.0),))
    for variant in ("ii", "iii", "iv"):
        for params in (CarlesonParams(1.0, 0.0),
                       CarlesonParams(2.0, 1.0, 1.5, 0.5)):
            assert carleson_integral(m, 0.0, params, variant) == pytest.approx(
                1.0, rel=1e-12)


def test_integral_for_lebesgue_is_one_on_the_real_ray(catalog):
    # s = 1, t_exp = 1, r_exp = 0 gives theta = 2 and
    # (1-rho) * int (1-rho x)^-2 dx == 1 for every rho.
    params = CarlesonParams(1.0, 0.0)
    for rho in (0.0, 0.5, 0.999, 1.0 - 2.0 ** -18):
        got = carleson_integral(catalog["lebesgue"], rho, params, "ii")
        assert got == pytest.approx(1.0, rel=1e-9)


def test_integral_variants_are_ordered(catalog):
    params = CarlesonParams(1.0, 0.0)
    a = 0.6 * complex(math.cos(0.7), math.sin(0.7))
    slack = 1.0 + 1e-9
    for m in catalog.values():
        two = carleson_integral(m, abs(a), params, "ii")
        three = carleson_integral(m, a, params, "iii")
        four = carleson_integral(m, a, params, "iv")
        assert four <= three * slack
        assert three <= two * slack


def test_integral_rejects_boundary_point(catalog):
    with pytest.raises(ValueError):
        carleson_integral(catalog["lebesgue"], 1.0, CarlesonParams(1.0, 0.0))


def test_integral_divergence_is_detected_analytically():
    # gamma - r_exp < 0: the endpoint power is non-integrable.
    slow = RadialMeasure((PowerLogDensity(1.0, 0.5, 0.0),))
    params = CarlesonParams(1.0, 0.0, 1.0, 0.75)
    assert carleson_integral(slow, 0.5, params) == float("inf")
    # gamma - r_exp = 0 with no logarithmic help: still divergent.
    params = CarlesonParams(1.0, 0.0, 1.0, 0.5)
    assert carleson_integral(slow, 0.5, params) == float("inf")


def test_integral_borderline_convergence_is_refused():
    # gamma - r_exp = 0 rescued only by log^-2: convergent, but far too
    # slowly for a truncated quadrature to certify.
    slow = RadialMeasure((PowerLogDensity(1.0, 0.5, 2.0),))
    params = CarlesonParams(1.0, 0.0, 1.0, 0.5)
    with pytest.raises(QuadratureError):
        carleson_integral(slow, 0.5, params)


def test_integral_profile_consensus_and_shape(catalog):
    params = CarlesonParams(1.0, 0.0)
    res = integral_profile(catalog["lebesgue"], params, "ii", depth=10)
    assert res.criterion == "integral"
    assert res.label == LABEL_FINITE
    assert len(res.subresults) == 1  # variant ii runs the real ray only
    assert len(res.grid) == 11

    res = integral_profile(catalog["lebesgue"], params, "iii", depth=8)
    assert len(res.subresults) == 3


def test_integral_profile_reports_quadrature_failures():
    slow = RadialMeasure((PowerLogDensity(1.0, 0.5, 2.0),))
    params = CarlesonParams(1.0, 0.0, 1.0, 0.5)
    res = integral_profile(slow, params, "ii", depth=8)
    assert res.label == LABEL_INCONCLUSIVE
    assert res.note != ""


# ----------------------------------------------------------- full verdicts


def test_three_criteria_agree_for_lebesgue(catalog):
    verdict = classify_measure(catalog["lebesgue"], CarlesonParams(1.0, 0.0),
                               n_max=2 ** 12)
    assert verdict.per_criterion == {
        "tail": LABEL_FINITE,
        "moments": LABEL_FINITE,
        "integral": LABEL_FINITE,
    }
    assert verdict.agreement
    assert conclusive_agreement(verdict)
    assert verdict.sup_estimate == pytest.approx(1.0)
    assert verdict.fitted_exponent == pytest.approx(-1.0, abs=1e-6)


def test_three_criteria_agree_for_the_atom(catalog):
    verdict = classify_measure(catalog["atom09"], CarlesonParams(1.0, 0.0),
                               n_max=2 ** 12)
    assert set(verdict.per_criterion.values()) == {LABEL_VANISHING}
    assert conclusive_agreement(verdict)


def test_conclusive_agreement_requires_a_conclusive_label(catalog):
    verdict = classify_measure(catalog["lebesgue"], CarlesonParams(1.0, 0.0),
                               n_max=2 ** 12)
    inconclusive = {k: LABEL_INCONCLUSIVE for k in verdict.per_criterion}
    stripped = type(verdict)(
        params=verdict.params, sup_estimate=verdict.sup_estimate,
        limit_estimate=verdict.limit_estimate,
        fitted_exponent=verdict.fitted_exponent,
        fitted_log_exponent=verdict.fitted_log_exponent,
        per_criterion=inconclusive, agreement=True,
        criteria=verdict.criteria)
    assert not conclusive_agreement(stripped)


# ------------------------------------------------------------- properties


@settings(max_examples=20, deadline=None)
@given(factor=st.floats(1e-3, 1e3),
       name=st.sampled_from(["atom09", "power_half", "power_two"]))
def test_tail_label_is_scale_invariant(catalog, factor, name):
    params = CarlesonParams(1.0, 0.5)
    base = classify_tail(catalog[name], params)
    scaled = classify_tail(scale_measure(catalog[name], factor), params)
    assert scaled.label == base.label
