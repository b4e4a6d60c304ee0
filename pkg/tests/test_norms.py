"""Norm machinery against brute-force circle and disc integrals.

Every quantity produced by :mod:`cesarops.norms` has an independent
check here: integral means against dense Riemann sums and against the
coefficient (Parseval) identity, the Besov seminorm against a
singularity-aware radial quadrature done with mpmath, and the sup-type
norms against functions whose extremal radius is known exactly.
"""

import math

import mpmath
import numpy as np
import numpy.polynomial.polynomial as npoly
import pytest
from hypothesis import given, settings, strategies as st

from cesarops.norms import (
    NormEstimate,
    besov_norm,
    bloch_norm,
    circle_values,
    default_z_ladder,
    growth_ratio,
    integral_mean,
    mean_lipschitz_norm,
)
from cesarops.series import PowerSeries, derivative, log_series

from conftest import random_series


def brute_mean(f, r, p, m=1 << 16):
    """Riemann-sum p-mean on the circle, m equally spaced angles."""
    theta = np.arange(m) * (2.0 * math.pi / m)
    vals = np.abs(npoly.polyval(r * np.exp(1j * theta), f.coeffs))
    return float(np.mean(vals ** p)) ** (1.0 / p)


# ----------------------------------------------------------------- samples


def test_circle_values_match_naive_polyval(rng):
    f = random_series(rng, 40)
    for r, m in [(0.7, 64), (0.7, 7), (1.0, 13), (0.0, 8)]:
        theta = np.arange(m) * (2.0 * math.pi / m)
        want = npoly.polyval(r * np.exp(1j * theta), f.coeffs)
        got = circle_values(f, r, m)
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


# ----------------------------------------------------------- integral means


def test_mean_square_matches_coefficient_sum(rng):
    # Parseval: M_2(r, f')^2 == sum n^2 |a_n|^2 r^(2n-2).
    f = random_series(rng, 1024)
    n = np.arange(1.0, 1025.0)
    for r in (0.5, 1.0 - 2.0 ** -10):
        want = math.sqrt(float(np.sum(n ** 2 * np.abs(f.coeffs[1:]) ** 2
                                      * r ** (2 * n - 2))))
        got = integral_mean(f, r, 2.0, use_derivative=True)
        assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_mean_p_matches_riemann_sum(rng, p):
    f = random_series(rng, 24)
    for r in (0.3, 0.85):
        assert integral_mean(f, r, p) == pytest.approx(
            brute_mean(f, r, p), rel=1e-9)


def test_mean_derivative_flag_equals_explicit_derivative(rng):
    f = random_series(rng, 17)
    got = integral_mean(f, 0.6, 2.0, use_derivative=True)
    want = integral_mean(derivative(f), 0.6, 2.0)
    assert got == want


def test_mean_rejects_nonpositive_exponent():
    with pytest.raises(ValueError):
        integral_mean(PowerSeries([1.0, 1.0]), 0.5, 0.0)


def test_mean_of_zero_function_is_zero():
    assert integral_mean(PowerSeries([0.0, 0.0]), 0.5, 1.5) == 0.0


# ------------------------------------------------------------- sup ladders


def test_bloch_norm_of_identity_is_one():
    est = bloch_norm(PowerSeries([0.0, 1.0]))
    assert est.value == pytest.approx(1.0, abs=1e-12)
    assert est.converged


def test_bloch_norm_includes_value_at_origin():
    est = bloch_norm(PowerSeries([3.0 - 4.0j, 1.0]))
    assert est.value == pytest.approx(6.0, abs=1e-12)


def test_bloch_norm_of_truncated_logarithm():
    # f = log 1/(1-z) has Bloch norm sup (1-r^2)/(1-r) = 2; a long
    # truncation reproduces it to three decimals.
    est = bloch_norm(log_series(16384))
    assert abs(est.value - 2.0) <= 1e-3


def test_mean_lipschitz_of_identity_is_one():
    est = mean_lipschitz_norm(PowerSeries([0.0, 1.0]), 2.0, 0.5)
    assert est.value == pytest.approx(1.0, abs=1e-12)


def test_mean_lipschitz_argument_validation():
    f = PowerSeries([0.0, 1.0])
    with pytest.raises(ValueError):
        mean_lipschitz_norm(f, 0.5, 0.5)
    with pytest.raises(ValueError):
        mean_lipschitz_norm(f, 2.0, 0.0)
    with pytest.raises(ValueError):
        mean_lipschitz_norm(f, 2.0, 1.5)


def test_norm_estimate_last_increment():
    est = NormEstimate(2.0, (1.0, 1.75, 2.0), True, "test grid")
    assert est.last_increment() == pytest.approx(0.25)
    single = NormEstimate(1.0, (1.0,), True, "test grid")
    assert single.last_increment() == 0.0


# -------------------------------------------------------------- besov norm


def test_besov_norm_of_identity_is_one():
    # f = z, p = 2: the disc integral of |f'|^2 against the normalized
    # weight is exactly 1.
    est = besov_norm(PowerSeries([0.0, 1.0]), 2.0)
    assert est.value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_besov_norm_matches_mpmath_radial_integral(p):
    # f' = 2 + z is zero-free on every circle, so the angular mean is
    # smooth and a uniform grid nails it; mpmath's tanh-sinh rule then
    # absorbs the (1-r)^(p-2) endpoint singularity of the radial factor.
    f = PowerSeries([0.3, 2.0, 0.25])

    def radial(x):
        # x = 1 - r; the x**(p-2) factor stays in mpmath so the
        # tanh-sinh nodes next to x = 0 do not underflow to 0**(-1/2).
        x = mpmath.mpf(x)
        r = float(1.0 - x)
        mean_p = brute_mean(derivative(f), r, p, m=4096) ** p
        return x ** (p - 2.0) * float((2.0 - x) ** (p - 2.0)) * 2.0 * r * mean_p

    brute = float(mpmath.quad(radial, [0.0, 0.05, 0.5, 1.0])) ** (1.0 / p)
    est = besov_norm(f, p)
    assert est.value == pytest.approx(0.3 + brute, rel=1e-8)


def test_besov_norm_rejects_exponent_one():
    with pytest.raises(ValueError):
        besov_norm(PowerSeries([0.0, 1.0]), 1.0)


# ------------------------------------------------------------ growth ratio


def test_growth_ratio_of_constant_against_unit_norm():
    # With the norm pinned to 1 the sup is attained at z = 0, where the
    # logarithmic weight is smallest: 1 / sqrt(log 2).
    got = growth_ratio(PowerSeries([1.0]), 2.0, norm_value=1.0)
    assert got == pytest.approx(1.0 / math.sqrt(math.log(2.0)), rel=1e-12)


def test_growth_ratio_argument_validation():
    f = PowerSeries([0.0, 1.0])
    with pytest.raises(ValueError):
        growth_ratio(f, 1.0)
    with pytest.raises(ValueError):
        growth_ratio(f, 2.0, z_ladder=())
    with pytest.raises(ValueError):
        growth_ratio(f, 2.0, z_ladder=(1.0,))
    with pytest.raises(ValueError):
        growth_ratio(PowerSeries([0.0]), 2.0)


def test_default_z_ladder_is_dyadic():
    ladder = default_z_ladder(3)
    assert ladder == (0.0, 0.5, 0.75, 0.875)


# ------------------------------------------------------------- properties


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2 ** 31), r_lo=st.floats(0.0, 0.9),
       step=st.floats(0.001, 0.09))
def test_integral_mean_is_nondecreasing_in_radius(seed, r_lo, step):
    gen = np.random.default_rng(seed)
    f = random_series(gen, 12)
    lo = integral_mean(f, r_lo, 2.0)
    hi = integral_mean(f, r_lo + step, 2.0)
    assert hi >= lo - 1e-12 * max(1.0, hi)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2 ** 31),
       scale=st.floats(0.1, 10.0), phase=st.floats(0.0, 6.28))
def test_bloch_norm_is_absolutely_homogeneous(seed, scale, phase):
    gen = np.random.default_rng(seed)
    f = random_series(gen, 10)
    c = scale * complex(math.cos(phase), math.sin(phase))
    plain = bloch_norm(f, max_levels=3).value
    scaled = bloch_norm(PowerSeries(f.coeffs * c), max_levels=3).value
    assert scaled == pytest.approx(abs(c) * plain, rel=1e-9)
