import math

import numpy as np
import pytest
from scipy.integrate import quad

from levyspec import (CustomJumpDensity, LevyTriplet, ModelClass,
                      StableJumpDensity, StableLaw, cauchy_triplet,
                      check_small_jump_bound, gamma_process_density,
                      increment_stable_law, levy_khintchine_cf,
                      oscillating_density, partition_density, picard_cf_bound,
                      picard_derivative_bound, spectral_bias_bound, stable_cf,
                      stable_density_l2_norm, truncated_moment_ratio,
                      truncated_second_moment)

U_GRID = np.array([-7.3, -2.0, -0.9, -0.31, 0.4, 1.0, 2.6, 5.5])

SKEWED_07 = LevyTriplet(0.0, 0.0, StableJumpDensity(2.0, 1.0, 0.7))
SKEWED_17 = LevyTriplet(0.0, 0.0, StableJumpDensity(2.0, 1.0, 1.7))
SKEWED_1 = LevyTriplet(0.0, 0.0, StableJumpDensity(2.0, 1.0, 1.0))
MIXED = LevyTriplet(0.3, 0.8, StableJumpDensity(1.5, 0.5, 1.2))
GAUSS = LevyTriplet(0.0, 2.0, None)

ALL_TRIPLETS = [SKEWED_07, SKEWED_17, SKEWED_1, MIXED, GAUSS, cauchy_triplet()]


# ---------------------------------------------------------------------------
# type invariants

def test_type_validation():
    with pytest.raises(ValueError):
        StableJumpDensity(0.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        StableJumpDensity(1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        LevyTriplet(0.0, -1.0, None)
    with pytest.raises(ValueError):
        LevyTriplet(0.0, 0.0, None)  # no density computation path
    with pytest.raises(ValueError):
        StableLaw(1.0, -1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        StableLaw(1.0, 1.0, 1.5, 0.0)
    with pytest.raises(ValueError):
        ModelClass.pure_jump(-1.0, 0.5)
    with pytest.raises(ValueError):
        ModelClass("gaussian", M=1.0)


def test_custom_density_rejects_negative_evaluator():
    with pytest.raises(ValueError):
        CustomJumpDensity(lambda x: -1.0)


# ---------------------------------------------------------------------------
# Levy-Khintchine characteristic function

def test_cf_at_zero_is_one():
    for trip in ALL_TRIPLETS:
        assert levy_khintchine_cf(trip, 0.7, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_pure_gaussian_cf():
    got = levy_khintchine_cf(GAUSS, 0.5, U_GRID)
    np.testing.assert_allclose(got, np.exp(-0.5 * 2.0 * U_GRID ** 2 / 2.0), rtol=1e-14)


def test_cauchy_cf_closed_form():
    for t in (0.1, 1.0):
        got = levy_khintchine_cf(cauchy_triplet(), t, U_GRID)
        np.testing.assert_allclose(got, np.exp(-t * np.abs(U_GRID)), rtol=1e-12)


def test_cauchy_cf_against_density_fourier_transform():
    # oracle: Fourier transform of dt/(pi (x^2 + dt^2)) by Fourier-weighted quadrature
    dt = 0.1
    for u in (0.4, 1.7, 6.0):
        val, _ = quad(lambda x: dt / (math.pi * (x * x + dt * dt)),
                      0.0, np.inf, weight="cos", wvar=u)
        assert levy_khintchine_cf(cauchy_triplet(), dt, u) == pytest.approx(
            2.0 * val, abs=1e-8)


def test_conjugate_symmetry_and_modulus():
    for trip in ALL_TRIPLETS:
        plus = levy_khintchine_cf(trip, 0.7, U_GRID)
        minus = levy_khintchine_cf(trip, 0.7, -U_GRID)
        np.testing.assert_allclose(minus, np.conj(plus), rtol=1e-13)
        assert np.all(np.abs(plus) <= 1.0 + 1e-13)


def test_semigroup_property():
    for trip in ALL_TRIPLETS:
        t1, t2 = 0.4, 1.3
        lhs = levy_khintchine_cf(trip, t1 + t2, U_GRID)
        rhs = levy_khintchine_cf(trip, t1, U_GRID) * levy_khintchine_cf(trip, t2, U_GRID)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-300)


def test_custom_quadrature_matches_stable_closed_form():
    for trip in (SKEWED_07, SKEWED_17, SKEWED_1):
        sj = trip.jumps
        custom = CustomJumpDensity(lambda x, sj=sj: float(sj(x)),
                                   integrability_hint=sj.alpha, check=False)
        got = levy_khintchine_cf(LevyTriplet(0.0, 0.0, custom), 1.0, U_GRID)
        want = levy_khintchine_cf(trip, 1.0, U_GRID)
        np.testing.assert_allclose(got, want, atol=1e-8)


def test_gamma_process_cf_closed_form():
    # int_0^inf (e^{iux}-1) e^{-x}/x dx = -log(1-iu); truncation adds a drift
    trip = LevyTriplet(0.0, 0.0, gamma_process_density())
    u = np.array([0.3, 1.0, 4.0])
    for t in (0.5, 2.0):
        want = np.exp(t * (-np.log(1 - 1j * u) - 1j * u * (1.0 - math.exp(-1.0))))
        np.testing.assert_allclose(levy_khintchine_cf(trip, t, u), want, atol=1e-9)


# ---------------------------------------------------------------------------
# stable law of an increment

def test_increment_stable_law_cauchy():
    for dt in (0.1, 1.0, 2.5):
        law = increment_stable_law(cauchy_triplet().jumps, dt)
        assert law.alpha == 1.0
        assert law.gamma == pytest.approx(dt, rel=1e-14)
        assert law.beta == 0.0
        assert law.delta == 0.0
        np.testing.assert_allclose(stable_cf(law, U_GRID),
                                   np.exp(-dt * np.abs(U_GRID)), rtol=1e-13)


def test_increment_stable_law_symmetric_has_zero_skew():
    for alpha in (0.4, 1.3, 1.9):
        law = increment_stable_law(StableJumpDensity(0.8, 0.8, alpha), 0.7)
        assert law.beta == 0.0
        assert law.delta == pytest.approx(0.0, abs=1e-15)


def test_increment_stable_law_skewed_values():
    law = increment_stable_law(StableJumpDensity(2.0, 1.0, 0.7), 1.0)
    assert law.beta == pytest.approx(1.0 / 3.0, rel=1e-14)
    # gamma^alpha = Gamma(0.3) * 3 * cos(0.35 pi) / 0.7
    want_scale = math.gamma(0.3) * 3.0 * math.cos(0.35 * math.pi) / 0.7
    assert law.gamma == pytest.approx(want_scale ** (1 / 0.7), rel=1e-12)
    assert law.gamma == pytest.approx(12.38, abs=5e-3)
    # location induced by the truncated compensator of the LK exponent
    assert law.delta == pytest.approx((1.0 - 2.0) / (1.0 - 0.7), rel=1e-12)


@pytest.mark.parametrize("trip", [SKEWED_07, SKEWED_17, SKEWED_1, cauchy_triplet()])
def test_stable_cf_equals_levy_khintchine(trip):
    # cross-module consistency oracle on a standard grid
    for dt in (0.1, 1.0):
        law = increment_stable_law(trip.jumps, dt)
        np.testing.assert_allclose(stable_cf(law, U_GRID),
                                   levy_khintchine_cf(trip, dt, U_GRID),
                                   atol=1e-6)


def test_stable_cf_basics():
    law = StableLaw(1.4, 2.0, -0.6, 0.9)
    assert stable_cf(law, 0.0) == pytest.approx(1.0, abs=1e-15)
    got = np.abs(stable_cf(law, U_GRID))
    np.testing.assert_allclose(got, np.exp(-law.gamma ** 1.4 * np.abs(U_GRID) ** 1.4),
                               rtol=1e-13)


# ---------------------------------------------------------------------------
# small-jump activity

def test_truncated_second_moment_stable_closed_form():
    jumps = StableJumpDensity(2.0, 1.0, 0.7)
    for eta in (1e-3, 0.05, 1.0):
        want = 3.0 * eta ** 1.3 / 1.3
        assert truncated_second_moment(jumps, eta) == pytest.approx(want, rel=1e-8)


def test_small_jump_bound_stable_equality_case():
    jumps = StableJumpDensity(2.0, 1.0, 0.7)
    M = jumps.activity_constant  # (P+Q)/(2-alpha): equality at every eta
    assert check_small_jump_bound(jumps, M, 0.7) is True
    assert check_small_jump_bound(jumps, 2.0 * M, 0.7) is False


def test_small_jump_bound_rejects_gamma_process():
    # zero power-law index: the truncated moment ratio collapses near 0
    grid = np.array([1e-4, 1e-2, 1.0])
    assert check_small_jump_bound(gamma_process_density(), 0.5, 0.5, grid) is False


def test_moment_ratio_stable_constant_at_matching_exponent():
    jumps = StableJumpDensity(2.0, 1.0, 0.7)
    want = jumps.activity_constant
    for eta in (1e-4, 1e-2, 0.3, 1.0):
        assert truncated_moment_ratio(jumps, eta, 0.7) == pytest.approx(want, rel=1e-7)


def test_moment_ratio_stable_off_exponent_trend():
    # ratio = const * eta^(g - alpha): overshooting exponents send it to 0,
    # undershooting ones blow it up
    jumps = StableJumpDensity(1.0, 1.0, 0.9)
    etas = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    above = [truncated_moment_ratio(jumps, e, 0.9 + 0.2) for e in etas]
    below = [truncated_moment_ratio(jumps, e, 0.9 - 0.2) for e in etas]
    assert all(a > b for a, b in zip(above, above[1:]))   # vanishes as eta -> 0
    assert all(a < b for a, b in zip(below, below[1:]))   # diverges as eta -> 0


def test_moment_ratio_partition_density_vanishes_along_even_etas():
    # closed-form oracle: sum of width / (2/3) x^{3/2} pieces of the dyadic tower
    dens = partition_density()
    etas = [2.0 ** -(2.0 ** (2 * k)) for k in (1, 2, 3)]

    def exact(eta_2k, k):
        total = 0.0
        for i in range(k, k + 6):
            e_2i = 2.0 ** -(2.0 ** (2 * i))
            e_2i1 = 2.0 ** -(2.0 ** (2 * i + 1))
            e_2i2 = 2.0 ** -(2.0 ** (2 * i + 2))
            total += (e_2i1 - e_2i2) + (2.0 / 3.0) * (e_2i ** 1.5 - e_2i1 ** 1.5)
        return eta_2k ** (0.6 - 2.0) * total

    got = [truncated_moment_ratio(dens, e, 0.6) for e in etas]
    for g, (e, k) in zip(got, [(etas[0], 1), (etas[1], 2), (etas[2], 3)]):
        assert g == pytest.approx(exact(e, k), rel=1e-6)
    assert got[0] > got[1] > got[2]  # tends to 0 along the even subsequence


def test_moment_ratio_oscillating_density_bounded_below():
    dens = oscillating_density(alpha=0.5, beta=1.5)
    # exponent below the upper envelope index: ratio stays bounded away from 0
    vals = [truncated_moment_ratio(dens, eta, 1.4, rtol=1e-3)
            for eta in (1e-2, 1e-3, 1e-4)]
    assert all(v > 1.0 for v in vals)


# ---------------------------------------------------------------------------
# closed-form bounds

def test_picard_cf_bound_values():
    assert picard_cf_bound(0.8, 0.5, 2.0, math.pi / 2.0) == pytest.approx(
        math.exp(-0.8 * 2.0), rel=1e-13)
    assert picard_cf_bound(1.0, 1.0, 1.0, math.pi) == pytest.approx(
        math.exp(-2.0), rel=1e-13)
    with pytest.raises(ValueError):
        picard_cf_bound(1.0, 1.0, 1.0, 1.0)


def test_picard_cf_bound_dominates_cauchy_cf():
    M = (2.0 / math.pi) / 1.0  # (P+Q)/(2-alpha) for the unit Cauchy density
    u = np.linspace(math.pi / 2.0, 40.0, 200)
    for t in (0.1, 1.0):
        cf = np.abs(levy_khintchine_cf(cauchy_triplet(), t, u))
        assert np.all(cf <= picard_cf_bound(M, 1.0, t, u) + 1e-12)


def test_picard_derivative_bound_values():
    # k=0, alpha=1: 1/2 + (pi / 2tM) e^{-tM}
    for t, M in ((1.0, 1.0), (0.5, 2.0), (2.0, 0.3)):
        want = 0.5 + math.pi / (2.0 * t * M) * math.exp(-t * M)
        assert picard_derivative_bound(0, t, M, 1.0) == pytest.approx(want, rel=1e-10)
    assert picard_derivative_bound(0, 1.0, 1.0, 1.0) == pytest.approx(
        0.5 + (math.pi / 2.0) * math.exp(-1.0), rel=1e-12)


def test_picard_derivative_bound_dominates_cauchy_sup():
    # sup of dt/(pi(x^2+dt^2)) is 1/(pi dt)
    for dt in (0.1, 1.0):
        bound = picard_derivative_bound(0, dt, 2.0 / math.pi, 1.0)
        assert 1.0 / (math.pi * dt) <= bound


def test_bias_bound_gaussian():
    g = ModelClass.gaussian_dominant()
    for sigma2, dt in ((1.0, 1.0), (4.0, 0.25)):
        want0 = 1.0 / (2.0 * math.sqrt(sigma2) * math.sqrt(math.pi * dt))
        assert spectral_bias_bound(g, sigma2, 0.0, dt) == pytest.approx(want0, rel=1e-12)
    # sigma2 * dt = 1, m = 3: quadrature oracle for (1/pi) int_3^inf e^{-u^2} du
    oracle, _ = quad(lambda v: math.exp(-v * v) / math.pi, 3.0, np.inf, epsrel=1e-13)
    assert spectral_bias_bound(g, 1.0, 3.0, 1.0) == pytest.approx(oracle, rel=1e-10)
    assert spectral_bias_bound(g, 1.0, 3.0, 1.0) == pytest.approx(6.23e-6, rel=2e-3)


def test_bias_bound_jump():
    pj = ModelClass.pure_jump(1.0, 1.0)
    assert spectral_bias_bound(pj, 0.0, math.pi / 2.0, 1.0) == pytest.approx(
        math.exp(-1.0) / 2.0, rel=1e-12)
    with pytest.raises(ValueError):
        spectral_bias_bound(pj, 0.0, 1.0, 1.0)  # m below pi/2
    with pytest.raises(ValueError):
        spectral_bias_bound(ModelClass.mixed(1.0, 1.0), 1.0, 2.0, 1.0)


def test_bias_bound_nonincreasing_in_m():
    g = ModelClass.gaussian_dominant()
    pj = ModelClass.pure_jump(0.7, 0.9)
    ms = np.linspace(0.0, 12.0, 30)
    gv = [spectral_bias_bound(g, 0.5, m, 0.5) for m in ms]
    assert all(a >= b for a, b in zip(gv, gv[1:]))
    ms = np.linspace(math.pi / 2.0, 12.0, 30)
    jv = [spectral_bias_bound(pj, 0.0, m, 0.5) for m in ms]
    assert all(a >= b for a, b in zip(jv, jv[1:]))


def test_stable_density_l2_norm():
    assert stable_density_l2_norm(StableLaw(1.0, 1.0, 0.0, 0.0)) == pytest.approx(
        1.0 / (2.0 * math.pi), rel=1e-14)
    # skew independence
    a = stable_density_l2_norm(StableLaw(1.3, 0.8, 0.5, 0.0))
    b = stable_density_l2_norm(StableLaw(1.3, 0.8, -0.5, 3.0))
    assert a == b
    # quadrature oracle for the 1.7-stable increment law
    law = increment_stable_law(StableJumpDensity(2.0, 1.0, 1.7), 1.0)
    oracle, _ = quad(lambda v: math.exp(-2.0 * law.gamma ** 1.7 * v ** 1.7) / math.pi,
                     0.0, np.inf, epsrel=1e-12)
    assert stable_density_l2_norm(law) == pytest.approx(oracle, rel=1e-8)
