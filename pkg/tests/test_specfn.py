"""Special-function kernel against independent oracles."""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from fockdecay.specfn import (
    LaguerreSeries,
    bessel_j0,
    laguerre,
    laguerre_sum,
    log_binomial,
    upper_incomplete_gamma,
)


def laguerre_explicit(n, x):
    """Oracle: the finite alternating series, in exact rational arithmetic."""
    xq = Fraction(x)
    total = sum(
        (-xq) ** m / math.factorial(m) * math.comb(n, m) for m in range(n + 1)
    )
    return float(total)


class TestLaguerre:
    def test_order_zero_is_one(self):
        for x in (0.0, 0.1, 3.7, 50.0):
            assert laguerre(0, x) == 1.0

    def test_order_one(self):
        assert laguerre(1, 2.0) == -1.0
        assert laguerre(1, 0.0) == 1.0

    def test_order_two_explicit(self):
        # 1 - 2x + x^2/2 at x=2: 1 - 4 + 2
        assert laguerre(2, 2.0) == pytest.approx(-1.0, rel=1e-14)

    @pytest.mark.parametrize("n", range(11))
    @pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 5.0, 10.0])
    def test_recurrence_matches_explicit_sum(self, n, x):
        expected = laguerre_explicit(n, x)
        got = laguerre(n, x)
        assert got == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_vectorized_matches_scalar(self):
        xs = np.linspace(0.0, 20.0, 37)
        vec = laguerre(6, xs)
        assert vec.shape == xs.shape
        for x, v in zip(xs, vec):
            assert v == laguerre(6, float(x))

    def test_high_order_against_mpmath(self):
        for x in (0.5, 7.0, 40.0, 90.0):
            ref = float(mp.laguerre(50, 0, x))
            assert laguerre(50, x) == pytest.approx(ref, rel=1e-11, abs=1e-13)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            laguerre(3, -0.1)
        with pytest.raises(ValueError):
            laguerre(3, float("nan"))
        with pytest.raises(ValueError):
            laguerre(-1, 1.0)
        with pytest.raises(ValueError):
            laguerre(2.5, 1.0)

    def test_laguerre_sum_matches_direct(self):
        rng = np.random.default_rng(42)
        w = rng.uniform(-1, 1, size=9)
        xs = np.linspace(0.0, 30.0, 11)
        direct = sum(w[m] * laguerre(m, xs) for m in range(9))
        assert np.allclose(laguerre_sum(w, xs), direct, rtol=1e-12, atol=1e-14)

    def test_series_object(self):
        series = LaguerreSeries(4)
        assert series.order == 4
        assert series(1.3) == laguerre(4, 1.3)
        with pytest.raises(ValueError):
            LaguerreSeries(-2)


class TestLogBinomial:
    def test_trivial_values(self):
        assert math.exp(log_binomial(5, 2)) == pytest.approx(10.0, rel=1e-13)
        assert log_binomial(7, 0) == 0.0

    def test_pascal_triangle_value(self):
        # C(20,10) built by integer Pascal recursion, frozen
        assert math.comb(20, 10) == 184756
        assert log_binomial(20, 10) == pytest.approx(math.log(184756), rel=1e-13)

    def test_exact_for_all_small_binomials(self):
        for n in range(26):
            for k in range(n + 1):
                exact = math.comb(n, k)
                assert math.exp(log_binomial(n, k)) == pytest.approx(exact, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            log_binomial(3, 4)
        with pytest.raises(ValueError):
            log_binomial(-1, 0)
        with pytest.raises(ValueError):
            log_binomial(3, -1)


class TestUpperIncompleteGamma:
    def test_at_zero_is_factorial(self):
        for k in range(16):
            assert upper_incomplete_gamma(k, 0.0) == float(math.factorial(k))

    def test_exponential_case(self):
        assert upper_incomplete_gamma(0, 0.5) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_integration_by_parts_case(self):
        # integral_s^inf u e^{-u} du = (s+1) e^{-s} at s = 1/2
        assert upper_incomplete_gamma(1, 0.5) == pytest.approx(
            1.5 * math.exp(-0.5), rel=1e-14
        )

    @pytest.mark.parametrize("s", [0.1, 1.0, 5.0])
    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_derivative_property(self, k, s):
        # d/ds Gamma(k+1, s) = -s^k e^{-s}; k is kept small enough that the
        # derivative is resolvable against Gamma's rounding noise in doubles
        h = 1e-5 * max(1.0, s)
        fd = (upper_incomplete_gamma(k, s + h) - upper_incomplete_gamma(k, s - h)) / (2 * h)
        expected = -(s ** k) * math.exp(-s)
        assert fd == pytest.approx(expected, rel=1e-6)

    def test_against_mpmath(self):
        for k in (0, 2, 7, 20, 50):
            for s in (0.3, 4.0, 30.0, 120.0):
                ref = float(mp.gammainc(k + 1, s))
                assert upper_incomplete_gamma(k, s) == pytest.approx(ref, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            upper_incomplete_gamma(2, -0.5)
        with pytest.raises(ValueError):
            upper_incomplete_gamma(-1, 0.5)


class TestBesselJ0:
    def test_at_zero(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_root_by_independent_refinement(self):
        # bisection on the power series, written out locally
        def series(x):
            w = (x / 2.0) ** 2
            total, term = 1.0, 1.0
            for k in range(1, 40):
                term *= -w / (k * k)
                total += term
            return total

        lo, hi = 2.0, 3.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if series(lo) * series(mid) <= 0:
                hi = mid
            else:
                lo = mid
        root = 0.5 * (lo + hi)
        assert root == pytest.approx(2.404825557695773, abs=1e-12)
        assert abs(bessel_j0(2.404825557695773)) < 1e-9

    def test_dense_scan_against_mpmath(self):
        xs = np.linspace(0.0, 200.0, 1201)
        mine = bessel_j0(xs)
        worst = 0.0
        for x, v in zip(xs, mine):
            ref = float(mp.besselj(0, mp.mpf(float(x))))
            worst = max(worst, abs(v - ref))
        assert worst < 1e-10

    def test_crossover_region(self):
        # both branches must agree where they meet; the asymptotic branch
        # bottoms out near 1e-11 here, well inside the 1e-10 contract
        for x in (13.999, 14.0, 14.001):
            ref = float(mp.besselj(0, mp.mpf(x)))
            assert bessel_j0(x) == pytest.approx(ref, abs=3e-11)

    def test_gaussian_hankel_pair(self):
        # integral_0^inf x J0(x r) e^{-x^2/4} dx = 2 e^{-r^2} at r = 1
        from fockdecay.quadrature import adaptive_quadrature

        def f(x):
            return x * bessel_j0(x) * np.exp(-x * x / 4.0)

        res = adaptive_quadrature(f, 0.0, 30.0, 1e-12,
                                  initial_edges=np.linspace(0.0, 30.0, 64))
        assert res.value == pytest.approx(2.0 * math.exp(-1.0), abs=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            bessel_j0(-1.0)
        with pytest.raises(ValueError):
            bessel_j0(float("inf"))
