"""Closed-form state machinery: weights, Wigner functions, chi, populations, purity."""

import math

import numpy as np
import pytest

from fockdecay.quadrature import adaptive_quadrature, clustered_edges
from fockdecay.states import (
    DecoherenceParams,
    MixtureState,
    PhasePoint,
    characteristic_fn,
    mixture_coefficients,
    populations,
    purity,
    wigner_radial,
    wigner_static,
    wigner_t,
)

LN2 = math.log(2.0)
ORIGIN = PhasePoint(0.0, 0.0)


class TestParams:
    def test_validation(self):
        DecoherenceParams(0, 0.0)
        DecoherenceParams(50, 50.0, 2.5)
        with pytest.raises(ValueError):
            DecoherenceParams(-1, 0.0)
        with pytest.raises(ValueError):
            DecoherenceParams(51, 0.0)
        with pytest.raises(ValueError):
            DecoherenceParams(3, -0.1)
        with pytest.raises(ValueError):
            DecoherenceParams(3, 50.1)
        with pytest.raises(ValueError):
            DecoherenceParams(3, 1.0, -0.5)
        with pytest.raises(ValueError):
            DecoherenceParams(2.5, 1.0)

    def test_phase_point_r2(self):
        assert PhasePoint(3.0, 4.0).r2 == 25.0


class TestMixtureCoefficients:
    def test_delta_at_time_zero(self):
        c = mixture_coefficients(4, 0.0)
        assert np.array_equal(c, [0.0, 0.0, 0.0, 0.0, 1.0])

    def test_half_life(self):
        c = mixture_coefficients(1, LN2)
        assert c == pytest.approx([0.5, 0.5], rel=1e-14)

    def test_three_quanta_half_life(self):
        # e^tau - 1 = 1, e^{-3 tau} = 1/8 -> binomial row / 8
        c = mixture_coefficients(3, LN2)
        assert c == pytest.approx([0.125, 0.375, 0.375, 0.125], rel=1e-13)

    @pytest.mark.parametrize("n", [0, 1, 5, 20, 50])
    @pytest.mark.parametrize("tau", [0.0, 1e-8, 0.3, 3.0, 50.0])
    def test_normalized_and_nonnegative(self, n, tau):
        c = mixture_coefficients(n, tau)
        assert c.shape == (n + 1,)
        assert np.all(c >= 0)
        assert abs(float(c.sum()) - 1.0) < 1e-12

    def test_domain_error(self):
        with pytest.raises(ValueError):
            mixture_coefficients(3, -0.5)

    def test_populations_identical(self):
        for n, tau in [(0, 0.7), (5, 0.0), (12, 0.31), (50, 2.0)]:
            assert np.array_equal(populations(n, tau), mixture_coefficients(n, tau))

    def test_populations_level_one(self):
        for tau in (0.05, 0.4, 2.0):
            p = populations(1, tau)
            assert p[1] == pytest.approx(math.exp(-tau), rel=1e-14)
            assert p[0] == pytest.approx(1.0 - math.exp(-tau), rel=1e-13)


class TestWignerStatic:
    def test_vacuum_origin(self):
        assert wigner_static(0, ORIGIN) == pytest.approx(1.0 / math.pi, rel=1e-15)

    def test_odd_state_origin_sign(self):
        assert wigner_static(7, ORIGIN) == pytest.approx(-1.0 / math.pi, rel=1e-15)

    def test_first_excited_node(self):
        # L1(2 r^2) = 0 at r^2 = 1/2
        point = PhasePoint(math.sqrt(0.5), 0.0)
        assert abs(wigner_static(1, point)) < 1e-16


class TestWignerT:
    def test_reduces_to_static_at_time_zero(self):
        params = DecoherenceParams(5, 0.0)
        for point in (ORIGIN, PhasePoint(1.0, -0.3), PhasePoint(0.2, 2.0)):
            assert wigner_t(params, point) == pytest.approx(
                wigner_static(5, point), rel=1e-13, abs=1e-300
            )

    def test_origin_zero_at_half_life(self):
        params = DecoherenceParams(1, LN2)
        assert abs(wigner_t(params, ORIGIN)) < 1e-16

    def test_asymptotic_vacuum(self):
        params = DecoherenceParams(3, 20.0)
        assert wigner_t(params, ORIGIN) == pytest.approx(1.0 / math.pi, abs=1e-8)

    def test_radial_symmetry_bit_for_bit(self):
        params = DecoherenceParams(6, 0.2)
        for x, p in [(0.7, -1.1), (2.0, 0.4)]:
            w1 = wigner_t(params, PhasePoint(x, p))
            w2 = wigner_t(params, PhasePoint(p, x))
            w3 = wigner_t(params, PhasePoint(-x, -p))
            assert w1 == w2 == w3

    def test_thermal_rejected(self):
        params = DecoherenceParams(2, 0.3, nbar=0.5)
        with pytest.raises(ValueError, match="nbar"):
            wigner_t(params, ORIGIN)

    @pytest.mark.parametrize("n,tau", [(0, 0.5), (3, 0.0), (12, 0.4), (20, 3.0)])
    def test_normalization(self, n, tau):
        # plane integral of W is pi * integral of the radial profile
        params = DecoherenceParams(n, tau)
        s_max = 4.0 * n + 40.0
        res = adaptive_quadrature(
            lambda s: wigner_radial(params, s), 0.0, s_max, 1e-11,
            initial_edges=clustered_edges(s_max, max(64, 16 * (n + 1))),
        )
        assert math.pi * res.value == pytest.approx(1.0, abs=1e-9)


class TestCharacteristicFn:
    def test_trace_normalization(self):
        for params in (DecoherenceParams(0, 0.0), DecoherenceParams(7, 1.3, 0.8)):
            assert characteristic_fn(params, 0.0) == 1.0

    def test_vacuum_gaussian(self):
        params = DecoherenceParams(0, 0.0)
        for lam2 in (0.5, 2.0, 10.0):
            assert characteristic_fn(params, lam2) == pytest.approx(
                math.exp(-lam2 / 2.0), rel=1e-14
            )

    def test_first_excited_value(self):
        params = DecoherenceParams(1, 0.0)
        assert characteristic_fn(params, 2.0) == pytest.approx(-math.exp(-1.0), rel=1e-14)

    def test_decay_bound(self):
        # |chi| < 1e-12 for lam2 >= 240 across n <= 20 (verified bound; at
        # lam2 = 120 the n = 20, tau = 0 value is still ~2e-5).
        grid = np.linspace(240.0, 400.0, 33)
        worst = 0.0
        for n in range(21):
            for tau in (0.0, 0.2, 1.0):
                for nbar in (0.0, 0.5):
                    params = DecoherenceParams(n, tau, nbar)
                    worst = max(worst, float(np.max(np.abs(characteristic_fn(params, grid)))))
        assert worst < 1e-12

    def test_domain_error(self):
        with pytest.raises(ValueError):
            characteristic_fn(DecoherenceParams(1, 0.0), -1.0)


class TestPurity:
    def test_pure_at_time_zero(self):
        for n in (0, 1, 7, 20):
            assert purity(n, 0.0) == 1.0

    def test_vacuum_stays_unit(self):
        for tau in (0.0, 0.5, 3.0, 50.0):
            assert purity(0, tau) == 1.0

    def test_half_life_value(self):
        assert purity(1, LN2) == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize("n", [1, 4, 9])
    def test_decays_then_recovers(self, n):
        # purity falls until tau = ln 2 and then climbs back toward 1: the
        # mixture repurifies into the vacuum.  (This recovery is exactly why
        # purity fails as a nonclassicality measure here.)
        taus = np.arange(0.0, LN2, 0.01)
        falling = [purity(n, float(t)) for t in taus]
        assert np.all(np.diff(falling) <= 1e-14)
        taus = np.arange(LN2 + 0.01, 3.0, 0.01)
        rising = [purity(n, float(t)) for t in taus]
        assert np.all(np.diff(rising) >= -1e-14)
        assert purity(n, 50.0) == pytest.approx(1.0, abs=1e-12)


class TestMixtureState:
    def test_from_params(self):
        state = MixtureState.from_params(DecoherenceParams(3, LN2))
        assert state.weights == pytest.approx([0.125, 0.375, 0.375, 0.125])
        assert state.wigner(ORIGIN) == pytest.approx(
            wigner_t(DecoherenceParams(3, LN2), ORIGIN), rel=1e-14, abs=1e-300
        )

    def test_invariants_enforced(self):
        params = DecoherenceParams(1, 0.0)
        with pytest.raises(ValueError):
            MixtureState(params, np.array([0.7, 0.7]))
        with pytest.raises(ValueError):
            MixtureState(params, np.array([1.2, -0.2]))
        with pytest.raises(ValueError):
            MixtureState(params, np.array([1.0]))

    def test_weights_frozen(self):
        state = MixtureState.from_params(DecoherenceParams(2, 0.1))
        with pytest.raises(ValueError):
            state.weights[0] = 5.0

    def test_thermal_rejected(self):
        with pytest.raises(ValueError):
            MixtureState.from_params(DecoherenceParams(2, 0.1, nbar=1.0))
