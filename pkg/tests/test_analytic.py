import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinotto import (
    ChainParams,
    CycleParams,
    build_hamiltonian,
    clausen,
    coupling_matrix,
    fluctuation_factor,
    high_t_expansion,
    ln_partition,
    mean_field_free_energy,
    p1_work_scaling,
    quadratic_free_energy,
    run_cycle,
    tfim_cycle,
    tfim_free_energy,
    two_level_performance,
)
from spinotto.analytic import QuadraticModel, p1_lnz_ksum, tfim_free_energy_ksum
from spinotto.specfun import EULER_GAMMA, zeta


class TestClausen:
    def test_nearest_neighbour_is_cosine(self):
        for theta in (0.0, 0.4, 2.2):
            assert clausen(math.inf, 10, theta) == pytest.approx(math.cos(theta), abs=1e-14)

    def test_p2_at_zero_is_zeta2(self):
        assert clausen(2.0, math.inf, 0.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-12)

    def test_p1_closed_form_at_pi(self):
        assert clausen(1.0, math.inf, math.pi) == pytest.approx(-math.log(2.0), rel=1e-12)

    def test_p1_diverges_at_zero(self):
        with pytest.raises(ValueError):
            clausen(1.0, math.inf, 0.0)

    @given(
        p=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
        n=st.integers(1, 40),
        theta=st.floats(0.0, 6.2),
    )
    @settings(max_examples=50, deadline=None)
    def test_finite_sum_matches_direct_loop(self, p, n, theta):
        direct = sum(math.cos(m * theta) / m**p for m in range(1, n + 1))
        assert clausen(p, n, theta) == pytest.approx(direct, abs=1e-12)

    def test_p2_closed_form_matches_series(self):
        for theta in (0.3, 1.0, 2.5):
            series = sum(math.cos(m * theta) / m**2 for m in range(1, 400_000))
            assert clausen(2.0, math.inf, theta) == pytest.approx(series, abs=1e-9)


class TestBandFreeEnergy:
    def test_free_limit(self):
        n, beta, omega = 7, 3.0, 1.2
        assert tfim_free_energy(n, beta, omega, 0.0) == pytest.approx(
            n * math.exp(-beta * omega), rel=1e-10
        )

    def test_integral_approaches_momentum_sum(self):
        # gapless point omega = g: the integral needs N >> 2 pi beta omega
        i64 = tfim_free_energy(64, 10.0, 1.0, 1.0)
        k64 = tfim_free_energy_ksum(64, 10.0, 1.0, 1.0)
        assert abs(i64 - k64) / k64 < 0.08
        i512 = tfim_free_energy(512, 10.0, 1.0, 1.0)
        k512 = tfim_free_energy_ksum(512, 10.0, 1.0, 1.0)
        assert abs(i512 - k512) / k512 < 0.01

    def test_against_exact_ring_partition_function(self):
        # band truncation + continuum limit, compared to the exact 2^N sum on
        # the translation-invariant chain (about 15% high at this size)
        en = np.linalg.eigvalsh(
            build_hamiltonian(ChainParams(10, math.inf, 0.8, boundary="periodic"), 1.0)
        )
        exact = ln_partition(en, 10.0, "ground_zero")
        approx = tfim_free_energy(10, 10.0, 1.0, 0.8)
        assert abs(approx - exact) / exact < 0.2

    def test_monotone_in_beta_and_omega(self):
        values_beta = [tfim_free_energy(8, b, 1.0, 0.5) for b in (2.0, 5.0, 10.0, 20.0)]
        assert all(b2 < b1 for b1, b2 in zip(values_beta, values_beta[1:]))
        values_omega = [tfim_free_energy(8, 5.0, w, 0.5) for w in (0.8, 1.0, 1.3, 1.9)]
        assert all(b2 < b1 for b1, b2 in zip(values_omega, values_omega[1:]))


class TestBandCycle:
    def test_free_limit_reduces_to_two_level_form(self):
        n, bh, bc, r, w0 = 6, 10.0, 20.0, 1.15, 1.0
        work, heat_in, heat_out, eta = tfim_cycle(n, bh, bc, r, w0, 0.0)
        expected = n * (r - 1.0) * w0 * (math.exp(-bh * r * w0) - math.exp(-bc * w0))
        assert work == pytest.approx(expected, rel=1e-9)

    def test_thermodynamic_identity(self):
        # independent route to W: the point-1 and point-3 band energies follow
        # from <E> = -d lnZ / d beta (central differences of tfim_free_energy,
        # whose value IS lnZ in this truncation); the cross-weighted points 2
        # and 4 come from a quadrature written out in the test
        n, bh, bc, r, w0, g = 8, 10.0, 20.0, 1.1, 1.0, 0.5
        work, heat_in, heat_out, _ = tfim_cycle(n, bh, bc, r, w0, g)
        h = 1e-6
        e1 = -(
            tfim_free_energy(n, bh + h, r * w0, g) - tfim_free_energy(n, bh - h, r * w0, g)
        ) / (2 * h)
        e3 = -(
            tfim_free_energy(n, bc + h, w0, g) - tfim_free_energy(n, bc - h, w0, g)
        ) / (2 * h)
        e2 = _band_point_energy(n, measured=w0, weighted=(bh, r * w0), g=g)
        e4 = _band_point_energy(n, measured=r * w0, weighted=(bc, w0), g=g)
        assert heat_in == pytest.approx(e1 - e4, rel=1e-4)
        assert heat_out == pytest.approx(e2 - e3, rel=1e-4)
        assert work == pytest.approx((e1 - e4) - (e2 - e3), rel=1e-4)

    def test_matches_exact_ring_cycle(self):
        # criterion-2 style spot check at g = 0.8 omega0
        chain = ChainParams(10, math.inf, 0.8, boundary="periodic")
        perf = run_cycle(chain, CycleParams(r=1.1, beta_H=10.0, beta_C=20.0))
        work, *_ = tfim_cycle(10, 10.0, 20.0, 1.1, 1.0, 0.8)
        assert work == pytest.approx(perf.work, rel=0.10)


def _band_point_energy(n, measured, weighted, g):
    """Band energy at one cycle point: measure eps(measured) under the
    Boltzmann weight of eps(weighted)."""
    from spinotto.analytic import band_energy
    from spinotto.specfun import adaptive_simpson

    beta, omega_w = weighted
    f = lambda th: band_energy(measured, g, th) * math.exp(-beta * band_energy(omega_w, g, th))
    return n / math.pi * adaptive_simpson(f, 0.0, math.pi, 1e-10)


class TestQuadraticFreeEnergy:
    def test_bessel_asymptote(self):
        exact = fluctuation_factor(math.inf, 25.0, exact=True)
        asym = fluctuation_factor(math.inf, 25.0, exact=False)
        assert abs(exact - asym) / exact < 0.02

    def test_dawson_asymptote(self):
        exact = fluctuation_factor(2.0, 25.0, exact=True)
        asym = fluctuation_factor(2.0, 25.0, exact=False)
        assert abs(exact - asym) / exact < 0.05

    def test_asymptotes_monotone_approach(self):
        for p in (2.0, math.inf):
            errs = [
                abs(fluctuation_factor(p, x, False) - fluctuation_factor(p, x, True))
                / fluctuation_factor(p, x, True)
                for x in (10.0, 15.0, 22.0, 35.0, 60.0)
            ]
            assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))

    def test_p3_needs_positive_log(self):
        with pytest.raises(ValueError):
            fluctuation_factor(3.0, math.exp(-3.0) / 2.0)

    def test_p1_momentum_sum_oracle(self):
        # The closed form reads lnZ = N e^{-beta omega} e^{beta g gamma} N^{beta g};
        # the momentum sum carries the k=0 term e^{beta g H_N} without the
        # leading N, so the comparison is per spin.  The harmonic-number vs
        # ln N + gamma truncation leaves ~12% at N=10, shrinking with N.
        beta, omega, g = 10.0, 1.0, 0.2
        for n, tol in ((10, 0.15), (40, 0.05)):
            model = QuadraticModel(p=1.0, n_spins=n, beta=beta, omega=omega, g=g)
            per_spin_closed = quadratic_free_energy(model) / n
            ksum = p1_lnz_ksum(n, beta, omega, g)
            assert abs(per_spin_closed - ksum) / ksum < tol
        scaling_form = (
            math.exp(-beta * omega) * math.exp(beta * g * EULER_GAMMA) * 10 ** (1 + beta * g)
        )
        model10 = QuadraticModel(p=1.0, n_spins=10, beta=beta, omega=omega, g=g)
        assert quadratic_free_energy(model10) == pytest.approx(scaling_form, rel=1e-12)

    def test_gap_approx_forms(self):
        m_inf = QuadraticModel(p=math.inf, n_spins=8, beta=5.0, omega=1.0, g=0.3)
        assert m_inf.gap_approx == pytest.approx(0.7, abs=1e-14)
        m_2 = QuadraticModel(p=2.0, n_spins=8, beta=5.0, omega=1.0, g=0.3)
        assert m_2.gap_approx == pytest.approx(1.0 - 0.3 * zeta(2.0), rel=1e-12)
        m_1 = QuadraticModel(p=1.0, n_spins=8, beta=5.0, omega=1.0, g=0.3)
        assert m_1.gap_approx == pytest.approx(
            1.0 - 0.3 * (math.log(8) + EULER_GAMMA), rel=1e-12
        )


class TestTwoLevelPerformance:
    def test_free_efficiency(self):
        _, eta = two_level_performance(math.inf, 10, 1.25, 10.0, 20.0, 1.0, 0.0, 1.0)
        assert eta == pytest.approx(1.0 - 1.0 / 1.25, abs=1e-14)

    def test_eta_independent_of_n_and_beta(self):
        etas = {
            two_level_performance(math.inf, n, 1.1, bh, 2 * bh, 1.0, 0.4, 1.0)[1]
            for n in (4, 8, 12)
            for bh in (5.0, 10.0, 20.0)
        }
        assert len({round(e, 14) for e in etas}) == 1

    def test_small_g_efficiency_expansion(self):
        # eta ~ eta_NI / (1 - g/(r g_c)) at small coupling
        r, g_c = 1.1, 1.0
        for g in (0.01, 0.03):
            _, eta = two_level_performance(math.inf, 10, r, 10.0, 20.0, 1.0, g, g_c)
            expansion = (1.0 - 1.0 / r) / (1.0 - g / (r * g_c))
            assert eta == pytest.approx(expansion, rel=5e-3)

    def test_enhancement_trend_exponential(self):
        # ln W grows with slope beta_H/g_c from the gap shift, reduced by the
        # fluctuation prefactor's d ln G / dg; the net slope must stay inside
        # those two brackets and the work must rise monotonically
        g_c, bh = 1.0, 10.0
        couplings = (0.1, 0.2, 0.3, 0.4, 0.5)
        works = [
            two_level_performance(math.inf, 10, 1.1, bh, 2 * bh, 1.0, g, g_c)[0]
            for g in couplings
        ]
        assert all(w2 > w1 for w1, w2 in zip(works, works[1:]))
        slope = (math.log(works[-1]) - math.log(works[0])) / (couplings[-1] - couplings[0])
        assert bh / (2.0 * g_c) < slope < bh / g_c


class TestHighTExpansion:
    def test_infinite_temperature_limit(self):
        J = coupling_matrix(ChainParams(6, 2.0, 0.4))
        series, cumulant = high_t_expansion(0.0, 1.0, J, 0.4)
        assert series == cumulant == pytest.approx(6 * math.log(2.0), abs=1e-14)

    def test_free_cumulant_closed_form(self):
        # Tr(H^2)/2^N = N omega^2/4 at g=0, so lnZ = N ln2 + beta^2 N omega^2/8
        n, beta, omega = 5, 0.3, 1.2
        J = coupling_matrix(ChainParams(n, 2.0, 0.0))
        _, cumulant = high_t_expansion(beta, omega, J, 0.0)
        assert cumulant == pytest.approx(
            n * math.log(2.0) + beta**2 * n * omega**2 / 8.0, abs=1e-14
        )

    def test_cumulant_matches_direct_trace(self):
        # independent oracle: build H and take Tr(H^2) literally
        params = ChainParams(5, 1.0, 0.7)
        H = build_hamiltonian(params, 1.1)
        tr_h2 = float(np.trace(H @ H)) / H.shape[0]
        beta = 0.17
        _, cumulant = high_t_expansion(beta, 1.1, coupling_matrix(params), 0.7)
        assert cumulant == pytest.approx(
            5 * math.log(2.0) + beta**2 * tr_h2 / 2.0, rel=1e-12
        )

    def test_both_variants_near_exact_at_small_beta(self):
        params = ChainParams(8, math.inf, 1.08)
        en = np.linalg.eigvalsh(build_hamiltonian(params, 1.0))
        exact = ln_partition(en, 0.2, "absolute")
        series, cumulant = high_t_expansion(0.2, 1.0, coupling_matrix(params), 1.08)
        assert abs(series - exact) / exact < 0.05
        assert abs(cumulant - exact) / exact < 0.05


class TestMeanField:
    def test_free_limit(self):
        J = coupling_matrix(ChainParams(6, 2.0, 0.0))
        value = mean_field_free_energy(2.0, 1.1, J, 0.0)
        assert value == pytest.approx(6 * math.log(2 * math.cosh(1.1)), rel=1e-12)

    def test_interactions_increase_single_spin_gap(self):
        # sqrt(w^2 + x^2) >= w: the mean-field gap never shrinks with coupling
        J = coupling_matrix(ChainParams(6, math.inf, 0.5))
        for beta in (0.5, 2.0):
            with_g = mean_field_free_energy(beta, 1.0, J, 0.5)
            without = mean_field_free_energy(beta, 1.0, J, 0.0)
            assert with_g >= without

    def test_matches_series_at_small_beta(self):
        # at the parameters of the temperature study (N=10, nearest-neighbour,
        # g = g_c ~ 1.09) the second-order terms of the printed series and of
        # the mean-field expansion nearly cancel
        params = ChainParams(10, math.inf, 1.09)
        J = coupling_matrix(params)
        beta = 0.05
        series, _ = high_t_expansion(beta, 1.0, J, 1.09)
        mf = mean_field_free_energy(beta, 1.0, J, 1.09)
        assert abs(series - mf) < 1e-3


class TestP1Scaling:
    def test_free_limit_extensive(self):
        for n in (4, 8):
            value = p1_work_scaling(n, 0.0, 10.0, 1.1)
            assert value == pytest.approx(0.1 * math.exp(-10.0) * n, rel=1e-12)

    def test_exponent_linear_in_g(self):
        bh = 10.0
        slope = lambda g: math.log(
            p1_work_scaling(10, g, bh, 1.1) / p1_work_scaling(5, g, bh, 1.1)
        ) / math.log(2.0)
        excess_1 = slope(0.1) - 1.0
        excess_2 = slope(0.2) - 1.0
        assert excess_2 == pytest.approx(2.0 * excess_1, rel=1e-9)
