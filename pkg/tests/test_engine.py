"""Steady-state solver, time-integration oracle, quadratures and spectra."""

import math

import numpy as np
import pytest

from spinmemory.engine import (best_quadrature, commutator_residuals,
                               integrate_moments, integrate_spectrum,
                               noise_spectrum, quadrature_covariance,
                               quadrature_spectral_density,
                               quadrature_variances, solve_steady_moments,
                               spectrum_halfwidth, vacuum_reference)
from spinmemory.exceptions import (NoSqueezingError, StepSizeError,
                                   UnstableSystemError)
from spinmemory.langevin import LangevinSystem, balanced_drift, build_system
from spinmemory.params import InputFieldStats

from conftest import make_params

KAPPA = 2e9


def field_only(r=0.0, kappa=KAPPA):
    """Two-operator cavity subsystem with squeezed vacuum input."""
    stats = InputFieldStats.from_squeezing(r)
    drift = np.diag([-kappa + 0.0j, -kappa + 0.0j])
    D = np.array([[2.0 * kappa * stats.m_anom, 2.0 * kappa * (stats.n_therm + 1.0)],
                  [2.0 * kappa * stats.n_therm, 2.0 * kappa * stats.m_anom]],
                 dtype=complex)
    return LangevinSystem(basis=("A", "Adag"), drift=drift, diffusion=D,
                          commutators={(0, 1): 1.0})


class TestSteadyMoments:
    def test_field_only_vacuum(self):
        M = solve_steady_moments(field_only())
        assert M[0, 1] == pytest.approx(1.0, rel=1e-12)
        assert abs(M[1, 0]) < 1e-12
        assert abs(M[0, 0]) < 1e-12

    def test_field_only_squeezed(self):
        # intracavity X variance equals the input one for a single lossy mode
        r = 0.5 * math.log(2.0)
        M = solve_steady_moments(field_only(r))
        vxx = (1.0 + 2.0 * M[1, 0] + 2.0 * M[0, 0]).real
        assert vxx == pytest.approx(0.5, rel=1e-10)
        assert M[1, 0].real == pytest.approx(0.125, rel=1e-10)
        assert M[0, 0].real == pytest.approx(-0.375, rel=1e-10)

    def test_residual_contract(self, fig2_params):
        system = build_system(fig2_params)
        M = solve_steady_moments(system)
        residual = system.drift @ M + M @ system.drift.T + system.diffusion
        assert np.linalg.norm(residual) <= 1e-8 * np.linalg.norm(system.diffusion)

    def test_fig2_ground_variance(self, fig2_params):
        system = build_system(fig2_params)
        report = quadrature_variances(solve_steady_moments(system), system)
        # analytic oracle 1 - (1/1.1)(500/501)(0.5) = 0.5464
        assert report.var_I_y == pytest.approx(0.5464, abs=0.02)

    def test_unstable_rejected(self):
        drift = np.array([[1.0 + 0.0j, 0.0], [0.0, 1.0]])
        system = LangevinSystem(basis=("A", "Adag"), drift=drift,
                                diffusion=np.eye(2, dtype=complex),
                                commutators={(0, 1): 1.0})
        with pytest.raises(UnstableSystemError):
            solve_steady_moments(system)

    def test_conjugate_moment_symmetry(self, fig2_params):
        system = build_system(fig2_params)
        M = solve_steady_moments(system)
        partner = [1, 0, 3, 2, 5, 4, 7, 6]
        for i in range(8):
            for j in range(8):
                assert M[i, j] == pytest.approx(
                    np.conj(M[partner[j], partner[i]]), abs=1e-6 * abs(M).max())


class TestIntegrationOracle:
    def test_field_only_relaxation(self):
        system = field_only()
        M = integrate_moments(system, t_final=20.0 / KAPPA, dt=0.05 / KAPPA)
        assert M[0, 1].real == pytest.approx(1.0, rel=1e-9)

    def test_matches_algebraic_solve(self, fig2_params):
        system = build_system(fig2_params)
        eig = np.linalg.eigvals(balanced_drift(system))
        # dt from the eigenvalue modulus: the optical detuning puts the
        # spectrum far up the imaginary axis, outside the RK4 stability
        # region if only the real parts bound the step
        dt = 0.09 / np.max(np.abs(eig))
        t_final = 21.0 / np.min(np.abs(eig.real))
        M_int = integrate_moments(system, t_final, dt)
        M_alg = solve_steady_moments(system)
        err = np.linalg.norm(M_int - M_alg) / np.linalg.norm(M_alg)
        assert err < 1e-6

    def test_dt_precondition(self):
        with pytest.raises(StepSizeError):
            integrate_moments(field_only(), t_final=1.0, dt=1.0 / KAPPA)

    def test_horizon_precondition(self):
        with pytest.raises(StepSizeError):
            integrate_moments(field_only(), t_final=1.0 / KAPPA, dt=0.01 / KAPPA)


class TestQuadratures:
    def test_commutator_residuals_consistent(self, fig2_params):
        system = build_system(fig2_params)
        res = commutator_residuals(solve_steady_moments(system), system)
        scale = max(fig2_params.n_meta, fig2_params.n_ground)
        assert max(abs(v) for v in res.values()) < 1e-8 * scale

    def test_formula_specialization(self):
        # only <S21 S12> = a and <S12 S21> = b nonzero: var_y n/4 = (a+b)/4
        system = build_system(make_params(n_meta=100.0, n_ground=1e8,
                                          gamma_f=5.0))
        M = np.zeros((8, 8), dtype=complex)
        M[0, 1], M[1, 0] = 60.0, 52.0
        vxx, vyy, vxy = quadrature_covariance(M, system, "meta")
        assert vyy == pytest.approx((60.0 + 52.0) / 100.0)
        assert vxx == pytest.approx((60.0 + 52.0) / 100.0)
        assert vxy == 0.0

    def test_coherent_state_isotropic(self):
        # undriven steady state with vacuum input: all variances 1; a bit
        # of wall relaxation lifts the marginal exchange mode
        p = make_params(omega_rabi=0.0, gamma_0=1e3)
        system = build_system(p)
        report = quadrature_variances(solve_steady_moments(system), system)
        for v in (report.var_I_x, report.var_I_y, report.var_S_x,
                  report.var_S_y, report.var_X, report.var_Y):
            assert v == pytest.approx(1.0, abs=1e-10)

    def test_best_quadrature_degenerate(self):
        p = make_params(omega_rabi=0.0, gamma_0=1e3)
        system = build_system(p)
        best = best_quadrature(solve_steady_moments(system), system, "ground")
        assert best.degenerate
        assert best.angle == 0.0
        assert best.variance == pytest.approx(1.0, abs=1e-10)

    def test_best_matches_var_y_when_matched(self, fig2_params):
        system = build_system(fig2_params)
        M = solve_steady_moments(system)
        best = best_quadrature(M, system, "ground")
        report = quadrature_variances(M, system)
        # a residual non-adiabatic tilt of the covariance leaves a few 1e-9
        assert best.variance == pytest.approx(report.var_I_y, abs=1e-8)

    def test_ground_detuning_degrades_transfer(self, fig2_params, default_config):
        from spinmemory import analytic
        GF = analytic.derive_params(fig2_params).memory_bandwidth
        detuned = fig2_params.replace(delta_ground=GF)
        system = build_system(detuned)
        M = solve_steady_moments(system)
        best = best_quadrature(M, system, "ground")
        var_y = quadrature_variances(M, system).var_I_y
        matched_sys = build_system(fig2_params)
        matched_best = best_quadrature(solve_steady_moments(matched_sys),
                                       matched_sys, "ground")
        assert matched_best.variance < best.variance < var_y

    def test_unknown_species_rejected(self, fig2_params):
        system = build_system(fig2_params)
        M = solve_steady_moments(system)
        with pytest.raises(ValueError):
            best_quadrature(M, system, "optical")


class TestSpectra:
    def test_field_only_lorentzian(self):
        system = field_only()
        for w in (0.0, 0.3 * KAPPA, 2.0 * KAPPA):
            S = noise_spectrum(system, w)
            assert S[0, 1].real == pytest.approx(
                2.0 * KAPPA / (KAPPA ** 2 + w ** 2), rel=1e-10)

    def test_high_frequency_decay(self):
        system = field_only(r=0.3)
        S1 = np.abs(noise_spectrum(system, 1e3 * KAPPA))
        S2 = np.abs(noise_spectrum(system, 2e3 * KAPPA))
        ratio = S1[S1 > 0] / S2[S1 > 0]
        assert np.allclose(ratio, 4.0, rtol=1e-2)  # 1/w^2 tail

    def test_single_mode_halfwidth_is_kappa(self):
        system = field_only(r=0.5)
        hwhm = spectrum_halfwidth(system, species="field", quadrature="x")
        assert hwhm == pytest.approx(KAPPA, rel=1e-3)

    def test_no_squeezing_raises(self):
        with pytest.raises(NoSqueezingError):
            spectrum_halfwidth(field_only(r=0.0), species="field", quadrature="x")

    def test_ground_dip_width_is_memory_bandwidth(self, fig2_params):
        from spinmemory import analytic
        GF = analytic.derive_params(fig2_params).memory_bandwidth
        hwhm = spectrum_halfwidth(build_system(fig2_params), species="ground")
        assert hwhm == pytest.approx(GF, rel=0.1)

    def test_parseval_field_only(self):
        system = field_only(r=0.4)
        M_int = integrate_spectrum(system)
        M_alg = solve_steady_moments(system)
        assert np.linalg.norm(M_int - M_alg) < 1e-4 * np.linalg.norm(M_alg)

    def test_vacuum_reference_strips_input_squeezing(self):
        system = field_only(r=0.7)
        ref = vacuum_reference(system)
        assert ref.diffusion[0, 1] == 2.0 * KAPPA
        assert ref.diffusion[0, 0] == 0.0
        assert ref.diffusion[1, 0] == 0.0

    def test_spectral_density_quadrature_names(self):
        system = field_only(r=0.2)
        with pytest.raises(ValueError):
            quadrature_spectral_density(system, 0.0, "field", "z")
