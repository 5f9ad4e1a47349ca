"""
Tests para la integración de mKdV/mKdV#, el flujo de Birkhoff y los
experimentos sobre los flujos.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import DivergenceError, DomainError
from apps.core.run_config import RunConfig
from apps.frequencies.services.frequencies import FrequencySpectrum
from apps.frequencies.services.pipeline import SpectralPipeline
from apps.potentials.potential import Potential

from .services.birkhoff import TWO_PI, BirkhoffState, birkhoff_flow
from .services.experiments import (
    illposedness_demo, isospectrality_check, omega_tail_difference, shift_equivalence_check,
)
from .services.integrator import (
    GridState, conserved_quantities, evolve_trajectory, shift_grid, step_mkdv,
)


def _cosine(size=64, eps=0.1):
    return GridState.from_function(lambda x: eps * np.cos(2 * np.pi * x), size=size)


class GridStateTestCase(SimpleTestCase):

    def test_size_must_be_power_of_two(self):
        with self.assertRaises(DomainError):
            GridState(np.zeros(100))

    def test_l2_of_cosine(self):
        """∫(ε cos 2πx)² = ε²/2."""
        self.assertAlmostEqual(_cosine().l2, 0.005, places=15)

    def test_shift_grid(self):
        """cos 2π(x − ¼) = sin 2πx."""
        gs = _cosine(eps=1.0)
        np.testing.assert_allclose(shift_grid(gs.u, 0.25), np.sin(2 * np.pi * gs.x), atol=1e-13)


class IntegratorTestCase(SimpleTestCase):
    """Tests para ETDRK4."""

    def test_conserved_quantities(self):
        """Media, ∫u² y ∫(u_x² + u⁴) se conservan."""
        u0 = _cosine()
        states = evolve_trajectory(u0, T=0.01, dt=1e-4, samples=3)
        start = conserved_quantities(u0)
        for gs in states[1:]:
            now = conserved_quantities(gs)
            self.assertAlmostEqual(now['mean'], start['mean'], places=14)
            self.assertAlmostEqual(now['l2'] / start['l2'], 1.0, places=9)
            self.assertAlmostEqual(now['h3'] / start['h3'], 1.0, places=7)

    def test_sample_times(self):
        """samples tiempos equiespaciados, extremos incluidos."""
        states = evolve_trajectory(_cosine(), T=0.004, dt=1e-3, samples=5)
        np.testing.assert_allclose([s.t for s in states], np.linspace(0, 0.004, 5), atol=1e-15)

    def test_zero_time(self):
        states = evolve_trajectory(_cosine(), T=0.0)
        self.assertEqual(len(states), 1)

    def test_invalid_arguments(self):
        with self.assertRaises(DomainError):
            evolve_trajectory(_cosine(), T=-1.0)
        with self.assertRaises(DomainError):
            step_mkdv(_cosine(), dt=0.0)

    def test_single_step(self):
        """Un paso ETDRK4 avanza t y conserva media y ∫u²."""
        u0 = _cosine()
        gs = step_mkdv(u0, dt=1e-4)
        self.assertEqual(gs.t, 1e-4)
        self.assertAlmostEqual(gs.mean, u0.mean, places=15)
        self.assertAlmostEqual(gs.l2 / u0.l2, 1.0, places=10)
        self.assertGreater(np.max(np.abs(gs.u - u0.u)), 0.0, "El paso debería mover la solución")

    def test_single_renormalized_step_is_shift(self):
        """Un paso de mKdV# es el paso de mKdV trasladado en 6‖u₀‖²·dt."""
        u0, dt = _cosine(), 1e-4
        plain = step_mkdv(u0, dt=dt)
        sharp = step_mkdv(u0, dt=dt, renormalized=True)
        np.testing.assert_allclose(sharp.u, shift_grid(plain.u, 6 * u0.l2 * dt), atol=1e-10)

    def test_linear_flow_for_small_data(self):
        """Con ε → 0 domina la parte lineal: u(t) ≈ ε cos 2π(x + 4π²t)."""
        eps, t = 1e-6, 0.01
        end = evolve_trajectory(_cosine(eps=eps), T=t, dt=1e-4, samples=2)[-1]
        expected = eps * np.cos(2 * np.pi * (end.x + 4 * np.pi ** 2 * t))
        self.assertLess(np.max(np.abs(end.u - expected)), 1e-10 * eps + 1e-15)

    def test_shift_equivalence(self):
        """S#(t)u₀ = S(t)u₀(· − 6‖u₀‖²t)."""
        check = shift_equivalence_check(_cosine(), t=0.02, dt=1e-4)
        self.assertAlmostEqual(check.shift, 6 * 0.005 * 0.02, places=15)
        self.assertLess(check.residual, 1e-8, "mKdV y mKdV# deberían diferir solo por la traslación")


class BirkhoffFlowTestCase(SimpleTestCase):
    """Tests para el flujo de fases."""

    def _spectrum(self, actions, omega=None):
        n = np.arange(-1, 2)
        zeros = np.zeros(3, dtype=complex)
        sharp = (2 * n * np.pi) ** 3 + 0j
        return FrequencySpectrum(
            n=n, I=np.asarray(actions, dtype=complex), I_alt=zeros, omega_star=zeros, omega_sharp=sharp,
            omega=omega, trunc_err=np.zeros(3), h1=0j, h2=0j, open_k=np.zeros(0, dtype=int),
            Omega2=np.zeros((3, 0), dtype=complex), psi_residual=np.zeros(3),
        )

    def test_phases_rotate_with_sharp_frequencies(self):
        """θ_n(t) = θ_n(0) + ω#_n·t mod 2π, I_n constantes."""
        bs = BirkhoffState.from_spectrum(self._spectrum([0.1, 0.2, 0.1]), seed=3)
        moved = birkhoff_flow(bs, t=0.001)
        expected = np.mod(bs.theta + (2 * bs.n * np.pi) ** 3 * 0.001, TWO_PI)
        np.testing.assert_allclose(moved.theta, expected, atol=1e-12)
        np.testing.assert_array_equal(moved.I, bs.I)
        self.assertEqual(moved.t, 0.001)

    def test_coordinates_have_modulus_sqrt_action(self):
        bs = BirkhoffState.from_spectrum(self._spectrum([0.04, 0.0, 0.09]), theta=[1.0, 2.0, 3.0])
        np.testing.assert_allclose(bs.z_plus * bs.z_minus, bs.I)
        np.testing.assert_allclose(np.abs(bs.z_plus), [0.2, 0.0, 0.3])

    def test_negative_action_rejected(self):
        with self.assertRaises(DomainError):
            BirkhoffState.from_spectrum(self._spectrum([0.1, -0.01, 0.1]))

    def test_plain_frequencies_need_er(self):
        """Sin ω_n (fuera de E_r) solo el flujo renormalizado está definido."""
        bs = BirkhoffState.from_spectrum(self._spectrum([0.1, 0.1, 0.1]))
        with self.assertRaises(DivergenceError):
            birkhoff_flow(bs, t=0.01, sharp=False)

    def test_zero_potential_flow(self):
        """φ = 0: ω_n = (2nπ)³ desde el pipeline completo."""
        config = RunConfig.from_settings().with_overrides(N=4, M=16)
        fs = SpectralPipeline(Potential.zero(), config).engine.spectrum(nmax=2)
        bs = birkhoff_flow(BirkhoffState.from_spectrum(fs), t=0.01, sharp=False)
        np.testing.assert_allclose(bs.theta, np.mod((2 * fs.n * np.pi) ** 3 * 0.01, TWO_PI), atol=1e-9)


class ExperimentsTestCase(SimpleTestCase):
    """Tests para los experimentos sobre los flujos."""

    def test_isospectrality(self):
        """λ_n^± e I_n no cambian a lo largo de mKdV."""
        config = RunConfig.from_settings().with_overrides(N=2, M=16, tol=1e-6)
        report = isospectrality_check(_cosine(), T=0.005, samples=2, dt=1e-4, config=config)
        self.assertEqual(report.times.size, 2)
        self.assertLess(report.eigen_drift, 1e-4)
        self.assertLess(report.action_drift, 1e-7)

    def test_illposedness_requires_admissible_exponent(self):
        """1/p < α < 1/2."""
        with self.assertRaises(DomainError):
            illposedness_demo(p=4, alpha=0.2)
        with self.assertRaises(DomainError):
            illposedness_demo(p=4, alpha=0.5)

    def test_illposedness_norms(self):
        """H₁(v_k) crece sin cota mientras ‖v_k‖_{ℓ^p} se estabiliza."""
        table = illposedness_demo(p=4, alpha=0.3, kmax=64, freq_kmax=0)
        self.assertEqual(table.column('k').tolist(), [8.0, 16.0, 32.0, 64.0])
        self.assertTrue(table.h1_increasing, "H₁ = Σ|ĉ(n)|² diverge para α < 1/2")
        self.assertTrue(table.lp_converging, "αp > 1: la norma ℓ^p converge")
        self.assertTrue(np.all(np.isnan(table.column('omega_star_1'))))

    def test_omega_tail_difference(self):
        """La diferencia de cola mira solo las filas con k ≥ 128."""
        ks = [32, 64, 128, 256, 512]
        values = [1.0, 1.5, 1.5 + 8e-5, 1.5 + 1e-4, 1.5 + 1.1e-4]
        self.assertAlmostEqual(omega_tail_difference(ks, values), 8e-5, places=12)
        self.assertTrue(np.isnan(omega_tail_difference([8, 16, 32], [1.0, 2.0, 2.5])))

    def test_illposedness_computes_frequencies(self):
        """Con freq_kmax ≥ k cada fila lleva ω★_1; sin filas k ≥ 128 la cola queda sin definir."""
        config = RunConfig.from_settings().with_overrides(N=4, M=16, tol=1e-6)
        table = illposedness_demo(p=4, alpha=0.3, kmax=16, freq_kmax=16, config=config)
        omega = table.column('omega_star_1')
        self.assertTrue(np.all(np.isfinite(omega)))
        self.assertTrue(np.isnan(table.omega_tail[1]))
        self.assertTrue(table.omega_cauchy[1])
