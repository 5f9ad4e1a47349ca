"""
Tests para acciones, sistema ψ_n y frecuencias.

Oráculos: φ = 0 (ψ_n/√c = i/(nπ − λ), ω# = (2nπ)³), el potencial
constante (un solo gap, I₀ = a²) y la simetría de E_r.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import DependencyError, DivergenceError, DomainError
from apps.core.run_config import RunConfig
from apps.potentials.potential import Potential, hamiltonians

from .serializers import ActionSerializer, FrequencySpectrumSerializer
from .services.frequencies import (
    FrequencyEngine, FrequencySpectrum, freq_asymptotics_report, moment, omega_decay_report,
)
from .services.pipeline import SpectralPipeline
from .services.psi_system import sigma_check, solve_psi

A = 0.3


def _pipeline(phi, N=8):
    return SpectralPipeline(phi, RunConfig.from_settings().with_overrides(N=N, M=32))


class ZeroPotentialTestCase(SimpleTestCase):
    """Tests de formas cerradas en φ = 0."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.pipeline = _pipeline(Potential.zero())
        cls.fs = cls.pipeline.engine.spectrum(nmax=4)

    def test_actions_vanish(self):
        """Sin gaps abiertos I_n = 0 exactamente."""
        np.testing.assert_array_equal(self.fs.I, np.zeros(9))

    def test_frequencies_are_cubic(self):
        """ω★_n = 0 y ω#_n = ω_n = (2nπ)³."""
        cubic = (2 * np.arange(-4, 5) * np.pi) ** 3
        np.testing.assert_array_equal(self.fs.omega_star, np.zeros(9))
        np.testing.assert_allclose(self.fs.omega_sharp.real, cubic)
        np.testing.assert_allclose(self.fs.omega.real, cubic)

    def test_psi_closed_form(self):
        """ψ_n/√c = i/(nπ − λ) con escala 1."""
        for n in (-3, 0, 2):
            psi = self.pipeline.engine.solve_psi(n)
            self.assertAlmostEqual(abs(psi.scale - 1), 0.0, places=12)
            lam = np.array([n * np.pi + 0.3j, n * np.pi - 0.2 + 0.1j])
            np.testing.assert_allclose(psi.evaluate(lam), 1j / (n * np.pi - lam), rtol=1e-12)

    def test_normalization_moment(self):
        """Ω_nn^(0) = ∮_{Γ_n} ψ_n/√c dλ = 2π."""
        engine = self.pipeline.engine
        psi = engine.solve_psi(1)
        self.assertAlmostEqual(abs(engine.moment(psi, 1, 0) - 2 * np.pi), 0.0, places=9)

    def test_collapsed_moments_are_exactly_zero(self):
        """Ω_nk^(m) = 0 para k colapsado y m ≥ 1."""
        engine = self.pipeline.engine
        psi = engine.solve_psi(0)
        for k in (-2, 0, 3):
            self.assertEqual(engine.moment(psi, k, 2), 0j)


class ConstantPotentialTestCase(SimpleTestCase):
    """Tests del caso con un solo gap abierto G₀ = [−a, a]."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.pipeline = _pipeline(Potential.constant(A))
        cls.fs = cls.pipeline.engine.spectrum(nmax=3)

    def test_single_action(self):
        """I₀ = a² = H₁ y el resto de las acciones se anula."""
        self.assertAlmostEqual(self.fs.I_of(0).real, A ** 2, places=8)
        for n in (-3, -1, 1, 2):
            self.assertEqual(self.fs.I_of(n), 0j, f"I_{n} debería ser exactamente 0")

    def test_action_formulas_agree(self):
        """Las dos fórmulas de contorno para I_n coinciden."""
        value = self.pipeline.engine.action(0)
        self.assertLess(value.discrepancy, 1e-8, "∮λΔ̇/√c y −∮F_n deberían coincidir")

    def test_omega_star_vanishes(self):
        """Con k = 0 como único gap abierto ω★_n = −12·0·Ω = 0."""
        np.testing.assert_array_equal(self.fs.omega_star, np.zeros(7))
        self.assertAlmostEqual(self.fs.omega_of(2).real, (4 * np.pi) ** 3 + 24 * np.pi * A ** 2, places=6)

    def test_trunc_err_is_small(self):
        """La cota de cola escala con g³ = (10·tol)³."""
        self.assertLess(float(np.max(self.fs.trunc_err)), 1e-8)

    def test_quadratic_moment_of_single_gap(self):
        """Ω₀₀^(2) = γ₀²π/4: F₀² = −(λ² − a²) y ψ₀/√c ∝ 1/√(λ² − a²)."""
        engine = self.pipeline.engine
        gamma = self.pipeline.sd.gamma_of(0)
        self.assertAlmostEqual(abs(gamma), 2 * A, places=7)
        value = engine.moment(engine.solve_psi(0), 0, 2)
        self.assertAlmostEqual(value.real / (abs(gamma) ** 2 * np.pi / 4), 1.0, delta=1e-4)
        self.assertLess(abs(value.imag), 1e-8)


class CosinePotentialTestCase(SimpleTestCase):
    """Tests sobre u = 0.1 cos 2πx (E_r, varios gaps abiertos)."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.phi = Potential.from_real_u({1: 0.05}, name='cos-0.1')
        cls.pipeline = _pipeline(cls.phi)
        cls.fs = cls.pipeline.engine.spectrum(nmax=3)

    def test_actions_nonnegative_and_sum_to_h1(self):
        """Tipo real: I_n ≥ 0 y Σ I_n = H₁."""
        self.assertTrue(np.all(self.fs.I.real >= -1e-12), "Las acciones deberían ser no negativas")
        total = sum(self.pipeline.engine.action(int(n)).value.real for n in self.pipeline.sd.indices)
        self.assertAlmostEqual(total, hamiltonians(self.phi).h1.real, delta=1e-8)

    def test_er_symmetry(self):
        """En E_r: I_{−n} = I_n y ω★_{−n} = −ω★_n."""
        np.testing.assert_allclose(self.fs.I[::-1], self.fs.I, atol=1e-10)
        np.testing.assert_allclose(self.fs.omega_star[::-1], -self.fs.omega_star, atol=1e-8)

    def test_psi_normalization_residuals(self):
        """Las condiciones ∮_{Γ_k} ψ_n/√c = 0 quedan resueltas."""
        self.assertLess(float(np.max(self.fs.psi_residual)), 1e-8)

    def test_sigma_roots_near_lam_dot(self):
        """σ_k^n − λ_k^• = O(γ_k)."""
        psi = solve_psi(self.pipeline.ctx, 1)
        report = sigma_check(psi)
        self.assertTrue(report['k'].size > 0, "Debería haber incógnitas σ_k^1")
        self.assertLess(float(np.max(np.abs(report['dot_offset']))), 1.0)

    def test_solve_psi_respects_bound(self):
        """Gaps abiertos fuera de |k| ≤ K son error de dominio."""
        with self.assertRaises(DomainError):
            solve_psi(self.pipeline.ctx, 1, K=0)

    def test_moment_requires_psi(self):
        """moment sin el ψ_n correspondiente es error de dependencia."""
        with self.assertRaises(DependencyError):
            moment(self.pipeline.ctx, self.pipeline.ai, None, 1, 1, 2)

    def test_engine_requires_shared_context(self):
        """AbelianIntegral y RootContext deben venir del mismo pipeline."""
        other = _pipeline(self.phi)
        with self.assertRaises(DependencyError):
            FrequencyEngine(other.ctx, self.pipeline.ai)

    def test_odd_moments_vanish(self):
        """En E_r Ω_nk^(1) = Ω_nk^(3) = 0 para k abierto."""
        engine = self.pipeline.engine
        open_k = [int(k) for k in self.pipeline.sd.open_gaps()]
        self.assertTrue(open_k, "cos-0.1 tiene gaps abiertos")
        for n in (-1, 0, 1):
            psi = engine.solve_psi(n)
            for k in open_k:
                self.assertLess(abs(engine.moment(psi, k, 1)), 1e-8, f"Ω_{n},{k}^(1) debería anularse")
                self.assertLess(abs(engine.moment(psi, k, 3)), 1e-8, f"Ω_{n},{k}^(3) debería anularse")

    def test_omega_star_single_index(self):
        """engine.omega_star(n) coincide con la fila del espectro completo."""
        self.assertAlmostEqual(
            self.pipeline.engine.omega_star(2), self.fs.omega_star_of(2), places=9
        )

    def test_reports(self):
        """Los reportes excluyen n = 0 y los gaps abiertos según corresponda."""
        asym = freq_asymptotics_report(self.fs)
        self.assertNotIn(0, asym['n'].tolist())
        decay = omega_decay_report(self.fs)
        self.assertFalse(np.any(np.isin(decay['n'], self.fs.open_k)))

    def test_serializer_schema(self):
        """freqs serializa complejos como [re, im]."""
        data = FrequencySpectrumSerializer(self.fs).data
        self.assertEqual(data['n'], list(range(-3, 4)))
        self.assertEqual(len(data['I'][0]), 2)
        self.assertIsNotNone(data['omega'], "E_r tiene ω_n sin renormalizar")
        action = ActionSerializer(self.pipeline.engine.action(1)).data
        self.assertEqual(set(action), {'n', 'value', 'alternative', 'discrepancy'})


class FrequencySpectrumTestCase(SimpleTestCase):
    """Tests del contenedor FrequencySpectrum."""

    def _spectrum(self, omega):
        n = np.arange(-1, 2)
        zeros = np.zeros(3, dtype=complex)
        return FrequencySpectrum(
            n=n, I=zeros, I_alt=zeros, omega_star=zeros, omega_sharp=(2 * n * np.pi) ** 3 + 0j,
            omega=omega, trunc_err=np.zeros(3), h1=0j, h2=0j, open_k=np.zeros(0, dtype=int),
            Omega2=np.zeros((3, 0), dtype=complex), psi_residual=np.zeros(3),
        )

    def test_omega_without_er_diverges(self):
        """Fuera de E_r solo existe ω#_n."""
        fs = self._spectrum(None)
        with self.assertRaises(DivergenceError):
            fs.omega_of(1)
        self.assertAlmostEqual(fs.omega_sharp_of(1).real, (2 * np.pi) ** 3)
        self.assertIsNone(FrequencySpectrumSerializer(fs).data['omega'])

    def test_index_outside_range(self):
        """n fuera del rango calculado."""
        with self.assertRaises(IndexError):
            self._spectrum(None).I_of(5)
