"""
Tests para el problema de Zakharov–Shabat: matriz de transferencia,
localización del espectro, raíces/productos e integral abeliana.

Oráculos: formas cerradas del potencial cero (Δ = 2cos λ, √c = −2i sin λ,
F_n = −i(λ − nπ)) y del potencial constante (λ = ±√(n²π² + a²)), el
Galerkin independiente y acuerdos entre fórmulas.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import AccuracyError, DomainError
from apps.potentials.potential import Potential, hamiltonians

from .services.abelian import AbelianIntegral
from .services.contours import Contour, segment_rule
from .services.roots import RootContext, sine_tail
from .services.spectrum import SpectrumLocator, gap_check
from .services.transfer import BATCH_SIZE, ZSSolver, discriminant, galerkin_eigenvalues, transfer

WINDOW = 8
TOL = 1e-6
A = 0.3


def _build(phi, N=WINDOW):
    solver = ZSSolver(phi)
    sd = SpectrumLocator(phi, N, TOL, solver=solver).locate()
    ctx = RootContext(sd)
    return sd, ctx, AbelianIntegral(ctx, solver=solver)


class TransferTestCase(SimpleTestCase):
    """Tests para la ODE de Zakharov–Shabat."""

    def test_zero_potential_discriminant(self):
        """φ = 0: Δ(λ) = 2cos λ y Δ̇(λ) = −2 sin λ, también fuera del eje real."""
        lam = np.array([0.0, 0.7, 3.0 + 0.4j, -5.5 - 0.2j, 12.0])
        delta, ddelta = ZSSolver(Potential.zero()).discriminant_batch(lam)
        np.testing.assert_allclose(delta, 2 * np.cos(lam), atol=1e-10)
        np.testing.assert_allclose(ddelta, -2 * np.sin(lam), atol=1e-10)

    def test_constant_potential_discriminant(self):
        """φ = (a, a): Δ(λ) = 2cos√(λ² − a²)."""
        for lam in (0.1, 1.0, 4.0 + 0.3j):
            delta, _ = discriminant(Potential.constant(A), lam)
            self.assertAlmostEqual(abs(delta - 2 * np.cos(np.sqrt(complex(lam ** 2 - A ** 2)))), 0.0, places=9)

    def test_wronskian_is_one(self):
        """La traza nula de la ODE conserva det M = 1."""
        phi = Potential.from_real_u({1: 0.05, 2: 0.02})
        for lam in (0.3, 2.0 + 0.5j, -7.1):
            self.assertAlmostEqual(abs(transfer(phi, lam).det - 1), 0.0, places=9)

    def test_lambda_ceiling(self):
        """|λ| sobre el techo se rechaza como error de dominio."""
        with self.assertRaises(DomainError):
            ZSSolver(Potential.zero(), ceiling=100.0).discriminant_batch(np.array([150.0]))

    def test_batch_preserves_order(self):
        """El orden de salida es el de entrada aunque se agrupe por |λ|."""
        solver = ZSSolver(Potential.zero())
        lam = np.array([9.0, 0.5, 4.0, -2.0])
        delta, _ = solver.discriminant_batch(lam)
        np.testing.assert_allclose(delta, 2 * np.cos(lam), atol=1e-10)

    def test_blocks_group_by_modulus(self):
        """Los bloques cubren todos los índices, ordenados por |λ| y con a lo más BATCH_SIZE elementos."""
        lam = np.linspace(-20.0, 20.0, 2 * BATCH_SIZE + 3)
        blocks = ZSSolver(Potential.zero())._blocks(lam)
        self.assertEqual(len(blocks), 3)
        self.assertTrue(all(block.size <= BATCH_SIZE for block in blocks))
        order = np.concatenate(blocks)
        self.assertEqual(sorted(order.tolist()), list(range(lam.size)))
        self.assertTrue(np.all(np.diff(np.abs(lam[order])) >= 0))

    def test_galerkin_constant_potential(self):
        """El Galerkin reproduce ±√(n²π² + a²) con multiplicidad."""
        values = np.array(galerkin_eigenvalues(Potential.constant(A), 32))
        for n in range(0, 6):
            target = np.sqrt((n * np.pi) ** 2 + A ** 2)
            self.assertLess(np.min(np.abs(values - target)), 1e-10, f"Falta √(n²π²+a²) para n={n}")
            self.assertLess(np.min(np.abs(values + target)), 1e-10, f"Falta −√(n²π²+a²) para n={n}")

    def test_galerkin_requires_wide_basis(self):
        """La base debe cubrir al menos 4·nmodes."""
        with self.assertRaises(DomainError):
            galerkin_eigenvalues(Potential.from_real_u({3: 0.1}), 4)

    def test_realline_discriminant(self):
        """Δ en la recta real por la desviación de 2cos λ, con precisión absoluta."""
        solver = ZSSolver(Potential.constant(A))
        lam = np.array([0.5 * np.pi, 12.3, 40.5 * np.pi, -25.5 * np.pi])
        exact = 2 * np.cos(np.sqrt(lam ** 2 - A ** 2))
        np.testing.assert_allclose(solver.discriminant_real(lam).real, exact, rtol=0, atol=1e-12)
        zero = ZSSolver(Potential.zero()).discriminant_real(lam)
        np.testing.assert_array_equal(zero, 2 * np.cos(lam))

    def test_realline_discriminant_rejects_complex(self):
        """discriminant_real solo acepta λ reales."""
        with self.assertRaises(DomainError):
            ZSSolver(Potential.constant(A)).discriminant_real(np.array([1.0 + 0.1j]))


class SpectrumTestCase(SimpleTestCase):
    """Tests para la localización en discos aislantes."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.zero, _, _ = _build(Potential.zero())
        cls.constant, _, _ = _build(Potential.constant(A))
        cls.cosine, _, _ = _build(Potential.from_real_u({1: 0.05}))

    def test_zero_potential_is_lattice(self):
        """φ = 0: λ_n^± = nπ y todos los gaps colapsados."""
        n = self.zero.indices
        np.testing.assert_allclose(self.zero.lam_minus, n * np.pi, atol=1e-9)
        np.testing.assert_allclose(self.zero.lam_plus, n * np.pi, atol=1e-9)
        self.assertEqual(self.zero.open_gaps().size, 0, "El potencial cero no tiene gaps abiertos")
        self.assertTrue(np.all(self.zero.winding == 2), "Cada disco contiene dos raíces de Δ²−4")

    def test_constant_potential_single_gap(self):
        """φ = (a, a): γ₀ = 2a, el resto colapsado en ±√(n²π² + a²)."""
        sd = self.constant
        self.assertAlmostEqual(abs(sd.gamma_of(0) - 2 * A), 0.0, places=7)
        self.assertEqual(sd.open_gaps().tolist(), [0], "Solo el gap 0 debería estar abierto")
        for n in (1, 2, -3, WINDOW):
            expected = np.sign(n) * np.sqrt((n * np.pi) ** 2 + A ** 2)
            self.assertAlmostEqual(abs(sd.tau_of(n) - expected), 0.0, places=7)

    def test_constant_matches_galerkin(self):
        """Los λ_n^± localizados están en el espectro del Galerkin."""
        oracle = np.array(galerkin_eigenvalues(self.constant.phi, 64))
        for z in np.concatenate([self.constant.lam_minus, self.constant.lam_plus]):
            self.assertLess(np.min(np.abs(oracle - z)), 1e-6, f"λ={z} no aparece en el Galerkin")

    def test_cosine_first_gap(self):
        """u = 0.1 cos 2πx abre G_{±1} con γ ≈ 2|ĉ(1)| = 0.1."""
        sd = self.cosine
        self.assertIn(1, sd.open_gaps().tolist(), "G_1 debería estar abierto")
        self.assertAlmostEqual(abs(sd.gamma_of(1)), 0.1, delta=0.01)
        self.assertTrue(sd.real_type, "u real da un potencial de tipo real")

    def test_er_spectrum_is_symmetric(self):
        """En E_r el espectro es simétrico: λ_{−n}^∓ = −λ_n^±."""
        sd = self.cosine
        np.testing.assert_allclose(sd.lam_minus[::-1], -sd.lam_plus, atol=1e-7)
        np.testing.assert_allclose(sd.lam_dot[::-1], -sd.lam_dot, atol=1e-7)

    def test_lexicographic_order(self):
        """λ_n^− ≼ λ_n^+ ≼ λ_{n+1}^− en la recta real."""
        sd = self.cosine
        chain = np.empty(2 * sd.lam_minus.size)
        chain[0::2] = sd.lam_minus.real
        chain[1::2] = sd.lam_plus.real
        self.assertTrue(np.all(np.diff(chain) >= -1e-12), "La cadena de valores propios debería ser creciente")

    def test_contour_fits_in_disc(self):
        """Γ_n tiene radio max(0.75|γ_n|, 0.05) y queda dentro de U_n."""
        sd = self.constant
        contour = sd.contour(0)
        self.assertAlmostEqual(contour.radius, 0.75 * 0.6, places=6)
        self.assertLess(contour.radius, sd.disc_radius[sd.index_of(0)])
        self.assertEqual(sd.contour(3).radius, 0.05)

    def test_index_out_of_window(self):
        """Índices fuera de [−N, N] se rechazan."""
        with self.assertRaises(IndexError):
            self.zero.index_of(WINDOW + 1)

    def test_gap_check_sequences(self):
        """gap_check entrega las secuencias rotuladas para el ajuste de decaimiento."""
        report = gap_check(self.constant)
        self.assertEqual(report['open_n'].tolist(), [0])
        self.assertAlmostEqual(abs(report['lam_dot_offset'][0]), 0.0, places=6)
        self.assertEqual(report['n'].size, 2 * WINDOW + 1)


class RootsTestCase(SimpleTestCase):
    """Tests para raíces estándar, raíz canónica y productos."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.zero_sd, cls.zero_ctx, _ = _build(Potential.zero())
        cls.const_sd, cls.const_ctx, _ = _build(Potential.constant(A))
        cls.cos_sd, cls.cos_ctx, _ = _build(Potential.from_real_u({1: 0.05}))
        cls.cos_solver = ZSSolver(cls.cos_sd.phi)

    def test_sine_tail_far_and_near_lattice(self):
        """S_N(λ) = Π_{m>N}(1 − λ²/(mπ)²) en ambas ramas de evaluación."""
        N = 4
        m = np.arange(N + 1, 2_000_001)
        for lam in (0.7 + 0.2j, 3 * np.pi + 1e-3):
            log_sum = np.sum(np.log1p(-(lam / (m * np.pi)) ** 2)) - lam ** 2 / (np.pi ** 2 * m[-1])
            self.assertAlmostEqual(abs(sine_tail(np.array([lam]), N)[0] - np.exp(log_sum)), 0.0, places=10)

    def test_zero_potential_canonical_root(self):
        """φ = 0: √c = −2i sin λ y Δ̇/√c = −i."""
        lam = np.array([0.4 + 0.3j, -2.5 + 0.1j, 6.0, 3 * np.pi + 0.2j])
        np.testing.assert_allclose(self.zero_ctx.canonical_root(lam), -2j * np.sin(lam), atol=1e-10)
        np.testing.assert_allclose(self.zero_ctx.quotient_w(lam), -1j * np.ones(lam.size), atol=1e-10)

    def test_collapsed_standard_root(self):
        """γ_n = 0: w_n(λ) = τ_n − λ."""
        lam = np.array([1.0 + 0.5j])
        np.testing.assert_allclose(self.zero_ctx.standard_root(2, lam), 2 * np.pi - lam)

    def test_standard_root_on_gap_sides(self):
        """γ₀ = 0.6, τ₀ = 0: en el centro del lado + vale −0.3i."""
        value = complex(np.ravel(self.const_ctx.standard_root_side(0, 0.0, +1))[0])
        self.assertAlmostEqual(abs(value - (-0.3j)), 0.0, places=7)
        lower = self.const_ctx.standard_root(0, np.array([0.0]), side=-1)
        self.assertAlmostEqual(abs(lower[0] - 0.3j), 0.0, places=7)

    def test_standard_root_inside_gap_requires_side(self):
        """Un λ estrictamente dentro de G₀ sin lado es error de dominio."""
        with self.assertRaises(DomainError):
            self.const_ctx.standard_root(0, np.array([0.1]))

    def test_standard_root_far_field(self):
        """Lejos del gap w_n ≈ τ_n − λ (rama principal)."""
        lam = np.array([5.0 + 1.0j])
        d = self.const_sd.tau_of(0) - lam
        gamma = self.const_sd.gamma_of(0)
        expected = d * np.sqrt(1 - gamma ** 2 / (4 * d ** 2))
        np.testing.assert_allclose(self.const_ctx.standard_root(0, lam), expected, rtol=1e-12)
        self.assertLess(abs(expected[0] / d[0] - 1), 0.01)

    def test_sign_convention(self):
        """i·√c > 0 en el punto medio de (λ_0^+, λ_1^−)."""
        for ctx in (self.zero_ctx, self.const_ctx, self.cos_ctx):
            self.assertGreater(ctx.sign_anchor.real, 0, "La convención de signo no se cumple")

    def test_canonical_root_squares_to_discriminant(self):
        """(√c)² = Δ² − 4 fuera de los gaps."""
        lam = np.array([0.5 + 0.2j, 2.0 - 0.3j, -4.0 + 0.1j, 9.5 + 0.05j])
        delta, _ = self.cos_solver.discriminant_batch(lam)
        root = self.cos_ctx.canonical_root(lam)
        relative = np.abs(root ** 2 - (delta ** 2 - 4)) / np.maximum(1.0, np.abs(delta ** 2 - 4))
        self.assertLess(np.max(relative), 1e-6, "El producto no reproduce Δ² − 4")

    def test_quotient_times_root_is_derivative(self):
        """(Δ̇/√c)·√c = Δ̇."""
        lam = np.array([0.5 + 0.2j, -2.0 + 0.3j, 7.0 - 0.2j])
        _, ddelta = self.cos_solver.discriminant_batch(lam)
        product = self.cos_ctx.quotient_w(lam) * self.cos_ctx.canonical_root(lam)
        np.testing.assert_allclose(product, ddelta, rtol=1e-6, atol=1e-8)

    def test_discriminant_product(self):
        """Δ por el producto de los valores propios pares coincide con la ODE."""
        lam = np.array([0.3 + 0.2j, 1.7 - 0.2j, -6.2 + 0.1j, 11.0 + 0.3j])
        for sd, ctx in ((self.const_sd, self.const_ctx), (self.cos_sd, self.cos_ctx)):
            delta, _ = ZSSolver(sd.phi).discriminant_batch(lam)
            product = ctx.discriminant_product(lam)
            relative = np.abs(product - delta) / np.maximum(1.0, np.abs(delta))
            self.assertLess(np.max(relative), 1e-6, f"Producto discrepa para {sd.phi!r}")

    def test_sine_product_identity_at_zero(self):
        """φ = 0: (1/π_n)·Π_{m≠n} w_m/π_m = sin λ/(λ − nπ)."""
        for n in (0, 1, -3):
            lam = n * np.pi + 0.2 * np.exp(1j * np.linspace(0, 2 * np.pi, 7))
            self.assertLess(np.max(self.zero_ctx.sine_product_check(n, lam)), 1e-10)

    def test_reciprocal_root_integrals(self):
        """(1/2πi)∮_{Γ_m} dλ/w_n = −δ_mn."""
        for m in (-1, 0, 1, 2):
            for n in (-1, 0, 1):
                value = self.cos_ctx.reciprocal_root_integral(m, n)
                self.assertAlmostEqual(abs(value + (m == n)), 0.0, places=8, msg=f"(m, n)=({m}, {n})")

    def test_window_guard(self):
        """Re λ fuera de (N + ½)π no está certificado."""
        with self.assertRaises(AccuracyError):
            self.zero_ctx.canonical_root(np.array([(WINDOW + 1) * np.pi + 0.1j]))

    def test_chi_factor_without_other_gaps(self):
        """Con un solo gap abierto χ₀ ≡ 1."""
        lam = np.array([0.2 + 0.4j, 2.0])
        np.testing.assert_allclose(self.const_ctx.chi_factor(0, lam), np.ones(2))


class AbelianTestCase(SimpleTestCase):
    """Tests para F_n sobre caminos admisibles."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.zero_sd, _, cls.zero_ai = _build(Potential.zero())
        cls.cos_sd, cls.cos_ctx, cls.cos_ai = _build(Potential.from_real_u({1: 0.05}))
        cls.const_sd, _, cls.const_ai = _build(Potential.constant(A))

    def test_zero_potential_closed_form(self):
        """φ = 0: F_n(λ) = −i(λ − nπ)."""
        lam = np.array([0.3 + 0.2j, -4.0 - 0.7j, 9.1, 2.0 + 1.5j])
        for n in (0, 1, -2, WINDOW):
            np.testing.assert_allclose(self.zero_ai.F_batch(n, lam), -1j * (lam - n * np.pi), atol=1e-10)

    def test_realline_formula_at_zero(self):
        """φ = 0: la fórmula con arcsin da F(λ) = −iλ."""
        lam = np.array([0.7, 2.5, -1.2, 5.0])
        np.testing.assert_allclose(self.zero_ai.F_realline(lam), -1j * lam, atol=1e-9)

    def test_vanishes_at_gap_endpoints(self):
        """F_n(λ_n^−) = F_n(λ_n^+) = 0 en ambos lados."""
        for ai, n in ((self.cos_ai, 1), (self.cos_ai, -1), (self.const_ai, 0)):
            for side in (+1, -1):
                values = ai.gap_side_value(n, np.array([-1.0, 1.0]), side)
                self.assertLess(np.max(np.abs(values)), 1e-8, f"F_{n} no se anula en los extremos")

    def test_gap_sides_are_antisymmetric(self):
        """F_n(λ + i0) = −F_n(λ − i0) sobre G_n."""
        profile = self.cos_ai.gap_side_profile(1)
        self.assertLess(profile.antisymmetry, 1e-10, "Los lados de G_1 deberían ser opuestos")
        self.assertGreater(profile.sup_ratio, 0.0)

    def test_inside_gap_requires_side(self):
        """F_n sobre un gap abierto sin etiqueta de lado es error de dominio."""
        tau = self.const_sd.tau_of(0)
        with self.assertRaises(DomainError):
            self.const_ai.F_n(0, tau + 0.1)

    def test_path_quadrature_matches_realline_formula(self):
        """Entre gaps la cuadratura coincide con −i(n + ½)π − i·arcsin(...)."""
        sd = self.cos_sd
        a = sd.lam_plus[sd.index_of(0)].real
        b = sd.lam_minus[sd.index_of(1)].real
        for lam in (0.5 * (a + b), a + 0.3 * (b - a)):
            path = self.cos_ai.F(lam)
            closed = self.cos_ai.F_realline(lam)[0]
            self.assertAlmostEqual(abs(path - closed), 0.0, places=8)

    def test_log_formula_near_gap(self):
        """Cerca de G_n: F_n = Log((−1)ⁿ(Δ + √c)/2)."""
        tau = self.cos_sd.tau_of(1)
        lam = np.array([tau + 0.02 + 0.03j, tau - 0.04 + 0.05j])
        np.testing.assert_allclose(self.cos_ai.F_batch(1, lam), self.cos_ai.F_log(1, lam), atol=1e-8)

    def test_closed_integral_vanishes(self):
        """∮_{Γ_k} Δ̇/√c dλ = 0."""
        for k in (-1, 0, 1, 2):
            self.assertAlmostEqual(abs(self.cos_ai.closed_integral(k)), 0.0, places=8)

    def test_contour_values_match_path(self):
        """F_k en los nodos de Γ_k por FFT coincide con la cuadratura de camino."""
        lam, values, residual = self.cos_ai.F_on_contour(1)
        self.assertLess(abs(residual), 1e-9, "El residuo de cierre debería anularse")
        for j in (0, lam.size // 8, lam.size // 2 + 3):
            self.assertAlmostEqual(abs(values[j] - self.cos_ai.F_n(1, lam[j])), 0.0, places=8)

    def test_stations_stay_inside_window(self):
        """Las estaciones del corredor no salen de |Re λ| ≤ (N + ½)π."""
        self.assertLessEqual(self.zero_ai._station_reach(), (WINDOW + 0.5) * np.pi)
        lam = np.array([25.0 + 0.2j, 26.5 + 0.3j, -26.4 - 0.1j])
        np.testing.assert_allclose(self.zero_ai.F_batch(0, lam), -1j * lam, atol=1e-9)

    def test_laurent_fit_recovers_hamiltonians(self):
        """El ajuste de Laurent de F reproduce H₁ y H₃ del cálculo directo."""
        fit = self.cos_ai.laurent_fit()
        direct = hamiltonians(self.cos_sd.phi)
        self.assertAlmostEqual(fit.hamiltonians.h1.real / direct.h1.real, 1.0, delta=1e-5)
        self.assertAlmostEqual(fit.hamiltonians.h3.real / direct.h3.real, 1.0, delta=1e-5)
        self.assertLess(abs(fit.hamiltonians.h2), 1e-5, "H₂ se anula en E_r")

    def test_laurent_fit_two_modes(self):
        """Con dos modos los términos altos de la serie son grandes y H₁..H₄ siguen en 1e-5."""
        sd, _, ai = _build(Potential.from_real_u({1: 0.05, 2: 0.05}))
        fit = ai.laurent_fit()
        fitted = fit.hamiltonians.as_array()
        direct = hamiltonians(sd.phi).as_array()
        scale = np.maximum(np.abs(direct), abs(direct[0]))
        np.testing.assert_array_less(np.abs(fitted - direct) / scale, 1e-5)
        self.assertGreaterEqual(fit.jmin, 16)
        self.assertIn(5, fit.extra)


class ContourTestCase(SimpleTestCase):
    """Tests para las cuadraturas de contorno y de segmento."""

    def test_circle_residue(self):
        """∮ dλ/(λ − 0.1) = 2πi."""
        value, _ = Contour(center=0.0, radius=0.45).integrate(lambda z: 1 / (z - 0.1), tol=1e-13)
        self.assertAlmostEqual(abs(value - 2j * np.pi), 0.0, places=11)

    def test_graded_segment_absorbs_endpoint_singularity(self):
        """∫_0^1 s^{−1/2} ds = 2 con paneles graduados."""
        z, w = segment_rule(0.0, 1.0, graded='start')
        self.assertAlmostEqual(np.sum(w / np.sqrt(z)).real, 2.0, places=7)

    def test_non_convergence_raises(self):
        """Sin converger bajo max_nodes se reporta error de precisión."""
        with self.assertRaises(AccuracyError):
            Contour(center=0.0, radius=1.0).integrate(
                lambda z: 1 / (z - 0.999), tol=1e-15, nodes=4, max_nodes=8
            )
