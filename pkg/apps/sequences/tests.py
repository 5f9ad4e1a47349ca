"""
Tests para sucesiones bi-infinitas, transformadas y ajuste de decaimiento.
"""
import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import DomainError, FitError

from .services.decay import decay_exponent
from .services.transforms import BiSequence, hilbert, modified_transform, weighted_norm


class BiSequenceTestCase(SimpleTestCase):

    def test_even_length_rejected(self):
        """La ventana [−N, N] tiene 2N + 1 valores."""
        with self.assertRaises(DomainError):
            BiSequence(np.zeros(4))

    def test_unit_and_arithmetic(self):
        x = BiSequence.unit(3, at=-2)
        self.assertEqual(x.N, 3)
        self.assertEqual(x.at(-2), 1.0)
        self.assertEqual((2 * x + x).at(-2), 3.0)


class TransformTestCase(SimpleTestCase):
    """Tests para H y A."""

    def test_hilbert_of_unit(self):
        """H(δ₀)_n = −1/n y H(δ₀)_0 = 0."""
        hx = hilbert(BiSequence.unit(16, at=0))
        self.assertEqual(hx.at(0), 0.0)
        for n in (1, -2, 5, 16):
            self.assertAlmostEqual(hx.at(n), -1.0 / n, places=15)

    def test_hilbert_is_antisymmetric(self):
        """⟨Hx, y⟩ = −⟨x, Hy⟩."""
        rng = np.random.default_rng(7)
        x = BiSequence(rng.normal(size=21))
        y = BiSequence(rng.normal(size=21))
        self.assertAlmostEqual(hilbert(x).values @ y.values, -(x.values @ hilbert(y).values), places=12)

    def test_modified_transform_reduces_to_hilbert(self):
        """Con ρ_m = m y σ_n = n, A = π·H."""
        x = BiSequence.from_function(8, lambda n: 1.0 / (1 + n ** 2))
        lattice = BiSequence.from_function(8, lambda n: n.astype(float))
        np.testing.assert_allclose(
            modified_transform(x, lattice, lattice).values, np.pi * hilbert(x).values, rtol=1e-13
        )

    def test_modified_transform_separation(self):
        """ρ_{n+1} = σ_n viola la separación."""
        x = BiSequence.unit(4, at=0)
        rho = BiSequence.from_function(4, lambda n: n.astype(float))
        sigma = BiSequence.from_function(4, lambda n: n + 1.0)
        with self.assertRaises(DomainError):
            modified_transform(x, rho, sigma)

    def test_modified_transform_window_mismatch(self):
        with self.assertRaises(DomainError):
            modified_transform(BiSequence.unit(2), BiSequence.unit(3), BiSequence.unit(3))

    def test_weighted_norm(self):
        """‖δ₃‖_{1,2} = ⟨3⟩ = 4."""
        self.assertAlmostEqual(weighted_norm(BiSequence.unit(5, at=3), s=1.0, q=2.0), 4.0)
        with self.assertRaises(DomainError):
            weighted_norm(BiSequence.unit(5), q=0.5)


class DecayTestCase(SimpleTestCase):
    """Tests para decay_exponent."""

    def test_power_law(self):
        """|x_n| = |n|^{−2} da α = 2."""
        fit = decay_exponent(BiSequence.from_function(64, lambda n: 1.0 / np.maximum(np.abs(n), 1) ** 2))
        self.assertAlmostEqual(fit.alpha, 2.0, places=10)
        self.assertFalse(fit.super_polynomial)
        self.assertTrue(fit.in_lq(1.0), "α = 2 pertenece a ℓ¹")

    def test_membership_margin(self):
        """α = 1/2 no pertenece a ℓ² con margen."""
        fit = decay_exponent(BiSequence.from_function(64, lambda n: 1.0 / np.sqrt(np.maximum(np.abs(n), 1))))
        self.assertFalse(fit.in_lq(2.0))
        self.assertTrue(fit.in_lq(4.0))

    def test_exponential_is_super_polynomial(self):
        fit = decay_exponent(BiSequence.from_function(64, lambda n: np.exp(-np.abs(n) / 2.0)))
        self.assertTrue(fit.super_polynomial, "e^{−|n|/2} decae más rápido que toda potencia")

    def test_loose_array_with_indices(self):
        """Arreglo suelto con índices explícitos."""
        n = np.arange(1, 33)
        fit = decay_exponent(3.0 * n ** -1.5, n=n)
        self.assertAlmostEqual(fit.alpha, 1.5, places=10)
        self.assertAlmostEqual(np.exp(fit.intercept), 3.0, places=8)

    def test_too_few_points(self):
        """Una sucesión casi nula no permite el ajuste."""
        with self.assertRaises(FitError):
            decay_exponent(BiSequence.unit(32, at=20))
