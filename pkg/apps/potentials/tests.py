"""
Tests para potenciales, normas de Fourier–Lebesgue y Hamiltonianos.
"""
import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import ConfigError, DomainError

from .potential import Potential, fl_norm, hamiltonians, power_law_potential
from .serializers import PotentialSerializer, load_potential


class PotentialTestCase(SimpleTestCase):
    """Tests para la representación y los predicados de simetría."""

    def test_from_real_u_completes_conjugate_mode(self):
        """Si falta el modo −n se completa con el conjugado de n."""
        phi = Potential.from_real_u({1: 0.05 + 0.01j})
        self.assertAlmostEqual(
            phi.coefficient(-1), 0.05 - 0.01j,
            msg="El modo −1 debería ser el conjugado del modo 1"
        )
        self.assertTrue(phi.is_er(), "(u, u) con u real debería pertenecer a E_r")

    def test_from_real_u_rejects_inconsistent_pair(self):
        """Un par de modos no conjugados no representa un u real."""
        with self.assertRaises(DomainError):
            Potential.from_real_u({1: 0.05, -1: 0.02})

    def test_real_type_is_pointwise_conjugation(self):
        """Tipo real: φ₊(x) = conj(φ₋(x)) en todo punto."""
        phi = Potential.from_minus({1: 0.04 + 0.02j, -2: 0.01j})
        self.assertTrue(phi.is_real_type(), "from_minus debería generar un par de tipo real")
        self.assertFalse(phi.is_er(), "φ₊ ≠ φ₋ así que no está en E_r")
        x = np.linspace(0, 1, 17)
        minus, plus = phi.evaluate(x)
        np.testing.assert_allclose(plus, np.conj(minus), atol=1e-15)

    def test_generic_pair_is_not_real_type(self):
        """Un par con φ₊ independiente no es de tipo real."""
        phi = Potential({1: 0.1}, {1: 0.1})
        self.assertFalse(phi.is_real_type(), "c₊(1) ≠ conj(c₋(−1)) no es tipo real")

    def test_truncate_and_nmodes(self):
        """truncate(k) conserva solo |n| ≤ k."""
        phi = power_law_potential(0.3, 16, amplitude=0.05)
        self.assertEqual(phi.nmodes, 16, "El dato modelo llega hasta |n| = 16")
        self.assertEqual(phi.truncate(4).nmodes, 4, "La truncación debería cortar en 4")
        self.assertTrue(phi.truncate(4).is_er(), "La truncación conserva E_r")

    def test_from_grid_recovers_coefficients(self):
        """El FFT de una malla real recupera los coeficientes del potencial."""
        x = np.arange(64) / 64
        u = 0.1 * np.cos(2 * np.pi * x) + 0.02 * np.sin(6 * np.pi * x)
        phi = Potential.from_grid(u)
        self.assertAlmostEqual(abs(phi.coefficient(1) - 0.05), 0.0, places=14)
        self.assertAlmostEqual(abs(phi.coefficient(3) - (-0.01j)), 0.0, places=14)
        self.assertEqual(phi.nmodes, 3, "No debería haber modos espurios")


class NormTestCase(SimpleTestCase):
    """Tests para fl_norm."""

    def test_l2_norm_of_cosine(self):
        """u = 0.1 cos 2πx: ‖ĉ‖_ℓ² = 0.05·√2."""
        phi = Potential.from_real_u({1: 0.05})
        self.assertAlmostEqual(fl_norm(phi, 2), 0.05 * np.sqrt(2), places=15)

    def test_infinity_norm(self):
        """p = inf retorna el máximo módulo."""
        phi = Potential.from_real_u({1: 0.05, 3: 0.2})
        self.assertAlmostEqual(fl_norm(phi, np.inf), 0.2, places=15)

    def test_invalid_p(self):
        """p < 1 no define una norma."""
        with self.assertRaises(DomainError):
            fl_norm(Potential.zero(), 0.5)

    def test_power_law_lp_norm_bounded(self):
        """Con αp > 1 la norma ℓ^p del dato modelo se estabiliza al crecer k."""
        u = power_law_potential(0.3, 512, amplitude=0.05)
        norms = [fl_norm(u.truncate(k), 4) for k in (64, 128, 256, 512)]
        increments = np.diff(norms)
        self.assertTrue(np.all(increments > 0), "La norma crece con k")
        self.assertTrue(np.all(np.diff(increments) < 0), "Los incrementos deberían decrecer")


class HamiltonianTestCase(SimpleTestCase):
    """Tests para H₁..H₄ por cuadratura directa."""

    def test_zero_potential(self):
        """Todos los Hamiltonianos se anulan en φ = 0."""
        np.testing.assert_array_equal(hamiltonians(Potential.zero()).as_array(), np.zeros(4))

    def test_constant_potential(self):
        """φ = (a, a): H₁ = a², H₂ = 0, H₃ = a⁴, H₄ = 0."""
        a = 0.3
        hv = hamiltonians(Potential.constant(a))
        self.assertAlmostEqual(hv.h1.real, a ** 2, places=14)
        self.assertAlmostEqual(abs(hv.h2), 0.0, places=14)
        self.assertAlmostEqual(hv.h3.real, a ** 4, places=14)
        self.assertAlmostEqual(abs(hv.h4), 0.0, places=14)

    def test_cosine_h1_h3(self):
        """u = ε cos 2πx: H₁ = ε²/2 y H₃ = (2πε)²/2 + 3ε⁴/8."""
        eps = 0.1
        hv = hamiltonians(Potential.from_real_u({1: eps / 2}))
        self.assertAlmostEqual(hv.h1.real, eps ** 2 / 2, places=14)
        self.assertAlmostEqual(hv.h3.real, (2 * np.pi * eps) ** 2 / 2 + 3 * eps ** 4 / 8, places=12)

    def test_er_has_vanishing_h2(self):
        """En E_r el Hamiltoniano H₂ se anula."""
        hv = hamiltonians(Potential.from_real_u({1: 0.05, 2: 0.03 + 0.01j}))
        self.assertAlmostEqual(abs(hv.h2), 0.0, places=14)

    def test_real_type_values_are_real_and_h1_nonnegative(self):
        """Tipo real: valores reales y H₁ ≥ 0."""
        hv = hamiltonians(Potential.from_minus({1: 0.04 + 0.02j, -1: 0.01}))
        self.assertGreaterEqual(hv.h1.real, 0.0, "H₁ = ∫|φ₋|² no puede ser negativo")
        for value in hv.as_array():
            self.assertEqual(value.imag, 0.0, "Tipo real debería dar Hamiltonianos reales")


class PotentialSerializerTestCase(SimpleTestCase):
    """Tests para el esquema JSON de potenciales."""

    def test_real_u_schema(self):
        """kind=real_u con filas [n, re, im]."""
        serializer = PotentialSerializer(data={'kind': 'real_u', 'coeffs': [[1, 0.05, 0.0]], 'name': 'cos'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        phi = serializer.save()
        self.assertTrue(phi.is_er(), "real_u debería producir un potencial E_r")
        self.assertEqual(phi.name, 'cos')

    def test_wrong_row_length(self):
        """Las filas de kind=pair llevan cinco valores."""
        serializer = PotentialSerializer(data={'kind': 'pair', 'coeffs': [[1, 0.05, 0.0]]})
        self.assertFalse(serializer.is_valid(), "Una fila corta debería rechazarse")
        self.assertIn('coeffs', serializer.errors)

    def test_repeated_mode(self):
        """Un modo repetido se rechaza."""
        serializer = PotentialSerializer(data={'kind': 'real_u', 'coeffs': [[1, 0.1, 0], [1, 0.2, 0]]})
        self.assertFalse(serializer.is_valid(), "El modo 1 aparece dos veces")

    def test_writer_emits_sorted_modes(self):
        """El writer emite los modos ordenados."""
        phi = Potential.from_real_u({2: 0.01, 1: 0.05})
        data = PotentialSerializer(phi).data
        self.assertEqual(data['kind'], 'real_u')
        self.assertEqual([row[0] for row in data['coeffs']], [-2, -1, 1, 2])

    def test_load_potential_reports_json_line(self):
        """Un JSON roto se reporta con número de línea."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'broken.json'
            path.write_text('{\n  "kind": "real_u",\n  "coeffs": [1, 2\n}', encoding='utf-8')
            with self.assertRaises(ConfigError) as ctx:
                load_potential(path)
            self.assertIn('line', ctx.exception.details, "El error debería llevar la línea")

    def test_load_potential_uses_file_stem_as_name(self):
        """Sin "name" el potencial toma el nombre del archivo."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'mi-potencial.json'
            path.write_text(json.dumps({'kind': 'real_u', 'coeffs': [[1, 0.05, 0.0]]}), encoding='utf-8')
            self.assertEqual(load_potential(path).name, 'mi-potencial')
