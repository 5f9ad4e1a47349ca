# apps/potentials/potential.py
"""
Potenciales φ = (φ₋, φ₊) como series de Fourier truncadas en el círculo ℝ/ℤ.

Convenciones:
    φ±(x) = Σ_n c±(n)·e^{2πinx},  ∂ ↔ multiplicación por 2πin.
    Tipo real:  φ₊ = conj(φ₋) puntualmente, es decir c₊(n) = conj(c₋(−n)).
    E_r:        tipo real y φ₊ = φ₋ = u con u real.

Uso:
    phi = Potential.from_real_u({1: 0.05, -1: 0.05})
    phi.is_er()                  # True
    hamiltonians(phi).h1         # ∫ u²
    fl_norm(phi, 4)
"""

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

import numpy as np

from apps.core.exceptions import DomainError

logger = logging.getLogger(__name__)

# Tolerancia relativa para los predicados de simetría
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class HamiltonianValues:
    """Valores de H₁..H₄ de la jerarquía NLS."""
    h1: complex
    h2: complex
    h3: complex
    h4: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.h1, self.h2, self.h3, self.h4], dtype=complex)

    def real(self) -> 'HamiltonianValues':
        """Parte real (para potenciales de tipo real la parte imaginaria es ruido)."""
        return HamiltonianValues(*(complex(v.real) for v in self.as_array()))


class Potential:
    """
    Par de coeficientes de Fourier truncados.

    Inmutable: los arreglos internos se marcan como solo lectura.
    """

    def __init__(self, coeffs_minus: Mapping[int, complex], coeffs_plus: Mapping[int, complex], name: str = ''):
        modes = sorted(set(coeffs_minus) | set(coeffs_plus))
        self.name = name
        self._modes = np.array(modes, dtype=int)
        self._cm = np.array([complex(coeffs_minus.get(n, 0.0)) for n in modes], dtype=complex)
        self._cp = np.array([complex(coeffs_plus.get(n, 0.0)) for n in modes], dtype=complex)

        keep = (np.abs(self._cm) > 0) | (np.abs(self._cp) > 0)
        self._modes, self._cm, self._cp = self._modes[keep], self._cm[keep], self._cp[keep]
        for array in (self._modes, self._cm, self._cp):
            array.setflags(write=False)

    # =========================================================================
    # CONSTRUCTORES
    # =========================================================================

    @classmethod
    def zero(cls) -> 'Potential':
        return cls({}, {}, name='zero')

    @classmethod
    def constant(cls, a: float) -> 'Potential':
        """φ = (a, a) con a real: el potencial de un solo gap abierto (γ₀ = 2a)."""
        return cls({0: a}, {0: a}, name=f'constant-{a:g}')

    @classmethod
    def from_real_u(cls, coeffs: Mapping[int, complex], name: str = '') -> 'Potential':
        """
        φ = (u, u) con u real.

        Si falta el modo −n se completa con el conjugado de n; si ambos vienen
        y no son conjugados se rechaza.
        """
        full: Dict[int, complex] = {}
        for n, c in coeffs.items():
            full[int(n)] = complex(c)
        for n, c in list(full.items()):
            partner = full.get(-n)
            if partner is None:
                full[-n] = np.conj(c)
            elif abs(partner - np.conj(c)) > SYMMETRY_TOL * (1 + abs(c)):
                raise DomainError(
                    f"u no es real: c({-n}) != conj(c({n}))", details={'n': n}
                )
        return cls(full, full, name=name)

    @classmethod
    def from_minus(cls, coeffs_minus: Mapping[int, complex], name: str = '') -> 'Potential':
        """Par de tipo real generado por φ₋: c₊(n) = conj(c₋(−n))."""
        plus = {-int(n): np.conj(complex(c)) for n, c in coeffs_minus.items()}
        return cls(coeffs_minus, plus, name=name)

    @classmethod
    def from_grid(cls, u: np.ndarray, cutoff: float = 1e-14, name: str = '') -> 'Potential':
        """
        Potencial E_r desde valores reales u en una malla uniforme de [0, 1).

        Se descartan modos con |c(n)| < cutoff·max|c| y el modo de Nyquist.
        """
        u = np.asarray(u, dtype=float)
        size = u.size
        c = np.fft.fft(u) / size
        n = np.fft.fftfreq(size, d=1.0 / size).astype(int)
        valid = np.abs(n) < size // 2
        scale = np.max(np.abs(c)) if size else 0.0
        coeffs = {}
        for mode, value in zip(n[valid], c[valid]):
            if mode >= 0 and scale > 0 and abs(value) > cutoff * scale:
                coeffs[int(mode)] = value
        return cls.from_real_u(coeffs, name=name)

    # =========================================================================
    # ACCESO
    # =========================================================================

    @property
    def modes(self) -> np.ndarray:
        return self._modes

    @property
    def cm(self) -> np.ndarray:
        return self._cm

    @property
    def cp(self) -> np.ndarray:
        return self._cp

    @property
    def coeffs_minus(self) -> Dict[int, complex]:
        return {int(n): complex(c) for n, c in zip(self._modes, self._cm) if c != 0}

    @property
    def coeffs_plus(self) -> Dict[int, complex]:
        return {int(n): complex(c) for n, c in zip(self._modes, self._cp) if c != 0}

    @property
    def nmodes(self) -> int:
        """Semi-ancho de truncación: max |n| con coeficiente no nulo."""
        return int(np.max(np.abs(self._modes))) if self._modes.size else 0

    def is_zero(self) -> bool:
        return self._modes.size == 0

    def coefficient(self, n: int, component: str = 'minus') -> complex:
        source = self._cm if component == 'minus' else self._cp
        hit = np.nonzero(self._modes == n)[0]
        return complex(source[hit[0]]) if hit.size else 0.0j

    # =========================================================================
    # PREDICADOS
    # =========================================================================

    def is_real_type(self) -> bool:
        scale = 1.0 + float(np.max(np.abs(self._cm), initial=0.0))
        for n, cp in zip(self._modes, self._cp):
            if abs(cp - np.conj(self.coefficient(-int(n), 'minus'))) > SYMMETRY_TOL * scale:
                return False
        for n, cm in zip(self._modes, self._cm):
            if abs(np.conj(cm) - self.coefficient(-int(n), 'plus')) > SYMMETRY_TOL * scale:
                return False
        return True

    def is_er(self) -> bool:
        scale = 1.0 + float(np.max(np.abs(self._cm), initial=0.0))
        same = np.all(np.abs(self._cm - self._cp) <= SYMMETRY_TOL * scale)
        return bool(same) and self.is_real_type()

    # =========================================================================
    # EVALUACIÓN
    # =========================================================================

    def evaluate(self, x, derivative: int = 0):
        """(∂^k φ₋, ∂^k φ₊) en los puntos x."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.is_zero():
            zero = np.zeros(x.shape, dtype=complex)
            return zero, zero.copy()
        phase = np.exp(2j * np.pi * np.outer(x, self._modes))
        factor = (2j * np.pi * self._modes) ** derivative
        return phase @ (self._cm * factor), phase @ (self._cp * factor)

    def truncate(self, k: int) -> 'Potential':
        """Modos con |n| ≤ k."""
        keep = np.abs(self._modes) <= k
        minus = dict(zip(self._modes[keep].tolist(), self._cm[keep]))
        plus = dict(zip(self._modes[keep].tolist(), self._cp[keep]))
        return Potential(minus, plus, name=f'{self.name}|{k}' if self.name else '')

    def scaled(self, factor: float) -> 'Potential':
        minus = dict(zip(self._modes.tolist(), self._cm * factor))
        plus = dict(zip(self._modes.tolist(), self._cp * factor))
        return Potential(minus, plus, name=self.name)

    def __repr__(self):
        kind = 'E_r' if self.is_er() else ('real-type' if self.is_real_type() else 'complex')
        return f"Potential({self.name or 'anon'}, {kind}, nmodes={self.nmodes})"


# =============================================================================
# OPERACIONES
# =============================================================================

def power_law_potential(alpha: float, kmax: int, amplitude: float = 1.0) -> Potential:
    """u con coeficientes amplitude·|n|^(−alpha) para 1 ≤ |n| ≤ kmax."""
    coeffs = {n: amplitude * n ** (-alpha) for n in range(1, kmax + 1)}
    return Potential.from_real_u(coeffs, name=f'power-law-{alpha:g}-{kmax}')


def fl_norm(phi: Potential, p: float) -> float:
    """
    Norma ℓ^p de los coeficientes de Fourier (norma de Fourier–Lebesgue).

    Para tipo real ambas componentes tienen igual norma; en otro caso se
    retorna el máximo de las dos. p = inf está permitido.
    """
    if not p >= 1:
        raise DomainError(f"p debe ser >= 1 (recibido {p})", details={'p': p})
    if phi.is_zero():
        return 0.0
    minus = float(np.linalg.norm(phi.cm, ord=p))
    if phi.is_real_type():
        return minus
    return max(minus, float(np.linalg.norm(phi.cp, ord=p)))


def _quadrature_grid(phi: Potential) -> np.ndarray:
    # Relleno >= 4x: H₃ y H₄ son cuárticos en φ
    size = 64
    while size < 4 * (2 * phi.nmodes + 1):
        size *= 2
    return np.arange(size) / size


def hamiltonians(phi: Potential) -> HamiltonianValues:
    """
    H₁..H₄ de la jerarquía NLS, integrales sobre un período:

        H₁ = ∫ φ₋φ₊
        H₂ = (i/2) ∫ (φ₊∂φ₋ − φ₋∂φ₊)
        H₃ = ∫ (∂φ₋∂φ₊ + φ₋²φ₊²)
        H₄ = i ∫ (φ₋∂³φ₊ − 3φ₋²φ₊∂φ₊)

    Derivadas exactas en el lado de Fourier; la regla trapezoidal en la
    malla rellenada es exacta para polinomios trigonométricos.
    """
    if phi.is_zero():
        return HamiltonianValues(0j, 0j, 0j, 0j)
    x = _quadrature_grid(phi)
    m0, p0 = phi.evaluate(x)
    m1, p1 = phi.evaluate(x, derivative=1)
    _, p3 = phi.evaluate(x, derivative=3)

    h1 = np.mean(m0 * p0)
    h2 = 0.5j * np.mean(p0 * m1 - m0 * p1)
    h3 = np.mean(m1 * p1 + m0 ** 2 * p0 ** 2)
    h4 = 1j * np.mean(m0 * p3 - 3 * m0 ** 2 * p0 * p1)
    values = HamiltonianValues(complex(h1), complex(h2), complex(h3), complex(h4))
    if phi.is_real_type():
        values = values.real()
    return values
