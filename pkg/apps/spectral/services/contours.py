# apps/spectral/services/contours.py
"""
Cuadraturas de contorno y de segmento.

- Contour: círculo con regla trapezoidal (exponencialmente precisa para
  integrandos analíticos en un anillo), duplicando nodos hasta converger.
- Segmentos rectos con Gauss–Legendre por paneles; paneles graduados
  geométricamente hacia extremos donde el integrando tiene una
  singularidad tipo 1/√ (extremos de gaps).

Uso:
    gamma = Contour(center=0.0, radius=0.45)
    value, nodes = gamma.integrate(lambda z: 1 / (z - 0.1), tol=1e-12)

    z, w = segment_rule(0.0, 1.0j, graded='start')
    value = np.sum(f(z) * w)
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import AccuracyError

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTES
# =============================================================================

# Nodos Gauss–Legendre por panel
GAUSS_ORDER = 24

# Razón de graduación de paneles hacia un extremo singular
GRADING_RATIO = 0.15

# Paneles graduados: hasta que el panel más chico mida < GRADING_FLOOR·longitud
GRADING_FLOOR = 1e-14


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodos y pesos en [-1, 1] (numpy.polynomial.legendre.leggauss)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel_breaks(graded: Optional[str], length: float) -> np.ndarray:
    """Bordes de paneles en [0, 1] (parámetro normalizado del segmento)."""
    if graded is None:
        count = max(1, int(np.ceil(length)))
        return np.linspace(0.0, 1.0, count + 1)
    # Paneles geométricos acumulados hacia s = 0
    breaks = [1.0]
    while breaks[-1] > GRADING_FLOOR:
        breaks.append(breaks[-1] * GRADING_RATIO)
    breaks.append(0.0)
    breaks = np.array(breaks[::-1])
    # Tramo largo sin graduar: paneles de longitud ≲ 1
    if length > 1.0:
        extra = np.linspace(GRADING_RATIO, 1.0, int(np.ceil(length)) + 1)[1:]
        breaks = np.unique(np.concatenate([breaks[breaks <= GRADING_RATIO], extra]))
    return breaks


def segment_rule(a: complex, b: complex, graded: Optional[str] = None,
                 order: int = GAUSS_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodos y pesos complejos para ∫_a^b f(z) dz sobre el segmento recto.

    Args:
        graded: None, 'start', 'end' o 'both' (extremos con singularidad 1/√)
    """
    a, b = complex(a), complex(b)
    length = abs(b - a)
    if length == 0:
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=complex)
    x, w = gauss_legendre(order)

    if graded == 'both':
        mid = 0.5 * (a + b)
        z1, w1 = segment_rule(a, mid, 'start', order)
        z2, w2 = segment_rule(mid, b, 'end', order)
        return np.concatenate([z1, z2]), np.concatenate([w1, w2])

    breaks = _panel_breaks('start' if graded in ('start', 'end') else None, length)
    lo, hi = breaks[:-1], breaks[1:]
    s = (0.5 * (hi - lo))[:, None] * x[None, :] + (0.5 * (hi + lo))[:, None]
    ws = (0.5 * (hi - lo))[:, None] * w[None, :]
    s, ws = s.ravel(), ws.ravel()
    if graded == 'end':
        s = 1.0 - s
    return a + (b - a) * s, (b - a) * ws


# =============================================================================
# CONTORNOS CIRCULARES
# =============================================================================

def circle_nodes(center: complex, radius: float, count: int, start: int = 0, step: int = 1):
    """Nodos λ_j = c + r·e^{iθ_j}, θ_j = 2πj/count, y dλ/dθ."""
    j = np.arange(start, count, step)
    theta = 2 * np.pi * j / count
    e = np.exp(1j * theta)
    return center + radius * e, 1j * radius * e


@dataclass(frozen=True)
class Contour:
    """Círculo orientado positivamente."""
    center: complex
    radius: float

    def nodes(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """(λ_j, peso_j) con Σ f(λ_j)·peso_j ≈ ∮ f dλ."""
        lam, dlam = circle_nodes(self.center, self.radius, count)
        return lam, dlam * (2 * np.pi / count)

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) < self.radius

    def integrate(self, func: Callable[[np.ndarray], np.ndarray], tol: float = None,
                  nodes: int = None, max_nodes: int = None) -> Tuple[complex, int]:
        """
        ∮ func dλ por trapecio, duplicando nodos (reutiliza evaluaciones).

        Returns:
            (valor, número de nodos usados)

        Raises:
            AccuracyError: si no converge con max_nodes
        """
        tol = tol if tol is not None else settings.ZSB_QUAD_TOL
        count = nodes or settings.ZSB_CONTOUR_NODES
        max_nodes = max_nodes or settings.ZSB_CONTOUR_MAX_NODES

        lam, dlam = circle_nodes(self.center, self.radius, count)
        acc = np.sum(func(lam) * dlam)
        previous = acc * (2 * np.pi / count)
        while count < max_nodes:
            lam, dlam = circle_nodes(self.center, self.radius, 2 * count, start=1, step=2)
            acc = acc + np.sum(func(lam) * dlam)
            count *= 2
            current = acc * (2 * np.pi / count)
            if abs(current - previous) <= tol * (1.0 + abs(current)):
                return complex(current), count
            previous = current
        raise AccuracyError(
            f"Cuadratura de contorno sin converger con {max_nodes} nodos "
            f"(centro={self.center:.6g}, radio={self.radius:.3g})",
            details={'center': complex(self.center), 'radius': self.radius},
        )
