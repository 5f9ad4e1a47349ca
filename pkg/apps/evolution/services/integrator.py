# apps/evolution/services/integrator.py
"""
Integración pseudoespectral de mKdV y mKdV# en el círculo ℝ/ℤ.

    mKdV:   ∂_t u = −∂_x³u + 6u²∂_x u
    mKdV#:  ∂_t u = −∂_x³u + 6(u² − ∫u²)∂_x u

Lado de Fourier (k = 2πn):  û_t = L·û + 2ik·(u³)^,  L = ik³ (− 6‖u‖²·ik en mKdV#).
El término renormalizante es lineal con coeficiente conservado, así que va
en L. Esquema ETDRK4 con coeficientes promediados sobre un círculo
complejo de raíces y desaliasing por la regla de 2/3.

Uso:
    gs = GridState.from_function(lambda x: 0.1 * np.cos(2 * np.pi * x), size=256)
    states = evolve_trajectory(gs, T=0.02, dt=1e-4, samples=3)
    conserved_quantities(states[-1])
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np
from django.conf import settings

from apps.core.exceptions import DomainError, InstabilityError

logger = logging.getLogger(__name__)

# Raíces del círculo complejo para los coeficientes φ_k(L·dt)
CONTOUR_POINTS = 32

# Crecimiento de ‖u‖ tolerado antes de declarar inestabilidad
GROWTH_LIMIT = 10.0


@dataclass(frozen=True)
class GridState:
    """u real en la malla uniforme x_j = j/size de [0, 1), al tiempo t."""
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        size = u.size
        if size < 16 or size & (size - 1):
            raise DomainError(f"La malla debe ser potencia de dos >= 16 (recibido {size})")
        u.setflags(write=False)
        object.__setattr__(self, 'u', u)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], size: int = None) -> 'GridState':
        size = size or settings.ZSB_GRID_SIZE
        x = np.arange(size) / size
        return cls(np.asarray(func(x), dtype=float) * np.ones(size))

    @property
    def size(self) -> int:
        return self.u.size

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.size) / self.size

    @property
    def mean(self) -> float:
        return float(np.mean(self.u))

    @property
    def l2(self) -> float:
        """∫u² (promedio trapezoidal, exacto para polinomios trigonométricos)."""
        return float(np.mean(self.u ** 2))


def wavenumbers(size: int) -> np.ndarray:
    """k = 2πn para rfft, con el modo de Nyquist anulado."""
    k = 2 * np.pi * np.arange(size // 2 + 1)
    k[-1] = 0.0
    return k


def shift_grid(u: np.ndarray, a: float) -> np.ndarray:
    """u(x − a) por multiplicación exacta en Fourier."""
    size = u.size
    k = wavenumbers(size)
    return np.fft.irfft(np.fft.rfft(u) * np.exp(-1j * k * a), n=size)


class ETDRK4Integrator:
    """
    ETDRK4 (diferencias temporales exponenciales, Runge–Kutta de orden 4).

    Args:
        size: tamaño de la malla
        dt: paso temporal
        renormalized: True para mKdV#
        l2: ∫u² conservado (solo se usa con renormalized)
    """

    def __init__(self, size: int, dt: float, renormalized: bool = False, l2: float = 0.0):
        if not dt > 0:
            raise DomainError(f"dt debe ser > 0 (recibido {dt})")
        self.size = size
        self.dt = float(dt)
        self.renormalized = renormalized
        self.k = wavenumbers(size)
        self.dealias = np.arange(size // 2 + 1) <= size // 3

        L = 1j * self.k ** 3
        if renormalized:
            L = L - 6 * l2 * 1j * self.k
        self.E = np.exp(dt * L)
        self.E2 = np.exp(0.5 * dt * L)

        # Promedio sobre el círculo: L complejo, no se toma parte real
        roots = np.exp(2j * np.pi * (np.arange(CONTOUR_POINTS) + 0.5) / CONTOUR_POINTS)
        LR = dt * L[:, None] + roots[None, :]
        self.Q = dt * np.mean((np.exp(LR / 2) - 1) / LR, axis=1)
        self.f1 = dt * np.mean((-4 - LR + np.exp(LR) * (4 - 3 * LR + LR ** 2)) / LR ** 3, axis=1)
        self.f2 = dt * np.mean((2 + LR + np.exp(LR) * (LR - 2)) / LR ** 3, axis=1)
        self.f3 = dt * np.mean((-4 - 3 * LR - LR ** 2 + np.exp(LR) * (4 - LR)) / LR ** 3, axis=1)

    def nonlinear(self, v: np.ndarray) -> np.ndarray:
        """2ik·(u³)^ con desaliasing."""
        u = np.fft.irfft(v * self.dealias, n=self.size)
        return 2j * self.k * np.fft.rfft(u ** 3) * self.dealias

    def step_fft(self, v: np.ndarray) -> np.ndarray:
        Nv = self.nonlinear(v)
        a = self.E2 * v + self.Q * Nv
        Na = self.nonlinear(a)
        b = self.E2 * v + self.Q * Na
        Nb = self.nonlinear(b)
        c = self.E2 * a + self.Q * (2 * Nb - Nv)
        Nc = self.nonlinear(c)
        return self.E * v + Nv * self.f1 + 2 * (Na + Nb) * self.f2 + Nc * self.f3

    def advance(self, gs: GridState, steps: int, reference: float = None) -> GridState:
        reference = gs.l2 if reference is None else reference
        v = np.fft.rfft(gs.u)
        for step in range(steps):
            v = self.step_fft(v)
            if step % 64 == 63 or step == steps - 1:
                self._check_growth(v, reference, gs.t + (step + 1) * self.dt)
        return GridState(np.fft.irfft(v, n=self.size), gs.t + steps * self.dt)

    def _check_growth(self, v: np.ndarray, reference: float, t: float):
        u = np.fft.irfft(v, n=self.size)
        l2 = float(np.mean(u ** 2))
        if not np.isfinite(l2) or (reference > 0 and l2 > GROWTH_LIMIT ** 2 * reference):
            raise InstabilityError(
                f"‖u‖ creció más de {GROWTH_LIMIT:g}× en t={t:.4g} (dt={self.dt:g})",
                details={'t': t, 'l2': l2, 'reference': reference},
            )


# =============================================================================
# API FUNCIONAL
# =============================================================================

def step_mkdv(gs: GridState, dt: float, renormalized: bool = False) -> GridState:
    """Un paso ETDRK4."""
    integrator = ETDRK4Integrator(gs.size, dt, renormalized=renormalized, l2=gs.l2)
    return integrator.advance(gs, 1)


def conserved_quantities(gs: GridState) -> Dict[str, float]:
    """Media, ∫u² y ∫(u_x² + u⁴) de la malla."""
    k = wavenumbers(gs.size)
    ux = np.fft.irfft(1j * k * np.fft.rfft(gs.u), n=gs.size)
    return {
        't': gs.t,
        'mean': gs.mean,
        'l2': gs.l2,
        'h3': float(np.mean(ux ** 2 + gs.u ** 4)),
    }


def evolve_trajectory(u0: GridState, T: float, dt: float = None, samples: int = 2,
                      renormalized: bool = False) -> List[GridState]:
    """
    Estados en `samples` tiempos equiespaciados de [0, T] (incluye ambos extremos).
    """
    dt = dt or settings.ZSB_DT
    if T < 0:
        raise DomainError(f"T debe ser >= 0 (recibido {T})")
    steps = max(1, int(round(T / dt))) if T > 0 else 0
    dt_eff = T / steps if steps else dt
    marks = np.unique(np.round(np.linspace(0, steps, max(samples, 2))).astype(int))

    integrator = ETDRK4Integrator(u0.size, dt_eff, renormalized=renormalized, l2=u0.l2)
    states = [u0]
    current, done = u0, 0
    for mark in marks[1:]:
        current = integrator.advance(current, int(mark - done), reference=u0.l2)
        done = int(mark)
        states.append(current)
    logger.info(
        f"[Evolution] {'mKdV#' if renormalized else 'mKdV'}: {steps} pasos de {dt_eff:.3g} "
        f"hasta T={T:g}, ∫u² {u0.l2:.12g} → {states[-1].l2:.12g}"
    )
    return states
