# apps/evolution/services/birkhoff.py
"""
Flujo de fases en coordenadas de Birkhoff: I_n constantes, θ_n += ω_n·t.

Uso:
    bs = BirkhoffState.from_spectrum(fs)
    bs = birkhoff_flow(bs, t=0.01, sharp=True)
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from apps.core.exceptions import DivergenceError, DomainError
from apps.frequencies.services.frequencies import FrequencySpectrum

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class BirkhoffState:
    """Acciones I_n ≥ 0 y fases θ_n ∈ [0, 2π) sobre los índices n."""
    n: np.ndarray
    I: np.ndarray
    theta: np.ndarray
    omega_source: FrequencySpectrum
    t: float = 0.0

    @classmethod
    def from_spectrum(cls, fs: FrequencySpectrum, theta=None, seed: int = None,
                      tol: float = 1e-10) -> 'BirkhoffState':
        """
        Estado inicial desde un espectro de frecuencias.

        Donde I_n = 0 la fase no tiene significado geométrico (z_n = 0), pero
        se conserva y evoluciona igual.
        """
        actions = np.asarray(fs.I).real
        if np.any(actions < -tol):
            bad = int(fs.n[np.argmin(actions)])
            raise DomainError(f"I_{bad} < 0: el estado no está en el cuadrante positivo", details={'n': bad})
        actions = np.clip(actions, 0.0, None)
        if theta is None:
            rng = np.random.default_rng(seed)
            theta = rng.uniform(0.0, TWO_PI, size=actions.size) if seed is not None else np.zeros(actions.size)
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        return cls(n=np.asarray(fs.n), I=actions, theta=theta, omega_source=fs)

    @property
    def z_plus(self) -> np.ndarray:
        """z_n^+ = √I_n·e^{−iθ_n}."""
        return np.sqrt(self.I) * np.exp(-1j * self.theta)

    @property
    def z_minus(self) -> np.ndarray:
        return np.sqrt(self.I) * np.exp(1j * self.theta)


def birkhoff_flow(bs: BirkhoffState, t: float, sharp: bool = True) -> BirkhoffState:
    """
    θ_n ← θ_n + ω_n·t (mod 2π), con ω# si sharp y ω (solo E_r) si no.
    """
    fs = bs.omega_source
    if sharp:
        omega = fs.omega_sharp
    elif fs.omega is None:
        raise DivergenceError(
            "ω_n sin renormalizar indefinido (H₁ infinito o potencial fuera de E_r); use sharp=True",
            details={'h1': complex(fs.h1)},
        )
    else:
        omega = fs.omega
    theta = np.mod(bs.theta + np.real(omega) * t, TWO_PI)
    return replace(bs, theta=theta, t=bs.t + t)
