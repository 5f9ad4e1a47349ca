# apps/sequences/services/transforms.py
"""
Sucesiones bi-infinitas truncadas a la ventana [−N, N].

- hilbert:              (Hx)_n = Σ_{m≠n} x_m/(m − n)
- modified_transform:   (Ax)_n = π Σ_{m≠n} x_m/(ρ_m − σ_n)
- weighted_norm:        ‖x‖_{s,q} = (Σ ⟨n⟩^{sq}|x_n|^q)^{1/q},  ⟨n⟩ = 1 + |n|

Uso:
    x = BiSequence.unit(N=16, at=0)
    hilbert(x).at(3)          # −1/3
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from apps.core.exceptions import DomainError

logger = logging.getLogger(__name__)

# Constante de separación por defecto: |ρ_m − σ_n| ≥ |m − n|/C
DEFAULT_SEPARATION = 10.0


@dataclass(frozen=True)
class BiSequence:
    """Valores x_n para n ∈ [−N, N], guardados en la posición n + N."""
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1 or values.size % 2 == 0:
            raise DomainError(
                f"Una BiSequence necesita un número impar de valores (recibidos {values.size})"
            )
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_function(cls, N: int, func) -> 'BiSequence':
        n = np.arange(-N, N + 1)
        return cls(np.asarray(func(n)))

    @classmethod
    def unit(cls, N: int, at: int = 0) -> 'BiSequence':
        values = np.zeros(2 * N + 1)
        values[at + N] = 1.0
        return cls(values)

    @property
    def N(self) -> int:
        return self.values.size // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def at(self, n: int):
        return self.values[n + self.N]

    def __add__(self, other: 'BiSequence') -> 'BiSequence':
        return BiSequence(self.values + other.values)

    def __mul__(self, scalar) -> 'BiSequence':
        return BiSequence(self.values * scalar)

    __rmul__ = __mul__


def _hilbert_kernel(N: int) -> np.ndarray:
    """K[n, m] = 1/(m − n), diagonal nula (Toeplitz)."""
    offsets = np.arange(2 * N + 1, dtype=float)
    column = np.zeros_like(offsets)
    column[1:] = -1.0 / offsets[1:]
    row = np.zeros_like(offsets)
    row[1:] = 1.0 / offsets[1:]
    return toeplitz(column, row)


def hilbert(x: BiSequence) -> BiSequence:
    """Transformada de Hilbert discreta, suma exacta en la ventana."""
    return BiSequence(_hilbert_kernel(x.N) @ x.values)


def modified_transform(x: BiSequence, rho: BiSequence, sigma: BiSequence,
                       separation: float = DEFAULT_SEPARATION) -> BiSequence:
    """
    (Ax)_n = π Σ_{m≠n} x_m/(ρ_m − σ_n).

    Raises:
        DomainError: si |ρ_m − σ_n| < |m − n|/separation para algún m ≠ n
    """
    if not (x.N == rho.N == sigma.N):
        raise DomainError("x, ρ y σ deben compartir la ventana")
    n = x.indices
    diff = rho.values[None, :] - sigma.values[:, None]
    gap = np.abs(n[None, :] - n[:, None]).astype(float)
    off = gap > 0
    violation = off & (np.abs(diff) * separation < gap)
    if np.any(violation):
        row, col = np.argwhere(violation)[0]
        raise DomainError(
            f"Separación violada: |ρ_{n[col]} − σ_{n[row]}| < |m−n|/{separation:g}",
            details={'m': int(n[col]), 'n': int(n[row])},
        )
    kernel = np.zeros(diff.shape, dtype=np.result_type(diff, float))
    kernel[off] = np.pi / diff[off]
    return BiSequence(kernel @ x.values)


def weighted_norm(x: BiSequence, s: float = 0.0, q: float = 2.0) -> float:
    """Norma ℓ^{s,q} en la ventana con peso ⟨n⟩ = 1 + |n|."""
    if not q >= 1:
        raise DomainError(f"q debe ser >= 1 (recibido {q})", details={'q': q})
    weighted = (1.0 + np.abs(x.indices)) ** s * np.abs(x.values)
    return float(np.linalg.norm(weighted, ord=q))
