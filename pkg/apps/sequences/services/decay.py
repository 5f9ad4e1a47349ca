# apps/sequences/services/decay.py
"""
Ajuste de exponentes de decaimiento |x_n| ~ C|n|^{−α}.

Regresión log–log (numpy.polyfit) sobre |n| ∈ [N/4, N]. Si una recta en
escala semi-log explica mucho mejor los datos, o α es enorme, la sucesión
se marca como super-polinomial.

Uso:
    fit = decay_exponent(BiSequence.from_function(32, lambda n: 1.0 / np.maximum(np.abs(n), 1) ** 2))
    fit.alpha               # ≈ 2
    fit.in_lq(1.0)          # α·q > 1 con margen
"""

import logging
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import FitError

from .transforms import BiSequence

logger = logging.getLogger(__name__)

MIN_POINTS = 4
SUPER_POLYNOMIAL_ALPHA = 12.0
SEMILOG_ADVANTAGE = 0.25
MEMBERSHIP_MARGIN = 0.1


@dataclass(frozen=True)
class DecayFit:
    alpha: float
    intercept: float
    residual: float
    points: int
    super_polynomial: bool

    def in_lq(self, q: float, margin: float = MEMBERSHIP_MARGIN) -> bool:
        """(x_n) ∈ ℓ^q operacionalizado como α·q > 1 + margin."""
        return self.super_polynomial or self.alpha * q > 1 + margin


def decay_exponent(x, lo_frac: float = 0.25, hi_frac: float = 1.0, n=None) -> DecayFit:
    """
    Exponente α de |x_n| ≈ C|n|^{−α}.

    Args:
        x: BiSequence, o arreglo de valores con sus índices en n
        n: índices cuando x es un arreglo suelto

    Raises:
        FitError: con menos de MIN_POINTS valores no nulos en la sub-ventana
    """
    if isinstance(x, BiSequence):
        indices, values = x.indices, x.values
    else:
        values = np.asarray(x)
        indices = np.asarray(n) if n is not None else np.arange(values.size) - values.size // 2
    N = int(np.max(np.abs(indices))) if indices.size else 0
    size = np.abs(indices)
    keep = (size >= lo_frac * N) & (size <= hi_frac * N) & (size > 0)
    magnitude = np.abs(values)
    keep &= np.isfinite(magnitude) & (magnitude > 0)
    if np.count_nonzero(keep) < MIN_POINTS:
        raise FitError(
            f"Solo {np.count_nonzero(keep)} valores no nulos en |n| ∈ [{lo_frac * N:g}, {hi_frac * N:g}]",
            details={'points': int(np.count_nonzero(keep)), 'N': N},
        )

    log_n = np.log(size[keep].astype(float))
    log_x = np.log(magnitude[keep])
    slope, intercept = np.polyfit(log_n, log_x, 1)
    residual = float(np.sqrt(np.mean((np.polyval([slope, intercept], log_n) - log_x) ** 2)))

    lin_slope, lin_intercept = np.polyfit(size[keep].astype(float), log_x, 1)
    semilog_residual = float(np.sqrt(np.mean(
        (np.polyval([lin_slope, lin_intercept], size[keep]) - log_x) ** 2
    )))
    alpha = float(-slope)
    super_polynomial = bool(
        alpha > SUPER_POLYNOMIAL_ALPHA
        or (lin_slope < 0 and residual > 1e-3 and semilog_residual < SEMILOG_ADVANTAGE * residual)
    )
    logger.debug(
        f"[Decay] α={alpha:.3f} residuo log-log {residual:.2e}, semi-log {semilog_residual:.2e}"
        f"{' (super-polinomial)' if super_polynomial else ''}"
    )
    return DecayFit(
        alpha=alpha, intercept=float(intercept), residual=residual,
        points=int(np.count_nonzero(keep)), super_polynomial=super_polynomial,
    )
