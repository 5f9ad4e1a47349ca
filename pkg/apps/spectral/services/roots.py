# apps/spectral/services/roots.py
"""
Raíces estándar, raíz canónica y productos infinitos.

    w_n(λ)   = (τ_n − λ)·√⁺(1 − γ_n²/4(τ_n − λ)²)
    √c(λ)    = 2i·Π_m w_m(λ)/π_m            (π_0 = 1, π_m = mπ)
    Δ̇/√c     = −i·Π_m (λ_m^• − λ)/w_m(λ)
    χ_n(λ)   = Π_{m≠n} (λ_m^• − λ)/w_m(λ)
    ζ_n(λ)   = Π_{m≠n} (σ_m − λ)/w_m(λ)

Los factores |m| ≤ N vienen de SpectralData. La cola |m| > N se cierra con
la identidad del seno más el modelo asintótico de valores propios
τ̂_m = mπ + H₁/(2mπ) + H₂/(4m²π²): factores explícitos hasta M y una
corrección cerrada (polygamma) más allá de M.

En los lados de un gap abierto la raíz estándar se evalúa con la etiqueta
explícita side = (n, ±1):  w_n = ∓i(γ_n/2)√(1 − t²),  λ = τ_n + tγ_n/2.

Uso:
    ctx = RootContext(sd, M=128)
    ctx.canonical_root(np.array([0.5 + 0.1j]))
    ctx.quotient_w(lam, side=(0, +1))
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import polygamma

from apps.core.exceptions import AccuracyError, DomainError
from apps.potentials.potential import hamiltonians

from .contours import Contour
from .spectrum import SpectralData

logger = logging.getLogger(__name__)

# Distancia a la red mπ bajo la cual la cola del seno se suma como serie
LATTICE_GUARD = 1e-2

# Términos explícitos de la serie de la cola cerca de la red
TAIL_SERIES_TERMS = 4096

Side = Optional[Tuple[int, int]]


def _pi_m(m: np.ndarray) -> np.ndarray:
    return np.where(m == 0, 1.0, m * np.pi)


def sine_tail(lam: np.ndarray, N: int) -> np.ndarray:
    """
    S_N(λ) = Π_{|m|>N} (mπ − λ)/π_m = Π_{m>N} (1 − λ²/(mπ)²).

    Lejos de la red: identidad −sin λ / Π_{|m|≤N}(mπ − λ)/π_m.
    Cerca de algún mπ (|m| ≤ N): serie logarítmica con resto polygamma.
    """
    lam = np.asarray(lam, dtype=complex)
    m = np.arange(-N, N + 1)
    q = (m[:, None] * np.pi - lam[None, ...].reshape(1, -1)) / _pi_m(m)[:, None]
    near = np.min(np.abs(q * _pi_m(m)[:, None]), axis=0) < LATTICE_GUARD
    flat = lam.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)

    far = ~near
    if np.any(far):
        out[far] = -np.sin(flat[far]) / np.prod(q[:, far], axis=0)
    if np.any(near):
        z = flat[near]
        k = np.arange(N + 1, N + 1 + TAIL_SERIES_TERMS)
        x = (z[None, :] / (k[:, None] * np.pi)) ** 2
        log_sum = np.sum(np.log1p(-x), axis=0)
        K = N + TAIL_SERIES_TERMS
        log_sum -= (z ** 2 / np.pi ** 2) * polygamma(1, K + 1)
        log_sum -= (z ** 4 / (2 * np.pi ** 4)) * polygamma(3, K + 1) / 6
        out[near] = np.exp(log_sum)
    return out.reshape(lam.shape)


class RootContext:
    """
    Contexto inmutable de raíces y productos para un SpectralData.

    Args:
        sd: datos espectrales localizados
        M: índice de truncación del producto (M ≥ N); default 4N
    """

    def __init__(self, sd: SpectralData, M: int = None):
        self.sd = sd
        self.N = sd.N
        self.M = max(int(M) if M else 4 * sd.N, sd.N)

        hv = hamiltonians(sd.phi)
        self.h1, self.h2 = complex(hv.h1), complex(hv.h2)

        self.open_n = sd.open_gaps()
        idx = self.open_n + sd.N
        self.tau_open = sd.tau[idx]
        self.gamma_open = sd.gamma[idx]
        self.lam_dot_open = sd.lam_dot[idx]

        self.sign = 1.0
        self.sign_anchor = None
        if sd.real_type and sd.N >= 1:
            self._anchor_sign()

    # =========================================================================
    # VALIDACIÓN
    # =========================================================================

    def _check_window(self, lam: np.ndarray):
        limit = (self.N + 0.5) * np.pi
        if np.any(np.abs(lam.real) > limit + 1e-12):
            worst = lam.flat[np.argmax(np.abs(lam.real))]
            raise AccuracyError(
                f"Re λ={worst.real:.4g} fuera de la ventana certificada |Re λ| ≤ (N+½)π={limit:.4g}",
                details={'lambda': complex(worst), 'N': self.N},
            )

    def gap_parameter(self, n: int, lam: np.ndarray) -> np.ndarray:
        i = self.sd.index_of(n)
        return (lam - self.sd.tau[i]) / (self.sd.gamma[i] / 2)

    def check_off_gaps(self, lam: np.ndarray, skip: Optional[int] = None):
        for n, tau, gamma in zip(self.open_n, self.tau_open, self.gamma_open):
            if n == skip:
                continue
            t = (lam - tau) / (gamma / 2)
            inside = (np.abs(t.imag) < 1e-14) & (np.abs(t.real) < 1 - 1e-14)
            if np.any(inside):
                raise DomainError(
                    f"λ dentro del gap abierto G_{n} sin etiqueta de lado",
                    details={'n': int(n), 'lambda': complex(lam.flat[np.argmax(inside)])},
                )

    # =========================================================================
    # RAÍCES ESTÁNDAR
    # =========================================================================

    def standard_root(self, n: int, lam, side: int = None) -> np.ndarray:
        """
        w_n(λ). Con side = ±1, λ debe estar en G_n y se usa el valor lateral.
        """
        lam = np.asarray(lam, dtype=complex)
        i = self.sd.index_of(n)
        tau, gamma = self.sd.tau[i], self.sd.gamma[i]
        if self.sd.collapsed[i] or gamma == 0:
            return tau - lam
        if side is not None:
            t = self.gap_parameter(n, lam).real
            if np.any(np.abs(t) > 1 + 1e-12):
                raise DomainError(f"λ no está en G_{n} (|t| > 1)", details={'n': int(n)})
            return self.standard_root_side(n, t, side)
        self.check_off_gaps(lam)
        d = tau - lam
        return d * np.sqrt(1 - gamma ** 2 / (4 * d ** 2))

    def standard_root_side(self, n: int, t, side: int) -> np.ndarray:
        """Valor lateral ∓i(γ_n/2)√(1 − t²) en G_n^±."""
        gamma = self.sd.gamma[self.sd.index_of(n)]
        t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
        return -side * 1j * (gamma / 2) * np.sqrt(1 - t ** 2)

    def _open_roots(self, lam: np.ndarray, side: Side) -> np.ndarray:
        """Matriz (gaps abiertos) × (puntos) de w_m(λ)."""
        d = self.tau_open[:, None] - lam.reshape(1, -1)
        w = d * np.sqrt(1 - self.gamma_open[:, None] ** 2 / (4 * d ** 2))
        if side is not None:
            n, s = side
            hit = np.nonzero(self.open_n == n)[0]
            if hit.size:
                t = self.gap_parameter(n, lam.reshape(-1)).real
                w[hit[0]] = self.standard_root_side(n, t, s)
        return w

    def _prepare(self, lam, side: Side) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        self._check_window(lam)
        self.check_off_gaps(lam, skip=side[0] if side else None)
        return lam

    # =========================================================================
    # COLA DEL PRODUCTO
    # =========================================================================

    def _model_tau(self, m: np.ndarray) -> np.ndarray:
        return m * np.pi + self.h1 / (2 * m * np.pi) + self.h2 / (4 * m ** 2 * np.pi ** 2)

    def _model_tail(self, lam: np.ndarray, start: int, step: int = 1) -> np.ndarray:
        """Π_{|m|>start, m ≡ 0 mod step} (τ̂_m − λ)/(mπ − λ), explícito hasta M."""
        flat = lam.reshape(-1)
        if self.h1 == 0 and self.h2 == 0:
            return np.ones(lam.shape, dtype=complex)
        m = np.arange(start + 1, self.M + 1)
        m = m[m % step == 0]
        m = np.concatenate([m, -m])
        factors = 1 + (self._model_tau(m)[:, None] - m[:, None] * np.pi) / (m[:, None] * np.pi - flat[None, :])
        log_tail = np.sum(np.log(factors), axis=0) if m.size else np.zeros(flat.shape, dtype=complex)
        # |m| > M: Σ H₁/(mπ)² por pares ±m
        k0 = self.M // step + 1
        log_tail += self.h1 * polygamma(1, k0) / (step ** 2 * np.pi ** 2)
        return np.exp(log_tail).reshape(lam.shape)

    # =========================================================================
    # RAÍZ CANÓNICA Y COCIENTE
    # =========================================================================

    def canonical_root(self, lam, side: Side = None) -> np.ndarray:
        """
        √c(Δ² − 4)(λ) = 2i·Π_{|m|≤N}(w_m/π_m)·S_N(λ)·T(λ)

        Factores colapsados usan w_m = τ_m − λ.
        """
        lam = self._prepare(lam, side)
        flat = lam.reshape(-1)
        m = self.sd.indices
        w = (self.sd.tau[:, None] - flat[None, :])
        if self.open_n.size:
            w[self.open_n + self.N] = self._open_roots(flat, side)
        window = np.prod(w / _pi_m(m)[:, None], axis=0)
        result = 2j * window * sine_tail(flat, self.N) * self._model_tail(flat, self.N)
        return (self.sign * result).reshape(lam.shape)

    def quotient_w(self, lam, side: Side = None) -> np.ndarray:
        """Δ̇/√c = −i·Π_{m abierto}(λ_m^• − λ)/w_m(λ); cola unitaria."""
        lam = self._prepare(lam, side)
        flat = lam.reshape(-1)
        if not self.open_n.size:
            return np.full(lam.shape, -1j * self.sign)
        w = self._open_roots(flat, side)
        ratio = (self.lam_dot_open[:, None] - flat[None, :]) / w
        return (-1j * self.sign * np.prod(ratio, axis=0)).reshape(lam.shape)

    def chi_factor(self, k: int, lam, side: Side = None) -> np.ndarray:
        """χ_k(λ) = Π_{m≠k}(λ_m^• − λ)/w_m(λ): analítico en U_k."""
        return self.zeta_factor(k, lam, sigma=None, side=side)

    def zeta_factor(self, k: int, lam, sigma: Optional[Dict[int, complex]] = None,
                    side: Side = None) -> np.ndarray:
        """
        ζ_k(λ) = Π_{m≠k}(σ_m − λ)/w_m(λ); sigma=None usa σ_m = λ_m^•.

        Los gaps colapsados aportan 1 (σ_m = τ_m).
        """
        lam = np.asarray(lam, dtype=complex)
        self._check_window(lam)
        flat = lam.reshape(-1)
        keep = self.open_n != k
        if not np.any(keep):
            return np.ones(lam.shape, dtype=complex)
        if sigma is None:
            roots = self.lam_dot_open[keep]
        else:
            roots = np.array([sigma[int(m)] for m in self.open_n[keep]], dtype=complex)
        w = self._open_roots(flat, side if side and side[0] != k else None)[keep]
        ratio = (roots[:, None] - flat[None, :]) / w
        return np.prod(ratio, axis=0).reshape(lam.shape)

    def discriminant_product(self, lam) -> np.ndarray:
        """
        Δ(λ) desde el producto  Δ − 2 = −Π_n (λ_{2n}^+ − λ)(λ_{2n}^− − λ)/π_{2n}².

        Cola: S_{⌊N/2⌋}(λ/2)² por la identidad del seno y el modelo τ̂ para
        los índices pares fuera de la ventana.
        """
        lam = np.asarray(lam, dtype=complex)
        self._check_window(lam)
        flat = lam.reshape(-1)
        even = self.sd.indices[self.sd.indices % 2 == 0]
        idx = even + self.N
        lp, lm = self.sd.lam_plus[idx], self.sd.lam_minus[idx]
        factors = (lp[:, None] - flat[None, :]) * (lm[:, None] - flat[None, :]) / _pi_m(even)[:, None] ** 2
        window = np.prod(factors, axis=0)
        half = sine_tail(flat / 2, self.N // 2)
        tail = self._model_tail(flat, self.N, step=2)
        return (2 - window * half ** 2 * tail ** 2).reshape(lam.shape)

    # =========================================================================
    # CHEQUEOS
    # =========================================================================

    def _anchor_sign(self):
        """Convención: i·√c > 0 en el punto medio de (λ_0^+, λ_1^−)."""
        a = self.sd.lam_plus[self.sd.index_of(0)].real
        b = self.sd.lam_minus[self.sd.index_of(1)].real
        midpoint = np.array([0.5 * (a + b)], dtype=complex)
        value = complex(1j * self.canonical_root(midpoint)[0])
        self.sign_anchor = value
        if value.real < 0:
            logger.warning(f"[Roots] i·√c={value:.4g} < 0 en el ancla; se invierte el signo global")
            self.sign = -1.0
            self.sign_anchor = -value

    def sine_product_check(self, n: int, lam) -> np.ndarray:
        """
        |sin λ/(λ − nπ) · ((1/π_n)·Π_{m≠n} w_m/π_m)^{-1} − 1|, λ ∈ U_n.
        """
        lam = np.asarray(lam, dtype=complex)
        self._check_window(lam)
        flat = lam.reshape(-1)
        m = self.sd.indices
        w = (self.sd.tau[:, None] - flat[None, :])
        if self.open_n.size:
            w[self.open_n + self.N] = self._open_roots(flat, None)
        keep = m != n
        partial = np.prod(w[keep] / _pi_m(m[keep])[:, None], axis=0)
        partial = partial * sine_tail(flat, self.N) * self._model_tail(flat, self.N)
        pi_n = 1.0 if n == 0 else n * np.pi
        sinc = (-1) ** abs(n) * np.sinc((flat - n * np.pi) / np.pi)
        return np.abs(sinc / (partial / pi_n) - 1).reshape(lam.shape)

    def reciprocal_root_integral(self, m: int, n: int, tol: float = None) -> complex:
        """(1/2πi)∮_{Γ_m} dλ/w_n(λ); vale −δ_mn."""
        contour: Contour = self.sd.contour(m)
        value, _ = contour.integrate(lambda z: 1.0 / self.standard_root(n, z), tol=tol)
        return value / (2j * np.pi)
