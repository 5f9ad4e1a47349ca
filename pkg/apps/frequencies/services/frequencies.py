# apps/frequencies/services/frequencies.py
"""
Acciones, momentos y frecuencias.

    I_n        = (1/π)∮_{Γ_n} λ·Δ̇/√c dλ        (alternativa: −(1/π)∮_{Γ_n} F_n dλ)
    Ω_nk^(m)   = ∮_{Γ_k} F_k^m · ψ_n/√c dλ
    ω★_n       = −12 Σ_k k·Ω_nk^(2)
    ω#_n       = (2nπ)³ + ω★_n
    ω_n        = (2nπ)³ + 12nπH₁ + ω★_n       (solo E_r)

Los gaps colapsados aportan exactamente 0 a las acciones y a los momentos
con m ≥ 1.

Uso:
    engine = FrequencyEngine(ctx, ai)
    fs = engine.spectrum()
    fs.omega_sharp_of(1), fs.I_of(0)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import AccuracyError, DependencyError, DivergenceError
from apps.core.parallel import ordered_map
from apps.potentials.potential import hamiltonians
from apps.spectral.services.abelian import AbelianIntegral
from apps.spectral.services.roots import RootContext

from .psi_system import PsiSolver, PsiSystem

logger = logging.getLogger(__name__)


@dataclass
class ActionValue:
    """I_n por las dos fórmulas de contorno."""
    n: int
    value: complex
    alternative: complex

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.alternative)


@dataclass
class FrequencySpectrum:
    """Acciones y frecuencias sobre |n| ≤ nmax."""
    n: np.ndarray
    I: np.ndarray
    I_alt: np.ndarray
    omega_star: np.ndarray
    omega_sharp: np.ndarray
    omega: Optional[np.ndarray]
    trunc_err: np.ndarray
    h1: complex
    h2: complex
    open_k: np.ndarray
    Omega2: np.ndarray
    psi_residual: np.ndarray
    meta: Dict = field(default_factory=dict)

    def _at(self, n: int) -> int:
        hit = np.nonzero(self.n == n)[0]
        if not hit.size:
            raise IndexError(f"n={n} fuera del rango calculado")
        return int(hit[0])

    def I_of(self, n: int) -> complex:
        return complex(self.I[self._at(n)])

    def omega_star_of(self, n: int) -> complex:
        return complex(self.omega_star[self._at(n)])

    def omega_sharp_of(self, n: int) -> complex:
        return complex(self.omega_sharp[self._at(n)])

    def omega_of(self, n: int) -> complex:
        if self.omega is None:
            raise DivergenceError(
                "ω_n sin renormalizar solo existe para potenciales E_r con H₁ finito; use ω#_n",
                details={'n': int(n)},
            )
        return complex(self.omega[self._at(n)])


class FrequencyEngine:
    """
    Orquestador de acciones, ψ_n y momentos para un potencial localizado.

    Args:
        ctx: RootContext
        ai: AbelianIntegral sobre el mismo contexto
        tol: tolerancia espectral (define los gaps colapsados)
        threads: hilos para los ψ_n independientes
    """

    def __init__(self, ctx: RootContext, ai: AbelianIntegral, tol: float = None,
                 quad_tol: float = None, threads: int = None):
        if ai.ctx is not ctx:
            raise DependencyError("AbelianIntegral y RootContext deben compartir SpectralData")
        self.ctx = ctx
        self.ai = ai
        self.sd = ctx.sd
        self.tol = tol if tol is not None else self.sd.tol
        self.quad_tol = quad_tol if quad_tol is not None else settings.ZSB_QUAD_TOL
        self.threads = threads
        self._psi_solver = PsiSolver(ctx, quad_tol=self.quad_tol)
        self._F_cache: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray]] = {}

    # =========================================================================
    # ACCIONES
    # =========================================================================

    def action(self, n: int) -> ActionValue:
        if not self.sd.is_open(n):
            return ActionValue(n=n, value=0j, alternative=0j)
        contour = self.sd.contour(n)
        value, _ = contour.integrate(lambda z: z * self.ctx.quotient_w(z), tol=self.quad_tol)
        lam, F, _ = self.ai.F_on_contour(n, tol=self.quad_tol)
        count = lam.size
        dlam = 1j * (lam - contour.center) * (2 * np.pi / count)
        alternative = -np.sum(F * dlam) / np.pi
        result = ActionValue(n=n, value=complex(value / np.pi), alternative=complex(alternative))
        if self.sd.real_type:
            result = ActionValue(n=n, value=complex(result.value.real), alternative=complex(result.alternative.real))
        logger.debug(f"[Freq] I_{n}={result.value.real:.6g} (discrepancia {result.discrepancy:.1e})")
        return result

    # =========================================================================
    # MOMENTOS
    # =========================================================================

    def solve_psi(self, n: int) -> PsiSystem:
        return self._psi_solver.solve(n)

    def _F_nodes(self, k: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
        key = (k, count)
        if key not in self._F_cache:
            lam, F, _ = self.ai.F_on_contour(k, count=count, tol=np.inf)
            self._F_cache[key] = (lam, F)
        return self._F_cache[key]

    def moment(self, psi: PsiSystem, k: int, m: int) -> complex:
        """Ω_nk^(m) con n = psi.n."""
        if psi is None:
            raise DependencyError("Se requiere el sistema ψ_n resuelto")
        if m >= 1 and not self.sd.is_open(k):
            return 0j
        contour = self.sd.contour(k)
        if m == 0:
            value, _ = contour.integrate(psi.evaluate, tol=self.quad_tol)
            return value

        count = settings.ZSB_CONTOUR_NODES
        previous = None
        while count <= settings.ZSB_CONTOUR_MAX_NODES:
            lam, F = self._F_nodes(k, count)
            dlam = 1j * (lam - contour.center) * (2 * np.pi / count)
            value = complex(np.sum(F ** m * psi.evaluate(lam) * dlam))
            if previous is not None and abs(value - previous) <= self.quad_tol * (1 + abs(value)):
                return value
            previous = value
            count *= 2
        raise AccuracyError(
            f"Ω_{psi.n},{k}^({m}) sin converger con {settings.ZSB_CONTOUR_MAX_NODES} nodos",
            details={'n': psi.n, 'k': int(k), 'm': int(m)},
        )

    # =========================================================================
    # ESPECTRO DE FRECUENCIAS
    # =========================================================================

    def _row(self, n: int):
        psi = self.solve_psi(n)
        row = np.array([self.moment(psi, int(k), 2) for k in self.ctx.open_n], dtype=complex)
        return psi, row

    def omega_star(self, n: int) -> complex:
        """ω★_n = −12 Σ_k k·Ω_nk^(2) para un solo n."""
        _, row = self._row(n)
        value = complex(-12 * np.sum(self.ctx.open_n * row))
        return complex(value.real) if self.sd.real_type else value

    def trunc_err(self, n: int) -> float:
        """Cota de cola por los gaps colapsados (|γ_k| < g = 10·tol)."""
        g = 10 * self.tol
        collapsed = self.sd.indices[self.sd.collapsed]
        value = 12 * np.sum(np.abs(collapsed) * g ** 3 / (1 + np.abs(n - collapsed)))
        if not self.sd.is_open(n):
            value += 3 * np.pi * abs(n) * g ** 2
        return float(value)

    def spectrum(self, nmax: int = None) -> FrequencySpectrum:
        nmax = self.sd.N if nmax is None else min(int(nmax), self.sd.N)
        ns = np.arange(-nmax, nmax + 1)
        hv = hamiltonians(self.sd.phi)

        actions = [self.action(int(n)) for n in ns]
        rows = ordered_map(lambda n: self._row(int(n)), list(ns), threads=self.threads)

        open_k = self.ctx.open_n.copy()
        Omega2 = np.array([row for _, row in rows], dtype=complex).reshape(ns.size, open_k.size)
        omega_star = -12 * Omega2 @ open_k.astype(complex) if open_k.size else np.zeros(ns.size, dtype=complex)
        if self.sd.real_type:
            omega_star = omega_star.real.astype(complex)
        cubic = (2 * ns * np.pi) ** 3
        omega_sharp = cubic + omega_star
        omega = None
        if self.sd.phi.is_er():
            omega = cubic + 12 * ns * np.pi * hv.h1 + omega_star

        fs = FrequencySpectrum(
            n=ns,
            I=np.array([a.value for a in actions]),
            I_alt=np.array([a.alternative for a in actions]),
            omega_star=omega_star,
            omega_sharp=omega_sharp,
            omega=omega,
            trunc_err=np.array([self.trunc_err(int(n)) for n in ns]),
            h1=hv.h1,
            h2=hv.h2,
            open_k=open_k,
            Omega2=Omega2,
            psi_residual=np.array([psi.max_residual() for psi, _ in rows]),
            meta={'N': self.sd.N, 'tol': self.tol},
        )
        logger.info(
            f"[Freq] {self.sd.phi!r}: ω# para |n| ≤ {nmax}, {open_k.size} gaps abiertos, "
            f"residuo ψ máx {fs.psi_residual.max(initial=0.0):.1e}"
        )
        return fs


# =============================================================================
# API FUNCIONAL
# =============================================================================

def action(ctx: RootContext, ai: AbelianIntegral, n: int) -> ActionValue:
    return FrequencyEngine(ctx, ai).action(n)


def moment(ctx: RootContext, ai: AbelianIntegral, psi: PsiSystem, n: int, k: int, m: int) -> complex:
    if psi is None or psi.n != n:
        raise DependencyError(f"Falta el sistema ψ_{n} resuelto", details={'n': int(n)})
    return FrequencyEngine(ctx, ai).moment(psi, k, m)


def frequency_spectrum(ctx: RootContext, ai: AbelianIntegral, N: int = None, tol: float = None,
                       threads: int = None) -> FrequencySpectrum:
    return FrequencyEngine(ctx, ai, tol=tol, threads=threads).spectrum(nmax=N)


def freq_asymptotics_report(fs: FrequencySpectrum) -> Dict[str, np.ndarray]:
    """(ω★_n + 12nπ·I_n)/n para n ≠ 0."""
    keep = fs.n != 0
    n = fs.n[keep]
    values = (fs.omega_star[keep] + 12 * n * np.pi * fs.I[keep]) / n
    return {'n': n, 'value': values}


def omega_decay_report(fs: FrequencySpectrum, open_k: List[int] = None) -> Dict[str, np.ndarray]:
    """|ω★_n| para n fuera de los gaps abiertos."""
    open_k = fs.open_k if open_k is None else np.asarray(open_k)
    keep = ~np.isin(fs.n, open_k)
    return {'n': fs.n[keep], 'value': np.abs(fs.omega_star[keep])}
