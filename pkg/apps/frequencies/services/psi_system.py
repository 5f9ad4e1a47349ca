# apps/frequencies/services/psi_system.py
"""
Sistema de normalización de ψ_n.

    ψ_n(λ)/√c(λ) = scale · i/w_n(λ) · Π_{k≠n} (σ_k^n − λ)/w_k(λ)

con las condiciones (1/2π)∮_{Γ_k} ψ_n/√c dλ = δ_nk. Solo los gaps abiertos
k ≠ n son incógnitas; en los colapsados σ_k^n = τ_k y el factor vale 1.
Por convención σ_n^n = λ_n^•.

Uso:
    psi = solve_psi(ctx, n=1)
    psi.sigma[0], psi.residuals
    psi.evaluate(lam)          # ψ_n/√c en λ
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import ConditioningError, ConvergenceError, DomainError
from apps.spectral.services.contours import circle_nodes
from apps.spectral.services.roots import RootContext

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTES
# =============================================================================

NEWTON_MAX_ITER = 50
DAMPING_HALVINGS = 20
MAX_CONDITION = 1e12


@dataclass
class PsiSystem:
    """Raíces σ_k^n y escala de ψ_n, con residuos de normalización."""
    ctx: RootContext
    n: int
    sigma: Dict[int, complex]
    scale: complex
    residuals: Dict[int, complex] = field(default_factory=dict)
    normalization: complex = 2 * np.pi
    iterations: int = 0
    history: List[float] = field(default_factory=list)

    @property
    def unknowns(self) -> List[int]:
        return [int(k) for k in self.ctx.open_n if k != self.n]

    def evaluate(self, lam) -> np.ndarray:
        """ψ_n/√c en λ (fuera de los gaps abiertos)."""
        lam = np.asarray(lam, dtype=complex)
        w_n = self.ctx.standard_root(self.n, lam)
        return self.scale * 1j / w_n * self.ctx.zeta_factor(self.n, lam, sigma=self.sigma)

    def max_residual(self) -> float:
        values = [abs(v) for v in self.residuals.values()]
        return max(values) if values else 0.0


class PsiSolver:
    """
    Newton amortiguado sobre las condiciones ∮_{Γ_k} ψ_n/√c = 0 (k abierto ≠ n).

    Jacobiano por la derivada logarítmica ∂_{σ_j}ψ_n = ψ_n/(σ_j − λ):
        J_kj = ∮_{Γ_k} (ψ_n/√c)/(σ_j − λ) dλ
    """

    def __init__(self, ctx: RootContext, tol: float = None, quad_tol: float = None):
        self.ctx = ctx
        self.sd = ctx.sd
        self.tol = tol if tol is not None else settings.ZSB_QUAD_TOL
        self.quad_tol = quad_tol if quad_tol is not None else settings.ZSB_QUAD_TOL
        self._nodes: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}

    # =========================================================================
    # NODOS
    # =========================================================================

    def _contour_nodes(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Nodos trapezoidales de Γ_k con peso dλ·2π/count.

        El conteo se fija duplicando hasta que ∮ i/w·(dλ) sobre Γ_k con el
        producto χ se estabilice.
        """
        if k in self._nodes:
            return self._nodes[k]
        contour = self.sd.contour(k)
        count = settings.ZSB_CONTOUR_NODES
        previous = None
        while True:
            lam, dlam = circle_nodes(contour.center, contour.radius, count)
            weights = dlam * (2 * np.pi / count)
            estimate = np.sum(self.ctx.chi_factor(k, lam) / self.ctx.standard_root(k, lam) * weights)
            if previous is not None and abs(estimate - previous) <= self.quad_tol * (1 + abs(estimate)):
                break
            if count >= settings.ZSB_CONTOUR_MAX_NODES:
                logger.warning(f"[Psi] Γ_{k}: tope de {count} nodos alcanzado")
                break
            previous = estimate
            count *= 2
        self._nodes[k] = (lam, weights)
        return lam, weights

    # =========================================================================
    # SISTEMA
    # =========================================================================

    def _integrand(self, n: int, sigma: Dict[int, complex], lam: np.ndarray) -> np.ndarray:
        w_n = self.ctx.standard_root(n, lam)
        return 1j / w_n * self.ctx.zeta_factor(n, lam, sigma=sigma)

    def _system(self, n: int, unknowns: List[int], sigma: Dict[int, complex], jacobian: bool = True):
        size = len(unknowns)
        G = np.zeros(size, dtype=complex)
        J = np.zeros((size, size), dtype=complex) if jacobian else None
        for row, k in enumerate(unknowns):
            lam, weights = self._contour_nodes(k)
            g = self._integrand(n, sigma, lam) * weights
            G[row] = np.sum(g)
            if jacobian:
                for col, j in enumerate(unknowns):
                    J[row, col] = np.sum(g / (sigma[j] - lam))
        return G, J

    def solve(self, n: int) -> PsiSystem:
        sd = self.sd
        unknowns = [int(k) for k in self.ctx.open_n if k != n]
        sigma: Dict[int, complex] = {int(k): complex(sd.tau_of(k)) for k in sd.indices}
        sigma[int(n)] = complex(sd.lam_dot_of(n))

        history: List[float] = []
        iterations = 0
        if unknowns:
            G, J = self._system(n, unknowns, sigma)
            norm = float(np.max(np.abs(G)))
            history.append(norm)
            while norm > self.tol:
                if iterations >= NEWTON_MAX_ITER:
                    raise ConvergenceError(
                        f"Newton ψ_{n} sin converger en {NEWTON_MAX_ITER} iteraciones",
                        details={'n': int(n), 'history': history},
                    )
                cond = float(np.linalg.cond(J))
                if not np.isfinite(cond) or cond > MAX_CONDITION:
                    raise ConditioningError(
                        f"Jacobiano de ψ_{n} casi singular (cond={cond:.2e})",
                        details={'n': int(n), 'cond': cond},
                    )
                step = np.linalg.solve(J, -G)
                factor = 1.0
                for _ in range(DAMPING_HALVINGS + 1):
                    trial = dict(sigma)
                    for k, ds in zip(unknowns, step):
                        trial[k] = sigma[k] + factor * ds
                    G_trial, _ = self._system(n, unknowns, trial, jacobian=False)
                    if np.max(np.abs(G_trial)) < norm:
                        break
                    factor *= 0.5
                else:
                    raise ConvergenceError(
                        f"Newton ψ_{n}: el amortiguamiento no reduce el residuo",
                        details={'n': int(n), 'history': history},
                    )
                sigma = trial
                iterations += 1
                G, J = self._system(n, unknowns, sigma)
                norm = float(np.max(np.abs(G)))
                history.append(norm)
                logger.debug(f"[Psi] n={n} iteración {iterations}: residuo {norm:.2e} (paso ×{factor:g})")

        lam, weights = self._contour_nodes(n)
        total = complex(np.sum(self._integrand(n, sigma, lam) * weights))
        scale = 2 * np.pi / total
        residuals = {}
        for k in unknowns:
            lam_k, weights_k = self._contour_nodes(k)
            residuals[k] = complex(scale * np.sum(self._integrand(n, sigma, lam_k) * weights_k))

        return PsiSystem(
            ctx=self.ctx, n=int(n), sigma=sigma, scale=scale, residuals=residuals,
            normalization=complex(scale * total), iterations=iterations, history=history,
        )


# =============================================================================
# API FUNCIONAL
# =============================================================================

def solve_psi(ctx: RootContext, n: int, K: Optional[int] = None, tol: float = None) -> PsiSystem:
    """
    Resuelve ψ_n. K acota los índices abiertos admitidos (default: ventana).
    """
    if K is not None and ctx.open_n.size and np.max(np.abs(ctx.open_n)) > K:
        raise DomainError(
            f"Hay gaps abiertos fuera de |k| ≤ K={K}",
            details={'K': K, 'open': ctx.open_n.tolist()},
        )
    return PsiSolver(ctx, tol=tol).solve(n)


def sigma_check(psi: PsiSystem) -> Dict[str, np.ndarray]:
    """(σ_k^n − λ_k^•)/γ_k y (σ_k^n − τ_k)/γ_k² sobre los k abiertos ≠ n."""
    sd = psi.ctx.sd
    ks = np.array(psi.unknowns, dtype=int)
    sigma = np.array([psi.sigma[k] for k in ks], dtype=complex)
    gamma = np.array([sd.gamma_of(k) for k in ks], dtype=complex)
    dots = np.array([sd.lam_dot_of(k) for k in ks], dtype=complex)
    taus = np.array([sd.tau_of(k) for k in ks], dtype=complex)
    return {
        'k': ks,
        'dot_offset': (sigma - dots) / gamma if ks.size else np.zeros(0, dtype=complex),
        'tau_offset': (sigma - taus) / gamma ** 2 if ks.size else np.zeros(0, dtype=complex),
    }
