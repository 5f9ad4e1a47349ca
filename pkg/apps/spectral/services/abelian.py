# apps/spectral/services/abelian.py
"""
Integral abeliana F_n(λ) = ∫_{λ_n^−}^{λ} Δ̇/√c dμ y F = F_0.

Caminos admisibles (polilíneas que no cruzan gaps abiertos):

    λ_n^− ──(lado s de G_n)──► τ_n ──► Re τ_n + i·s·h ──(horizontal)──► Re λ + i·s·h ──► λ

con s = signo de Im λ (+ para λ real) y h = PATH_HEIGHT. El tramo sobre el
gap se integra en forma cerrada con la sustitución μ = τ_n − (γ_n/2)cos θ,
que absorbe la singularidad 1/√(1 − t²) de los extremos. Los valores en la
recta horizontal se cachean en estaciones de paso 1.

Uso:
    ai = AbelianIntegral(ctx)
    ai.F_n(1, 0.3 + 0.2j)
    ai.F_realline(np.pi / 2)
    ai.laurent_fit()
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import ConditioningError, DomainError, PathError
from apps.potentials.potential import HamiltonianValues

from .contours import gauss_legendre, segment_rule
from .roots import RootContext
from .transfer import ZSSolver

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTES
# =============================================================================

# Altura del corredor horizontal
PATH_HEIGHT = 0.5

# Distancia a un extremo de gap bajo la cual el último tramo se gradúa
GRADING_RADIUS = 0.1

# Nodos Gauss–Legendre en θ para el tramo sobre el gap
GAP_SIDE_ORDER = 48

# Ajuste de Laurent
LAURENT_OFFSET = 6
LAURENT_MIN_J = 16
LAURENT_SPAN = 32
LAURENT_EXTRA_POWERS = 4
LAURENT_MAX_COND = 1e12


@dataclass
class LaurentFit:
    """Coeficientes extraídos de F(ν) + iν = iΣ H_k/(2ν)^k."""
    hamiltonians: HamiltonianValues
    residual: float
    condition: float
    jmin: int
    jmax: int
    quartic_check: complex
    quartic_target: complex
    extra: Dict[int, complex] = field(default_factory=dict)


@dataclass
class GapSideProfile:
    """Perfil de F_n sobre los lados de G_n."""
    n: int
    gamma_abs: float
    sup_ratio: float
    refined_ratio: float
    antisymmetry: float


class AbelianIntegral:
    """
    Evaluador de F_n sobre caminos admisibles para un RootContext.

    Args:
        ctx: contexto de raíces
        solver: ZSSolver para Δ (fórmulas cerradas en la recta real)
        height: altura del corredor horizontal
    """

    def __init__(self, ctx: RootContext, solver: ZSSolver = None, height: float = PATH_HEIGHT):
        self.ctx = ctx
        self.sd = ctx.sd
        self.solver = solver or ZSSolver(self.sd.phi)
        self.height = float(height)
        self._stations: Dict[Tuple[int, int], np.ndarray] = {}
        self._lock = threading.Lock()
        self._check_corridor()

    # =========================================================================
    # GEOMETRÍA
    # =========================================================================

    def _check_corridor(self):
        """Los gaps abiertos deben quedar lejos de las rectas Im λ = ±h."""
        idx = self.ctx.open_n + self.sd.N
        if not idx.size:
            return
        reach = np.maximum(np.abs(self.sd.lam_minus[idx].imag), np.abs(self.sd.lam_plus[idx].imag))
        if np.any(reach >= self.height / 2):
            n = int(self.ctx.open_n[np.argmax(reach)])
            raise PathError(
                f"G_{n} llega a |Im λ|={reach.max():.3g}; el corredor a altura {self.height} no es admisible",
                details={'n': n},
            )
        if np.any(self.sd.gamma[idx].real <= 0):
            n = int(self.ctx.open_n[np.argmin(self.sd.gamma[idx].real)])
            raise PathError(f"G_{n} es vertical: no hay lado ± bien definido", details={'n': n})

    def _check_descent(self, lam: complex, s: int):
        """El tramo vertical final no puede cruzar un gap abierto."""
        top = complex(lam.real, s * self.height)
        for n in self.ctx.open_n:
            a, b = self.sd.lam_minus[n + self.sd.N], self.sd.lam_plus[n + self.sd.N]
            if _segments_cross(top, lam, a, b):
                raise PathError(f"El tramo final hacia λ={lam:.4g} cruza G_{n}", details={'n': int(n)})

    def _near_endpoint(self, lam: complex) -> bool:
        idx = self.ctx.open_n + self.sd.N
        if not idx.size:
            return False
        ends = np.concatenate([self.sd.lam_minus[idx], self.sd.lam_plus[idx]])
        return bool(np.min(np.abs(ends - lam)) < GRADING_RADIUS)

    # =========================================================================
    # CUADRATURAS
    # =========================================================================

    def _segment(self, a: complex, b: complex, graded: Optional[str] = None) -> complex:
        z, w = segment_rule(a, b, graded=graded)
        if not z.size:
            return 0j
        return complex(np.sum(self.ctx.quotient_w(z) * w))

    def gap_side_value(self, n: int, t, side: int) -> np.ndarray:
        """
        F_n en G_n^± con parámetro t ∈ [−1, 1]:

            F_n = ±∫_0^{θ_t} (λ_n^• − μ(θ))·χ_n(μ(θ)) dθ,
            μ(θ) = τ_n − (γ_n/2)cos θ,  θ_t = arccos(−t)
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        i = self.sd.index_of(n)
        if self.sd.collapsed[i]:
            return np.zeros(t.shape, dtype=complex)
        tau, gamma, dot = self.sd.tau[i], self.sd.gamma[i], self.sd.lam_dot[i]
        x, w = gauss_legendre(GAP_SIDE_ORDER)
        out = np.empty(t.shape, dtype=complex)
        for j, theta_t in enumerate(np.arccos(-np.clip(t, -1.0, 1.0))):
            theta = 0.5 * theta_t * (x + 1)
            mu = tau - 0.5 * gamma * np.cos(theta)
            values = (dot - mu) * self.ctx.chi_factor(n, mu)
            out[j] = side * 0.5 * theta_t * np.sum(values * w)
        return out

    def _stations_for(self, n: int, s: int) -> np.ndarray:
        """F_n en las estaciones x = j ∈ [−X, X] (enteros) sobre Im λ = s·h."""
        key = (n, s)
        with self._lock:
            if key in self._stations:
                return self._stations[key]

        tau = complex(self.sd.tau_of(n))
        height = s * self.height
        base = 0j if not self.sd.is_open(n) else complex(self.gap_side_value(n, 0.0, s)[0])
        corner = complex(tau.real, height)
        X = self._station_reach()
        j0 = int(np.clip(np.round(tau.real), -X, X))

        values = np.empty(2 * X + 1, dtype=complex)
        values[X + j0] = base + self._segment(tau, corner) + self._segment(corner, complex(j0, height))
        for j in range(j0 + 1, X + 1):
            values[X + j] = values[X + j - 1] + self._segment(complex(j - 1, height), complex(j, height))
        for j in range(j0 - 1, -X - 1, -1):
            values[X + j] = values[X + j + 1] + self._segment(complex(j + 1, height), complex(j, height))
        values.setflags(write=False)

        with self._lock:
            self._stations[key] = values
        logger.debug(f"[Abelian] Estaciones de F_{n} (lado {s:+d}) calculadas: {values.size}")
        return values

    def _station_reach(self) -> int:
        return int(np.floor((self.sd.N + 0.5) * np.pi))

    # =========================================================================
    # F_n
    # =========================================================================

    def F_n(self, n: int, lam: complex, side: int = None) -> complex:
        """
        F_n(λ) por cuadratura sobre el camino admisible.

        Args:
            side: ±1 cuando λ está sobre un gap abierto (lado G^±); en los
                extremos λ^± se puede omitir
        """
        lam = complex(lam)
        hit = self._gap_containing(lam)
        if hit is not None:
            m, t = hit
            if side is None:
                if abs(t) < 1.0:
                    raise DomainError(
                        f"λ={lam:.6g} está en G_{m}: se requiere etiqueta de lado",
                        details={'n': m, 'lambda': lam},
                    )
                side = 1
            if m == n:
                return complex(self.gap_side_value(n, t, side)[0])
            # A lo largo de G_m la integral avanza igual que F_m
            tau = complex(self.sd.tau_of(m))
            shift = self.gap_side_value(m, t, side)[0] - self.gap_side_value(m, 0.0, side)[0]
            return self._from_corridor(n, tau, side) + complex(shift)

        s = 1 if lam.imag >= 0 else -1
        return self._from_corridor(n, lam, s)

    def _from_corridor(self, n: int, lam: complex, s: int) -> complex:
        """Estación más cercana → vertical de descenso hasta λ (lado s)."""
        self._check_descent(lam, s)
        values = self._stations_for(n, s)
        X = values.size // 2
        j = int(np.clip(np.round(lam.real), -X, X))
        station = complex(j, s * self.height)
        top = complex(lam.real, s * self.height)
        graded = 'end' if self._near_endpoint(lam) else None
        return complex(values[X + j] + self._segment(station, top) + self._segment(top, lam, graded=graded))

    def F(self, lam: complex, side: int = None) -> complex:
        return self.F_n(0, lam, side=side)

    def F_batch(self, n: int, lams, side: int = None) -> np.ndarray:
        lams = np.asarray(lams, dtype=complex)
        return np.array([self.F_n(n, z, side=side) for z in lams.ravel()]).reshape(lams.shape)

    def _gap_containing(self, lam: complex) -> Optional[Tuple[int, float]]:
        """(n, t) si λ está sobre el gap abierto G_n (extremos incluidos)."""
        for n, tau, gamma in zip(self.ctx.open_n, self.ctx.tau_open, self.ctx.gamma_open):
            t = (lam - tau) / (gamma / 2)
            if abs(t.imag) < 1e-12 and abs(t.real) <= 1.0 + 1e-12:
                return int(n), float(np.clip(t.real, -1.0, 1.0))
        return None

    # =========================================================================
    # FÓRMULAS CERRADAS
    # =========================================================================

    def _interval_index(self, lam: float) -> int:
        """n con λ_n^+ < λ < λ_{n+1}^− (recta real, tipo real)."""
        sd = self.sd
        if abs(lam) > (sd.N + 0.5) * np.pi:
            # Fuera de la ventana todos los gaps se tratan como colapsados
            return int(np.floor(lam / np.pi))
        minus, plus = sd.lam_minus.real, sd.lam_plus.real
        inside = ~sd.collapsed & (minus < lam) & (lam < plus)
        if np.any(inside):
            n = int(sd.indices[np.argmax(inside)])
            raise DomainError(f"λ={lam:.6g} está dentro de G_{n}", details={'n': n})
        return int(np.searchsorted(plus, lam, side='right')) - 1 - sd.N

    def F_realline(self, lam) -> np.ndarray:
        """
        F(λ) = −i(n + ½)π − i·arcsin((−1)^{n+1}Δ(λ)/2),  λ_n^+ < λ < λ_{n+1}^−.

        Solo para potenciales de tipo real y λ real.
        """
        if not self.sd.real_type:
            raise DomainError("F_realline requiere un potencial de tipo real")
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        indices = np.array([self._interval_index(x) for x in lam.ravel()])
        delta = self.solver.discriminant_real(lam.ravel())
        arg = ((-1.0) ** (indices + 1)) * delta.real / 2
        if np.any(np.abs(arg) > 1 + 1e-8):
            bad = int(np.argmax(np.abs(arg)))
            raise DomainError(
                f"|Δ(λ)|>2 en λ={lam.ravel()[bad]:.6g}: el punto está en un gap",
                details={'lambda': float(lam.ravel()[bad])},
            )
        values = -1j * (indices + 0.5) * np.pi - 1j * np.arcsin(np.clip(arg, -1.0, 1.0))
        return values.reshape(lam.shape)

    def F_log(self, n: int, lam) -> np.ndarray:
        """F_n(λ) = Log((−1)ⁿ(Δ + √c)/2) cerca de G_n (rama principal)."""
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        delta, _ = self.solver.discriminant_batch(lam.ravel())
        root = self.ctx.canonical_root(lam.ravel())
        return np.log((-1) ** abs(n) * (delta + root) / 2).reshape(lam.shape)

    # =========================================================================
    # F SOBRE CONTORNOS
    # =========================================================================

    def closed_integral(self, k: int, tol: float = None) -> complex:
        """∮_{Γ_k} Δ̇/√c dλ (se anula)."""
        value, _ = self.sd.contour(k).integrate(self.ctx.quotient_w, tol=tol)
        return value

    def F_on_contour(self, k: int, count: int = None, tol: float = None) -> Tuple[np.ndarray, np.ndarray, complex]:
        """
        F_k en los nodos trapezoidales de Γ_k por antiderivada espectral (FFT).

        Returns:
            (λ_j, F_k(λ_j), residuo de cierre ∮_{Γ_k} Δ̇/√c)
        """
        tol = tol if tol is not None else settings.ZSB_QUAD_TOL
        contour = self.sd.contour(k)
        count = count or settings.ZSB_CONTOUR_NODES
        count = max(4, 4 * int(np.ceil(count / 4)))
        max_nodes = settings.ZSB_CONTOUR_MAX_NODES

        while True:
            theta = 2 * np.pi * np.arange(count) / count
            e = np.exp(1j * theta)
            lam = contour.center + contour.radius * e
            g = self.ctx.quotient_w(lam) * (1j * contour.radius * e)
            coeffs = np.fft.fft(g) / count
            tail = np.max(np.abs(coeffs[count // 2 - count // 8:count // 2 + count // 8]))
            if tail <= tol * (1 + np.max(np.abs(coeffs))) or count >= max_nodes:
                if count >= max_nodes and tail > tol:
                    logger.warning(f"[Abelian] F_on_contour Γ_{k}: cola espectral {tail:.2e} con {count} nodos")
                break
            count *= 2

        modes = np.fft.fftfreq(count, d=1.0 / count)
        residual = complex(coeffs[0] * 2 * np.pi)
        integ = np.zeros(count, dtype=complex)
        nonzero = modes != 0
        integ[nonzero] = coeffs[nonzero] / (1j * modes[nonzero])
        periodic = np.fft.ifft(integ * count)

        # Anclaje en el punto superior θ = π/2
        top = count // 4
        anchor = self.F_n(k, complex(lam[top]))
        values = anchor + (periodic - periodic[top]) + coeffs[0] * (theta - theta[top])
        return lam, values, residual

    # =========================================================================
    # LAURENT Y PERFILES
    # =========================================================================

    def laurent_fit(self, jmin: int = None, jmax: int = None,
                    extra: int = LAURENT_EXTRA_POWERS) -> LaurentFit:
        """
        Extrae H₁..H₄ de F(ν_j) + iν_j = iΣ_k H_k (2ν_j)^{−k}, ν_j = ±(j + ½)π.

        Con x = 1/(2ν) y u = x², la parte impar y(ν) − y(−ν) = 2xΣ H_{2i+1}u^i
        y la par y(ν) + y(−ν) = 2x²Σ H_{2i+2}u^i se ajustan por separado.
        Cada paridad lleva 2 + extra potencias; las que sobran de H₄ quedan
        en LaurentFit.extra.
        """
        largest = int(np.max(np.abs(self.ctx.open_n))) if self.ctx.open_n.size else 0
        jmin = jmin if jmin is not None else max(largest + LAURENT_OFFSET, LAURENT_MIN_J)
        jmax = jmax if jmax is not None else jmin + LAURENT_SPAN
        per_parity = 2 + int(extra)
        if jmax - jmin + 1 < per_parity:
            raise ConditioningError(
                f"Rango [{jmin}, {jmax}] con menos puntos que incógnitas ({per_parity})",
                details={'suggested_jmax': jmin + 2 * per_parity},
            )

        j = np.arange(jmin, jmax + 1)
        nu = (j + 0.5) * np.pi
        values = self.F_realline(np.concatenate([nu, -nu]))
        y_pos = (values[:j.size] + 1j * nu) / 1j
        y_neg = (values[j.size:] - 1j * nu) / 1j
        x = 1.0 / (2 * nu)
        u = x ** 2
        odd = (y_pos - y_neg) / (2 * x)
        even = (y_pos + y_neg) / (2 * u)

        A = np.stack([u ** i for i in range(per_parity)], axis=1)
        scale = np.linalg.norm(A, axis=0)
        As = A / scale
        cond = float(np.linalg.cond(As))
        if cond > LAURENT_MAX_COND:
            raise ConditioningError(
                f"Ajuste de Laurent mal condicionado (cond={cond:.2e})",
                details={'cond': cond, 'suggested_jmax': 2 * jmax},
            )
        fits = np.linalg.lstsq(As, np.stack([odd, even], axis=1), rcond=None)[0] / scale[:, None]
        h = np.empty(2 * per_parity, dtype=complex)
        h[0::2] = fits[:, 0]
        h[1::2] = fits[:, 1]

        residual = float(
            np.linalg.norm(A @ fits - np.stack([odd, even], axis=1))
            / max(1.0, np.linalg.norm(np.stack([odd, even], axis=1)))
        )
        if self.sd.real_type:
            h = h.real.astype(complex)
        hamiltonians = HamiltonianValues(*(complex(v) for v in h[:4]))

        lam = nu[-1]
        F = complex(values[j.size - 1])
        h1, h2, h3, h4 = hamiltonians.as_array()
        quartic = lam * (F ** 4 - lam ** 4 + 2 * h1 * lam ** 2 + h2 * lam + 0.5 * (h3 - 3 * h1 ** 2))
        target = -0.25 * (h4 - 6 * h1 * h2)

        logger.info(
            f"[Abelian] Laurent j∈[{jmin},{jmax}]: H₁={h1.real:.6g} H₂={h2.real:.6g} "
            f"H₃={h3.real:.6g} H₄={h4.real:.6g} (residuo {residual:.2e}, cond {cond:.1e})"
        )
        return LaurentFit(
            hamiltonians=hamiltonians, residual=residual, condition=cond, jmin=jmin, jmax=jmax,
            quartic_check=complex(quartic), quartic_target=complex(target),
            extra={k + 1: complex(h[k]) for k in range(4, h.size)},
        )

    def gap_side_profile(self, n: int, samples: int = 33) -> GapSideProfile:
        """sup|F_n|/|γ_n| y sup|F_n − i·w_n|/|γ_n| sobre G_n^±."""
        i = self.sd.index_of(n)
        gamma_abs = float(abs(self.sd.gamma[i]))
        if self.sd.collapsed[i]:
            return GapSideProfile(n=n, gamma_abs=gamma_abs, sup_ratio=0.0, refined_ratio=0.0, antisymmetry=0.0)
        t = np.cos(np.pi * (np.arange(samples) + 0.5) / samples)
        upper = self.gap_side_value(n, t, +1)
        lower = self.gap_side_value(n, t, -1)
        w_upper = self.ctx.standard_root_side(n, t, +1)
        w_lower = self.ctx.standard_root_side(n, t, -1)
        sup = max(np.max(np.abs(upper)), np.max(np.abs(lower)))
        refined = max(np.max(np.abs(upper - 1j * w_upper)), np.max(np.abs(lower - 1j * w_lower)))
        return GapSideProfile(
            n=n, gamma_abs=gamma_abs,
            sup_ratio=float(sup / gamma_abs),
            refined_ratio=float(refined / gamma_abs),
            antisymmetry=float(np.max(np.abs(upper + lower))),
        )


def _segments_cross(p1: complex, p2: complex, q1: complex, q2: complex) -> bool:
    """¿Se cortan los segmentos [p1, p2] y [q1, q2] del plano?"""
    def orient(a, b, c):
        return np.sign((b - a).real * (c - a).imag - (b - a).imag * (c - a).real)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return bool(o1 * o2 < 0 and o3 * o4 < 0)
