# apps/spectral/services/spectrum.py
"""
Localización del espectro periódico λ_n^± en discos aislantes.

Flujo de locate_spectrum():
    1. Discos candidatos D_n: centro nπ, radio π/5.
    2. Principio del argumento sobre Δ²−4 en cada disco (todos los discos en
       un solo lote ODE): conteo de raíces y primer momento s₁ = Σλ.
    3. Discos con conteo ≠ 2 crecen (×1.25) hasta un radio máximo.
    4. λ_n^• por Newton sobre Δ̇ sembrado en s₁/2.
    5. Gap por el modelo cuadrático γ² = −8(Δ(λ^•) − 2(−1)ⁿ)/Δ̈(λ^•):
       colapsado si |γ| < 10·tol, si no Newton sobre Δ − 2(−1)ⁿ.
    6. Orden lexicográfico y certificación de discos (constante c).

Uso:
    sd = locate_spectrum(phi, N=32, tol=1e-6)
    sd.gamma_of(0), sd.open_gaps(), sd.contour(1)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from django.conf import settings

from apps.core.exceptions import ConvergenceError, GeometryError, LocalizationError
from apps.potentials.potential import Potential

from .contours import Contour, circle_nodes
from .transfer import ZSSolver

logger = logging.getLogger(__name__)

# =============================================================================
# CONSTANTES
# =============================================================================

DISC_RADIUS = np.pi / 5
DISC_GROWTH = 1.25
DISC_MAX_RADIUS = 0.45 * np.pi

# Paso de diferencias finitas para Δ̈ (a partir de Δ̇ exacta)
FD_STEP = 1e-4

# Radio mínimo de los contornos Γ_n
CONTOUR_MIN_RADIUS = 0.05
CONTOUR_GAP_FACTOR = 0.75

NEWTON_MAX_ITER = 50

# Parte imaginaria tolerada para tipo real (relativa a 1 + |n|π)
REAL_TYPE_IM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralData:
    """
    Datos espectrales en la ventana [−N, N], inmutables.

    Los arreglos se indexan por posición i = n + N.
    """
    phi: Potential
    N: int
    tol: float
    lam_minus: np.ndarray
    lam_plus: np.ndarray
    lam_dot: np.ndarray
    disc_center: np.ndarray
    disc_radius: np.ndarray
    collapsed: np.ndarray
    winding: np.ndarray
    separation_constant: float
    real_type: bool
    meta: Dict = field(default_factory=dict)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @property
    def tau(self) -> np.ndarray:
        return 0.5 * (self.lam_minus + self.lam_plus)

    @property
    def gamma(self) -> np.ndarray:
        return self.lam_plus - self.lam_minus

    def index_of(self, n: int) -> int:
        if abs(n) > self.N:
            raise IndexError(f"n={n} fuera de la ventana [-{self.N}, {self.N}]")
        return int(n) + self.N

    def tau_of(self, n: int) -> complex:
        return complex(self.tau[self.index_of(n)])

    def gamma_of(self, n: int) -> complex:
        return complex(self.gamma[self.index_of(n)])

    def lam_dot_of(self, n: int) -> complex:
        return complex(self.lam_dot[self.index_of(n)])

    def is_open(self, n: int) -> bool:
        return not bool(self.collapsed[self.index_of(n)])

    def open_gaps(self) -> np.ndarray:
        return self.indices[~self.collapsed]

    def contour(self, n: int) -> Contour:
        """
        Γ_n: círculo centrado en τ_n de radio max(0.75|γ_n|, 0.05), dentro de U_n.

        Raises:
            GeometryError: si el círculo no cabe en el disco aislante
        """
        i = self.index_of(n)
        radius = max(CONTOUR_GAP_FACTOR * abs(self.gamma[i]), CONTOUR_MIN_RADIUS)
        center = complex(self.tau[i])
        if abs(center - self.disc_center[i]) + radius >= self.disc_radius[i]:
            raise GeometryError(
                f"Γ_{n} (radio {radius:.4g}) no cabe en U_{n} (radio {self.disc_radius[i]:.4g})",
                details={'n': int(n), 'radius': radius},
            )
        return Contour(center=center, radius=radius)


# =============================================================================
# LOCALIZADOR
# =============================================================================

class SpectrumLocator:
    """
    Localizador de λ_n^±, λ_n^• en la ventana [−N, N].

    Uso:
        locator = SpectrumLocator(phi, N=16, tol=1e-6)
        sd = locator.locate()
    """

    def __init__(self, phi: Potential, N: int, tol: float, solver: ZSSolver = None,
                 newton_tol: float = None, nodes: int = None):
        self.phi = phi
        self.N = int(N)
        self.tol = float(tol)
        self.solver = solver or ZSSolver(phi)
        self.newton_tol = newton_tol if newton_tol is not None else settings.ZSB_NEWTON_TOL
        self.nodes = nodes or settings.ZSB_CONTOUR_NODES
        self.indices = np.arange(-self.N, self.N + 1)

    # =========================================================================
    # EVALUACIONES
    # =========================================================================

    def _delta(self, z: np.ndarray):
        return self.solver.discriminant_batch(z)

    def _second_derivative(self, z: np.ndarray) -> np.ndarray:
        _, dp = self._delta(z + FD_STEP)
        _, dm = self._delta(z - FD_STEP)
        return (dp - dm) / (2 * FD_STEP)

    # =========================================================================
    # PRINCIPIO DEL ARGUMENTO
    # =========================================================================

    def _moments(self, centers: np.ndarray, radii: np.ndarray):
        """
        Para cada disco: (1/2πi)∮ λ^k·f'/f dλ, k = 0, 1, con f = Δ² − 4.

        Duplica nodos (en lote) hasta que el conteo sea casi entero y los
        momentos se estabilicen.
        """
        count = self.nodes
        max_nodes = settings.ZSB_CONTOUR_MAX_NODES

        def partial(start, step, total):
            lam, dlam = circle_nodes(0.0, 1.0, total, start=start, step=step)
            z = centers[:, None] + radii[:, None] * lam[None, :]
            dz = radii[:, None] * dlam[None, :]
            delta, ddelta = self._delta(z)
            g = 2 * delta * ddelta / (delta ** 2 - 4) * dz
            return np.stack([np.sum(g * z ** k, axis=1) for k in range(2)])

        acc = partial(0, 1, count)
        previous = acc * (2 * np.pi / count) / (2j * np.pi)
        while True:
            acc = acc + partial(1, 2, 2 * count)
            count *= 2
            current = acc * (2 * np.pi / count) / (2j * np.pi)
            change = np.max(np.abs(current - previous))
            near_integer = np.max(np.abs(current[0] - np.round(current[0].real)))
            if change < 1e-9 * (1 + np.max(np.abs(current))) and near_integer < 1e-6:
                return current
            if count >= max_nodes:
                logger.warning(
                    f"[Spectrum] Principio del argumento en el tope de {count} nodos "
                    f"(cambio {change:.2e})"
                )
                return current
            previous = current

    def _certify_counts(self):
        centers = np.pi * self.indices.astype(complex)
        radii = np.full(self.indices.size, DISC_RADIUS)
        moments = self._moments(centers, radii)
        counts = np.round(moments[0].real).astype(int)

        pending = np.nonzero(counts != 2)[0]
        while pending.size:
            radii[pending] *= DISC_GROWTH
            if np.any(radii[pending] > DISC_MAX_RADIUS):
                bad = pending[radii[pending] > DISC_MAX_RADIUS][0]
                n = int(self.indices[bad])
                raise LocalizationError(
                    f"Disco U_{n}: Δ²−4 tiene {counts[bad]} raíces (se esperaban 2)",
                    details={'n': n, 'count': int(counts[bad]), 'radius': float(radii[bad] / DISC_GROWTH)},
                )
            logger.warning(
                f"[Spectrum] Creciendo discos n={self.indices[pending].tolist()} "
                f"a radio {radii[pending].max():.4f}"
            )
            sub = self._moments(centers[pending], radii[pending])
            moments[:, pending] = sub
            counts[pending] = np.round(sub[0].real).astype(int)
            pending = pending[counts[pending] != 2]
        return centers, radii, moments, counts

    # =========================================================================
    # NEWTON
    # =========================================================================

    def _noise(self, z: np.ndarray) -> np.ndarray:
        """Piso de ruido de Δ: el error ODE crece con |λ|."""
        return 10 * self.solver.rtol * (1 + np.abs(z))

    def _newton(self, z: np.ndarray, residual_fn, label: str) -> np.ndarray:
        """
        Newton en lote; residual_fn(z, idx) -> (f, f').

        Un punto termina cuando el paso es menor que newton_tol o cuando el
        residuo ya está bajo el piso de ruido de la ODE.
        """
        z = z.astype(complex).copy()
        history: List[float] = []
        active = np.ones(z.size, dtype=bool)
        last_f = np.full(z.size, np.inf)
        for _ in range(NEWTON_MAX_ITER):
            idx = np.nonzero(active)[0]
            if not idx.size:
                return z
            f, df = residual_fn(z[idx], idx)
            last_f[idx] = np.abs(f)
            quiet = np.abs(f) <= self._noise(z[idx])
            step = np.where(quiet, 0.0, f / df)
            z[idx] -= step
            history.append(float(np.max(np.abs(step))))
            done = quiet | (np.abs(step) <= self.newton_tol * (1 + np.abs(z[idx])))
            active[idx[done]] = False
        if np.any(active):
            stuck = np.nonzero(active)[0]
            if np.all(last_f[stuck] <= 100 * self._noise(z[stuck])):
                logger.warning(f"[Spectrum] Newton ({label}) estancado en el piso de ruido; se acepta")
                return z
            raise ConvergenceError(
                f"Newton ({label}) sin converger en {NEWTON_MAX_ITER} iteraciones",
                details={'history': history, 'residual': float(np.max(last_f[stuck]))},
            )
        return z

    def _lam_dot(self, seeds: np.ndarray) -> np.ndarray:
        def residual(z, idx):
            _, dd = self._delta(z)
            return dd, self._second_derivative(z)
        return self._newton(seeds, residual, 'Δ̇')

    def _endpoints(self, seeds: np.ndarray, targets: np.ndarray) -> np.ndarray:
        def residual(z, idx):
            d, dd = self._delta(z)
            return d - targets[idx], dd
        return self._newton(seeds, residual, 'Δ∓2')

    # =========================================================================
    # LOCALIZACIÓN
    # =========================================================================

    def locate(self) -> SpectralData:
        centers, radii, moments, counts = self._certify_counts()
        s1 = moments[1]
        parity = np.where(self.indices % 2 == 0, 2.0, -2.0)

        lam_dot = self._lam_dot(0.5 * s1)
        delta_dot, _ = self._delta(lam_dot)
        ddd = self._second_derivative(lam_dot)
        gamma_sq = -8 * (delta_dot - parity) / ddd
        gamma_est = np.sqrt(gamma_sq.astype(complex))
        # Bajo el piso de ruido γ² no se distingue de 0
        floor = 4 * np.sqrt(self._noise(lam_dot) / np.abs(ddd))
        threshold = np.maximum(10 * self.tol, floor)
        collapsed = np.abs(gamma_est) < threshold

        lam_minus = lam_dot.copy()
        lam_plus = lam_dot.copy()
        open_idx = np.nonzero(~collapsed)[0]
        if open_idx.size:
            seeds = np.concatenate([lam_dot[open_idx] - gamma_est[open_idx] / 2,
                                    lam_dot[open_idx] + gamma_est[open_idx] / 2])
            targets = np.concatenate([parity[open_idx], parity[open_idx]])
            roots = self._endpoints(seeds, targets)
            a, b = roots[:open_idx.size], roots[open_idx.size:]
            swap = _lex_greater(a, b)
            lam_minus[open_idx] = np.where(swap, b, a)
            lam_plus[open_idx] = np.where(swap, a, b)

        real_type = self.phi.is_real_type()
        if real_type:
            lam_minus, lam_plus, lam_dot = self._snap_real(lam_minus, lam_plus, lam_dot)

        self._check_order(lam_minus, lam_plus)
        separation = self._certify_discs(centers, radii, lam_minus, lam_plus, lam_dot)

        sd = SpectralData(
            phi=self.phi, N=self.N, tol=self.tol,
            lam_minus=lam_minus, lam_plus=lam_plus, lam_dot=lam_dot,
            disc_center=centers, disc_radius=radii, collapsed=collapsed,
            winding=counts, separation_constant=separation, real_type=real_type,
            meta={'ode_evaluations': self.solver.evaluations, 'collapse_threshold': threshold},
        )
        for array in (lam_minus, lam_plus, lam_dot, centers, radii, collapsed, counts):
            array.setflags(write=False)
        logger.info(
            f"[Spectrum] {self.phi!r}: ventana N={self.N}, {int((~collapsed).sum())} gaps abiertos, "
            f"c={separation:.3f}, {self.solver.evaluations} evaluaciones ODE"
        )
        return sd

    def _snap_real(self, lam_minus, lam_plus, lam_dot):
        bound = REAL_TYPE_IM_TOL * (1 + np.abs(self.indices) * np.pi)
        worst = max(np.max(np.abs(a.imag) / bound) for a in (lam_minus, lam_plus, lam_dot))
        if worst > 1:
            logger.warning(
                f"[Spectrum] Potencial de tipo real con Im λ hasta {worst:.2g}× la cota; "
                f"se conservan valores complejos"
            )
            return lam_minus, lam_plus, lam_dot
        return (lam_minus.real.astype(complex), lam_plus.real.astype(complex),
                lam_dot.real.astype(complex))

    def _check_order(self, lam_minus, lam_plus):
        chain = np.empty(2 * lam_minus.size, dtype=complex)
        chain[0::2] = lam_minus
        chain[1::2] = lam_plus
        bad = np.nonzero(_lex_greater(chain[:-1], chain[1:]))[0]
        if bad.size:
            n = int(self.indices[bad[0] // 2])
            raise LocalizationError(
                f"Orden lexicográfico violado cerca de n={n}",
                details={'n': n},
            )

    def _certify_discs(self, centers, radii, lam_minus, lam_plus, lam_dot) -> float:
        for values, label in ((lam_minus, 'λ⁻'), (lam_plus, 'λ⁺'), (lam_dot, 'λ•')):
            outside = np.abs(values - centers) >= radii
            if np.any(outside):
                n = int(self.indices[np.argmax(outside)])
                raise LocalizationError(
                    f"{label}_{n} fuera de su disco aislante", details={'n': n}
                )
        # c = max |m−n| / dist(U_n, U_m); los vecinos dominan
        worst = 0.0
        for gap in range(1, min(3, self.indices.size)):
            dist = np.abs(centers[gap:] - centers[:-gap]) - radii[gap:] - radii[:-gap]
            if np.any(dist <= 0):
                n = int(self.indices[np.argmax(dist <= 0)])
                raise LocalizationError(
                    f"Discos U_{n} y U_{n + gap} se intersectan", details={'n': n}
                )
            worst = max(worst, float(np.max(gap / dist)))
        return worst


def _lex_greater(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """a ≻ b en orden lexicográfico (Re, luego Im) con reales redondeados a tol."""
    ra, rb = np.round(a.real / tol), np.round(b.real / tol)
    return (ra > rb) | ((ra == rb) & (a.imag > b.imag))


# =============================================================================
# API FUNCIONAL
# =============================================================================

def locate_spectrum(phi: Potential, N: int, tol: float, solver: Optional[ZSSolver] = None) -> SpectralData:
    return SpectrumLocator(phi, N, tol, solver=solver).locate()


def gap_check(sd: SpectralData, phi: Potential = None) -> Dict[str, np.ndarray]:
    """
    Secuencias rotuladas para ajuste de decaimiento:
        open_n, lam_dot_offset = (λ_n^• − τ_n)/γ_n²  (gaps abiertos)
        n, minus_offset = |λ_n^− − nπ|, plus_offset = |λ_n^+ − nπ|
    """
    open_n = sd.open_gaps()
    idx = open_n + sd.N
    gamma = sd.gamma[idx]
    offset = (sd.lam_dot[idx] - sd.tau[idx]) / gamma ** 2 if idx.size else np.zeros(0, dtype=complex)
    n = sd.indices
    return {
        'open_n': open_n,
        'lam_dot_offset': offset,
        'n': n,
        'minus_offset': np.abs(sd.lam_minus - n * np.pi),
        'plus_offset': np.abs(sd.lam_plus - n * np.pi),
        'gamma_abs': np.abs(sd.gamma),
    }
