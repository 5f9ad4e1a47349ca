# apps/spectral/services/transfer.py
"""
Solución fundamental del operador de Zakharov–Shabat.

    L(φ) = diag(i, −i)·d/dx + [[0, φ₋], [φ₊, 0]]

Por columna, L M = λ M equivale a

    m₁' = −iλ m₁ + iφ₋ m₂
    m₂' =  iλ m₂ − iφ₊ m₁

integrado en x ∈ [0, 1] con M(0) = I, junto con la ecuación variacional
para ∂_λM. Con esta normalización Δ(λ, 0) = 2cos λ y el espectro del
potencial cero es exactamente {nπ}.

Uso:
    solver = ZSSolver(phi)
    delta, ddelta = solver.discriminant_batch(np.array([0.5, 1.0 + 0.2j]))

    result = transfer(phi, 0.7)
    result.det                    # ≈ 1 (Wronskiano)

    solver.discriminant_real(np.array([40.5 * np.pi]))   # Δ en la recta real, precisión absoluta
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from django.conf import settings
from scipy.integrate import solve_ivp
from scipy.linalg import eig, eigh

from apps.core.exceptions import DomainError, IntegrationError, SpectralError
from apps.core.parallel import chunked, ordered_map, thread_count
from apps.potentials.potential import Potential

logger = logging.getLogger(__name__)

# λ por bloque de integración: el control de error de DOP853 usa norma RMS,
# así que se agrupan valores de |λ| parecido
BATCH_SIZE = 64

# Paso máximo = STEP_SCALE / (1 + max|λ|)
STEP_SCALE = 4.0

# Tolerancia absoluta de la desviación R en la representación de interacción
INTERACTION_ATOL = 1e-18


@dataclass(frozen=True)
class TransferResult:
    """Entradas de M(1, λ) y de ∂_λM(1, λ)."""
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    dm11: complex
    dm12: complex
    dm21: complex
    dm22: complex

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def delta(self) -> complex:
        return self.m11 + self.m22

    @property
    def ddelta(self) -> complex:
        return self.dm11 + self.dm22


class ZSSolver:
    """
    Evaluador vectorizado de M(1, λ) para un potencial fijo.

    Cada bloque de λ se integra como un solo sistema de 8K componentes
    complejas con scipy.integrate.solve_ivp (DOP853).
    """

    def __init__(self, phi: Potential, rtol: float = None, atol: float = None,
                 ceiling: float = None, threads: int = None):
        self.phi = phi
        self.rtol = rtol if rtol is not None else settings.ZSB_ODE_RTOL
        self.atol = atol if atol is not None else settings.ZSB_ODE_ATOL
        self.ceiling = ceiling if ceiling is not None else settings.ZSB_LAMBDA_CEILING
        self.threads = thread_count(threads)
        self._modes = 2j * np.pi * phi.modes
        self.evaluations = 0

    # =========================================================================
    # INTEGRACIÓN
    # =========================================================================

    def _coefficients(self, x: float) -> Tuple[complex, complex]:
        if self.phi.is_zero():
            return 0j, 0j
        phase = np.exp(self._modes * x)
        return phase @ self.phi.cm, phase @ self.phi.cp

    def _integrate_block(self, lam: np.ndarray) -> np.ndarray:
        """Integra un bloque; retorna arreglo (8, K) con M y ∂_λM en x = 1."""
        size = lam.size
        y0 = np.zeros((8, size), dtype=complex)
        y0[0] = 1.0  # M11
        y0[3] = 1.0  # M22

        def rhs(x, y):
            pm, pp = self._coefficients(x)
            m11, m21, m12, m22, d11, d21, d12, d22 = y.reshape(8, size)
            out = np.empty((8, size), dtype=complex)
            out[0] = -1j * lam * m11 + 1j * pm * m21
            out[1] = 1j * lam * m21 - 1j * pp * m11
            out[2] = -1j * lam * m12 + 1j * pm * m22
            out[3] = 1j * lam * m22 - 1j * pp * m12
            out[4] = -1j * lam * d11 + 1j * pm * d21 - 1j * m11
            out[5] = 1j * lam * d21 - 1j * pp * d11 + 1j * m21
            out[6] = -1j * lam * d12 + 1j * pm * d22 - 1j * m12
            out[7] = 1j * lam * d22 - 1j * pp * d12 + 1j * m22
            return out.ravel()

        max_step = STEP_SCALE / (1.0 + float(np.max(np.abs(lam))))
        sol = solve_ivp(
            rhs, (0.0, 1.0), y0.ravel(), method='DOP853',
            rtol=self.rtol, atol=self.atol, max_step=max_step, t_eval=[1.0],
        )
        if sol.status != 0 or sol.y.shape[1] == 0:
            worst = lam[np.argmax(np.abs(lam))]
            raise IntegrationError(
                f"Integración ZS fallida cerca de λ={worst:.6g}: {sol.message}",
                details={'lambda': complex(worst), 'message': sol.message},
            )
        return sol.y[:, -1].reshape(8, size)

    def _integrate_interaction_block(self, lam: np.ndarray) -> np.ndarray:
        """
        Δ − 2cos λ para λ real.

        M = diag(e^{−iλx}, e^{iλx})·(I + R) con R(0) = 0 y

            R' = B(I + R),  B = [[0, iφ₋e^{2iλx}], [−iφ₊e^{−2iλx}, 0]]

        El control de error de DOP853 actúa sobre R, que es O(|φ|), y no
        sobre M, que es O(1).
        """
        size = lam.size

        def rhs(x, y):
            pm, pp = self._coefficients(x)
            r11, r21, r12, r22 = y.reshape(4, size)
            b12 = 1j * pm * np.exp(2j * lam * x)
            b21 = -1j * pp * np.exp(-2j * lam * x)
            out = np.empty((4, size), dtype=complex)
            out[0] = b12 * r21
            out[1] = b21 * (1 + r11)
            out[2] = b12 * (1 + r22)
            out[3] = b21 * r12
            return out.ravel()

        max_step = STEP_SCALE / (1.0 + float(np.max(np.abs(lam))))
        sol = solve_ivp(
            rhs, (0.0, 1.0), np.zeros(4 * size, dtype=complex), method='DOP853',
            rtol=self.rtol, atol=INTERACTION_ATOL, max_step=max_step, t_eval=[1.0],
        )
        if sol.status != 0 or sol.y.shape[1] == 0:
            worst = lam[np.argmax(np.abs(lam))]
            raise IntegrationError(
                f"Integración ZS (interacción) fallida cerca de λ={worst:.6g}: {sol.message}",
                details={'lambda': complex(worst), 'message': sol.message},
            )
        r11, _, _, r22 = sol.y[:, -1].reshape(4, size)
        return np.exp(-1j * lam) * r11 + np.exp(1j * lam) * r22

    def _blocks(self, lam: np.ndarray) -> List[np.ndarray]:
        """Índices agrupados por |λ| en bloques de a lo más BATCH_SIZE."""
        order = np.argsort(np.abs(lam), kind='stable')
        return list(chunked(order, int(np.ceil(lam.size / BATCH_SIZE))))

    def _check_domain(self, lam: np.ndarray):
        too_big = np.abs(lam) > self.ceiling
        if np.any(too_big):
            worst = lam[too_big][0]
            raise DomainError(
                f"|λ|={abs(worst):.4g} supera el techo ZSB_LAMBDA_CEILING={self.ceiling:g}",
                details={'lambda': complex(worst)},
            )

    def transfer_batch(self, lambdas) -> np.ndarray:
        """
        M(1, λ) y ∂_λM(1, λ) para un arreglo de λ.

        Returns:
            arreglo (8, K): filas M11, M21, M12, M22, D11, D21, D12, D22
        """
        lam = np.atleast_1d(np.asarray(lambdas, dtype=complex)).ravel()
        if lam.size == 0:
            return np.zeros((8, 0), dtype=complex)
        self._check_domain(lam)

        blocks = self._blocks(lam)
        results = ordered_map(lambda idx: self._integrate_block(lam[idx]), blocks, threads=self.threads)

        out = np.empty((8, lam.size), dtype=complex)
        for idx, block in zip(blocks, results):
            out[:, idx] = block
        self.evaluations += lam.size
        return out

    def discriminant_batch(self, lambdas) -> Tuple[np.ndarray, np.ndarray]:
        """(Δ, Δ̇) para un arreglo de λ, en el mismo orden."""
        y = self.transfer_batch(lambdas)
        shape = np.shape(lambdas)
        delta = (y[0] + y[3]).reshape(shape)
        ddelta = (y[4] + y[7]).reshape(shape)
        return delta, ddelta

    def discriminant_real(self, lambdas) -> np.ndarray:
        """
        Δ(λ) para λ real con error absoluto del orden de rtol·|Δ − 2cos λ|.

        Lo usan la fórmula cerrada de F en la recta real y el ajuste de
        Laurent, donde F + iλ es mucho más chico que Δ.
        """
        lam = np.atleast_1d(np.asarray(lambdas, dtype=complex)).ravel()
        if lam.size == 0:
            return np.zeros(0, dtype=complex)
        if np.any(lam.imag != 0):
            raise DomainError("discriminant_real requiere λ reales")
        self._check_domain(lam)
        x = lam.real

        if self.phi.is_zero():
            deviation = np.zeros(x.size, dtype=complex)
        else:
            blocks = self._blocks(lam)
            results = ordered_map(lambda idx: self._integrate_interaction_block(x[idx]), blocks,
                                  threads=self.threads)
            deviation = np.empty(x.size, dtype=complex)
            for idx, block in zip(blocks, results):
                deviation[idx] = block
        self.evaluations += x.size
        return (2 * np.cos(x) + deviation).reshape(np.shape(lambdas))

    def transfer(self, lam: complex) -> TransferResult:
        y = self.transfer_batch([lam])[:, 0]
        return TransferResult(
            m11=complex(y[0]), m12=complex(y[2]), m21=complex(y[1]), m22=complex(y[3]),
            dm11=complex(y[4]), dm12=complex(y[6]), dm21=complex(y[5]), dm22=complex(y[7]),
        )


# =============================================================================
# API FUNCIONAL
# =============================================================================

def transfer(phi: Potential, lam: complex) -> TransferResult:
    """M(1, λ) y ∂_λM(1, λ) para un λ."""
    return ZSSolver(phi).transfer(lam)


def discriminant(phi: Potential, lam: complex) -> Tuple[complex, complex]:
    """(Δ(λ), Δ̇(λ)) con Δ = tr M(1, λ)."""
    delta, ddelta = ZSSolver(phi).discriminant_batch(np.array([lam]))
    return complex(delta[0]), complex(ddelta[0])


def discriminant_batch(phi: Potential, lambdas) -> Tuple[np.ndarray, np.ndarray]:
    return ZSSolver(phi).discriminant_batch(lambdas)


def galerkin_eigenvalues(phi: Potential, basis_half_width: int) -> List[complex]:
    """
    Espectro periódico de L(φ) en [0, 2] por Galerkin en la base e^{iπkx}.

    Oráculo independiente: nunca se usa en el camino de producción.
    Retorna autovalores ordenados lexicográficamente (Re, luego Im) dentro
    de la ventana |Re λ| ≤ K·π/2.
    """
    K = int(basis_half_width)
    if K < 4 * max(phi.nmodes, 1):
        raise DomainError(
            f"basis_half_width={K} debe ser >= 4·nmodes={4 * phi.nmodes}",
            details={'basis_half_width': K, 'nmodes': phi.nmodes},
        )
    k = np.arange(-K, K + 1)
    size = k.size
    H = np.zeros((2 * size, 2 * size), dtype=complex)
    H[np.arange(size), np.arange(size)] = -np.pi * k
    H[size + np.arange(size), size + np.arange(size)] = np.pi * k

    # Acoplamiento: φ desplaza el índice en 2n
    for n, cm, cp in zip(phi.modes, phi.cm, phi.cp):
        rows = np.arange(size)
        cols = rows - 2 * int(n)
        valid = (cols >= 0) & (cols < size)
        H[rows[valid], size + cols[valid]] += cm
        H[size + rows[valid], cols[valid]] += cp

    try:
        if phi.is_real_type():
            values = eigh(H, eigvals_only=True).astype(complex)
        else:
            values = eig(H, right=False)
    except np.linalg.LinAlgError as e:
        raise SpectralError(f"Falla del eigensolver Galerkin: {e}", code='EIGEN_ERROR')

    window = np.abs(values.real) <= K * np.pi / 2
    values = values[window]
    order = np.lexsort((values.imag, np.round(values.real, 9)))
    logger.debug(f"[Galerkin] K={K}: {values.size} autovalores en ventana")
    return [complex(v) for v in values[order]]
