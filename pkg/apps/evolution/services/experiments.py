# apps/evolution/services/experiments.py
"""
Experimentos sobre los flujos.

- shift_equivalence_check: S#(t)u₀ contra S(t)u₀ trasladada, x ↦ x − 6‖u₀‖²t
- isospectrality_check:    deriva de λ_n^± e I_n a lo largo de mKdV
- illposedness_demo:       H₁(v_k) diverge mientras ω★_n(v_k) converge

Uso:
    shift_equivalence_check(u0, t=0.02).residual
    isospectrality_check(u0, T=0.05, config=config).eigen_drift
    illposedness_demo(p=4, alpha=0.3, kmax=512).rows
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from apps.core.exceptions import DomainError
from apps.core.parallel import ordered_map
from apps.core.run_config import RunConfig
from apps.frequencies.services.pipeline import SpectralPipeline
from apps.potentials.potential import Potential, fl_norm, power_law_potential

from .integrator import GridState, evolve_trajectory, shift_grid

logger = logging.getLogger(__name__)

# Modos de Fourier por debajo de este umbral relativo se descartan al re-espectralizar
GRID_CUTOFF = 1e-12

# ω★_n se considera de Cauchy si |Δω★| < OMEGA_TAIL_TOL para k ≥ OMEGA_TAIL_FROM
OMEGA_TAIL_FROM = 128
OMEGA_TAIL_TOL = 1e-4


# =============================================================================
# EQUIVALENCIA POR TRASLACIÓN
# =============================================================================

@dataclass
class ShiftCheck:
    t: float
    shift: float
    residual: float


def shift_equivalence_check(u0: GridState, t: float, dt: float = None) -> ShiftCheck:
    """‖S#(t)u₀ − S(t)u₀(· − 6‖u₀‖²t)‖_{L²} en la malla."""
    plain = evolve_trajectory(u0, t, dt=dt, samples=2)[-1]
    sharp = evolve_trajectory(u0, t, dt=dt, samples=2, renormalized=True)[-1]
    shift = 6 * u0.l2 * t
    moved = shift_grid(plain.u, shift)
    residual = float(np.sqrt(np.mean((sharp.u - moved) ** 2)))
    logger.info(f"[Experiments] Traslación {shift:.6g}: residuo {residual:.2e}")
    return ShiftCheck(t=t, shift=shift, residual=residual)


# =============================================================================
# ISOESPECTRALIDAD
# =============================================================================

@dataclass
class IsospectralityReport:
    times: np.ndarray
    eigen_drift: float
    action_drift: float
    per_time: List[Dict[str, float]] = field(default_factory=list)


def _snapshot(u: GridState, config: RunConfig) -> Dict[str, np.ndarray]:
    phi = Potential.from_grid(u.u, cutoff=GRID_CUTOFF, name=f't={u.t:.4g}')
    pipeline = SpectralPipeline(phi, config)
    sd = pipeline.sd
    actions = np.array([pipeline.engine.action(int(n)).value.real for n in sd.indices])
    return {'lam_minus': sd.lam_minus, 'lam_plus': sd.lam_plus, 'I': actions}


def isospectrality_check(u0: GridState, T: float, samples: int = 5, dt: float = None,
                         config: RunConfig = None) -> IsospectralityReport:
    """
    Integra mKdV y re-localiza el espectro en `samples` tiempos de [0, T].
    """
    config = config or RunConfig.from_settings()
    states = evolve_trajectory(u0, T, dt=dt, samples=samples)
    snapshots = ordered_map(lambda s: _snapshot(s, config), states, threads=config.threads)

    base = snapshots[0]
    per_time = []
    for state, snap in zip(states, snapshots):
        eig = max(
            float(np.max(np.abs(snap['lam_minus'] - base['lam_minus']))),
            float(np.max(np.abs(snap['lam_plus'] - base['lam_plus']))),
        )
        act = float(np.max(np.abs(snap['I'] - base['I'])))
        per_time.append({'t': state.t, 'eigen_drift': eig, 'action_drift': act})

    report = IsospectralityReport(
        times=np.array([s.t for s in states]),
        eigen_drift=max(p['eigen_drift'] for p in per_time),
        action_drift=max(p['action_drift'] for p in per_time),
        per_time=per_time,
    )
    logger.info(
        f"[Experiments] Isoespectralidad en {len(states)} tiempos: deriva λ {report.eigen_drift:.2e}, "
        f"deriva I {report.action_drift:.2e}"
    )
    return report


# =============================================================================
# MECANISMO DE MAL PLANTEAMIENTO
# =============================================================================

@dataclass
class IllposednessTable:
    p: float
    alpha: float
    kmax: int
    ns: List[int]
    rows: List[Dict[str, float]]
    h1_increasing: bool
    lp_converging: bool
    omega_cauchy: Dict[int, bool]
    omega_tail: Dict[int, float] = field(default_factory=dict)

    def column(self, key: str) -> np.ndarray:
        return np.array([row.get(key, np.nan) for row in self.rows], dtype=float)


def _decreasing(values: Sequence[float]) -> bool:
    diffs = np.abs(np.diff(np.asarray(values, dtype=float)))
    return bool(diffs.size < 2 or np.all(np.diff(diffs) < 0))


def omega_tail_difference(ks: Sequence[int], values: Sequence[float], start: int = OMEGA_TAIL_FROM) -> float:
    """
    max |ω★(k_j) − ω★(k_{j−1})| sobre las filas con k_j ≥ start.

    NaN si no hay ninguna fila así.
    """
    ks = np.asarray(ks, dtype=float)
    diffs = np.abs(np.diff(np.asarray(values, dtype=float)))
    tail = diffs[ks[1:] >= start]
    return float(np.max(tail)) if tail.size else float('nan')


def illposedness_demo(p: float = 4.0, alpha: float = 0.3, kmax: int = 512,
                      ks: Optional[Sequence[int]] = None, amplitude: float = 0.05,
                      freq_kmax: int = 512, ns: Sequence[int] = (1,),
                      config: RunConfig = None) -> IllposednessTable:
    """
    Dato modelo u con ĉ(n) = amplitude·|n|^{−α} (1 ≤ |n| ≤ kmax) y truncaciones v_k.

    H₁(v_k) = ∫v_k² crece sin cota; ω★_n(v_k) se calcula para k ≤ freq_kmax
    con ventana N = k + 8. ω★_n es de Cauchy cuando las diferencias entre
    filas consecutivas decrecen y, desde k = OMEGA_TAIL_FROM, quedan bajo
    OMEGA_TAIL_TOL.
    """
    if not 1.0 / p < alpha < 0.5:
        raise DomainError(
            f"Se requiere 1/p < α < 1/2 (p={p:g}, α={alpha:g})",
            details={'p': p, 'alpha': alpha},
        )
    config = config or RunConfig.from_settings()
    if ks is None:
        ks = [2 ** j for j in range(3, int(np.log2(kmax)) + 1)]
    ks = sorted(int(k) for k in ks if k <= kmax)
    u = power_law_potential(alpha, kmax, amplitude=amplitude)

    rows = []
    for k in ks:
        v = u.truncate(k)
        row = {'k': k, 'h1': fl_norm(v, 2) ** 2, 'lp_norm': fl_norm(v, p)}
        if k <= freq_kmax:
            window = config.with_overrides(N=max(config.N, k + 8))
            engine = SpectralPipeline(v, window).engine
            for n in ns:
                row[f'omega_star_{n}'] = engine.omega_star(int(n)).real
            logger.info(f"[Experiments] k={k}: H₁={row['h1']:.6g}, ω★={[row[f'omega_star_{n}'] for n in ns]}")
        rows.append(row)

    h1 = [row['h1'] for row in rows]
    lp = [row['lp_norm'] for row in rows]
    omega_cauchy, omega_tail = {}, {}
    for n in ns:
        key = f'omega_star_{n}'
        computed = [row for row in rows if key in row]
        values = [row[key] for row in computed]
        tail = omega_tail_difference([row['k'] for row in computed], values)
        omega_tail[int(n)] = tail
        omega_cauchy[int(n)] = bool(_decreasing(values) and (np.isnan(tail) or tail < OMEGA_TAIL_TOL))
        if not np.isnan(tail):
            logger.info(f"[Experiments] ω★_{n}: diferencia de cola {tail:.2e} (k ≥ {OMEGA_TAIL_FROM})")

    return IllposednessTable(
        p=p, alpha=alpha, kmax=kmax, ns=[int(n) for n in ns], rows=rows,
        h1_increasing=bool(np.all(np.diff(h1) > 0)),
        lp_converging=_decreasing(lp),
        omega_cauchy=omega_cauchy,
        omega_tail=omega_tail,
    )
