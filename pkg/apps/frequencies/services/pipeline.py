# apps/frequencies/services/pipeline.py
"""
Cadena completa para un potencial: espectro → raíces → F → frecuencias.

Cada etapa se construye a demanda y se reutiliza.

Uso:
    pipeline = SpectralPipeline(phi, config)
    pipeline.sd.open_gaps()
    pipeline.engine.spectrum(nmax=8)
"""

import logging
from functools import cached_property

from apps.core.run_config import RunConfig
from apps.potentials.potential import Potential
from apps.spectral.services.abelian import AbelianIntegral
from apps.spectral.services.roots import RootContext
from apps.spectral.services.spectrum import SpectralData, SpectrumLocator
from apps.spectral.services.transfer import ZSSolver

from .frequencies import FrequencyEngine

logger = logging.getLogger(__name__)


class SpectralPipeline:
    """
    Args:
        phi: potencial
        config: RunConfig (N, M, tolerancias, threads)
    """

    def __init__(self, phi: Potential, config: RunConfig = None):
        self.phi = phi
        self.config = config or RunConfig.from_settings()

    @cached_property
    def solver(self) -> ZSSolver:
        return ZSSolver(self.phi, threads=self.config.threads)

    @cached_property
    def sd(self) -> SpectralData:
        locator = SpectrumLocator(
            self.phi, self.config.N, self.config.tol, solver=self.solver,
            newton_tol=self.config.newton_tol,
        )
        return locator.locate()

    @cached_property
    def ctx(self) -> RootContext:
        return RootContext(self.sd, M=self.config.M)

    @cached_property
    def ai(self) -> AbelianIntegral:
        return AbelianIntegral(self.ctx, solver=self.solver)

    @cached_property
    def engine(self) -> FrequencyEngine:
        return FrequencyEngine(
            self.ctx, self.ai, tol=self.config.tol, quad_tol=self.config.quad_tol,
            threads=self.config.threads,
        )
