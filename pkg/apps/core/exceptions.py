# apps/core/exceptions.py
"""
Jerarquía de errores del toolkit espectral.

Todas las fallas numéricas se reportan con una subclase de SpectralError,
que lleva un código estable (para scripts y para `validate`) y un dict de
detalles (λ, índice n, historial de residuos, etc.).

Uso:
    from apps.core.exceptions import LocalizationError

    raise LocalizationError(
        f"Disco D_{n} contiene {count} raíces de Δ²-4",
        details={'n': n, 'count': count}
    )
"""


class SpectralError(Exception):
    """Excepción base para errores del pipeline espectral."""

    default_code = 'SPECTRAL_ERROR'

    def __init__(self, message: str, code: str = None, details: dict = None):
        self.message = message
        self.code = code or self.default_code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        return f"[{self.code}] {self.message}"


class IntegrationError(SpectralError):
    """El integrador ODE no pudo avanzar (paso por debajo del mínimo)."""
    default_code = 'INTEGRATION_ERROR'


class DomainError(SpectralError):
    """Argumento fuera del dominio válido (λ dentro de un gap, p < 1, ...)."""
    default_code = 'DOMAIN_ERROR'


class LocalizationError(SpectralError):
    """Conteo de raíces ≠ 2 en un disco, u orden lexicográfico violado."""
    default_code = 'LOCALIZATION_ERROR'


class ConvergenceError(SpectralError):
    """Newton no convergió; details['history'] guarda los residuos."""
    default_code = 'CONVERGENCE_ERROR'


class ConditioningError(SpectralError):
    """Sistema lineal o ajuste mal condicionado."""
    default_code = 'CONDITIONING_ERROR'


class AccuracyError(SpectralError):
    """Cuadratura o cola de producto sin alcanzar la tolerancia."""
    default_code = 'ACCURACY_ERROR'


class PathError(SpectralError):
    """No existe camino admisible (el recorrido cruzaría un gap abierto)."""
    default_code = 'PATH_ERROR'


class GeometryError(SpectralError):
    """Contorno fuera de su disco aislante o tocando un gap."""
    default_code = 'GEOMETRY_ERROR'


class InstabilityError(SpectralError):
    """Crecimiento de norma en la integración temporal."""
    default_code = 'INSTABILITY_ERROR'


class DivergenceError(SpectralError):
    """Se pidieron frecuencias no renormalizadas con H₁ indefinido."""
    default_code = 'DIVERGENCE_ERROR'


class DependencyError(SpectralError):
    """Falta un objeto previo del pipeline (sistema ψ, datos espectrales)."""
    default_code = 'DEPENDENCY_ERROR'


class FitError(SpectralError):
    """Ajuste de decaimiento con muy pocos puntos utilizables."""
    default_code = 'FIT_ERROR'


class ConfigError(SpectralError):
    """Archivo de configuración inválido; details['line'] indica la línea."""
    default_code = 'CONFIG_ERROR'
