"""
Django settings - Base configuration
=====================================

mKdV Spectral Toolkit
Compatible con Django 5.2+

El proyecto no sirve páginas web: Django se usa como contenedor de
aplicaciones (registro de apps, management commands, logging y test runner).
Todos los parámetros numéricos se leen con python-decouple, de modo que
pueden venir del entorno o de un archivo .env.
"""

from pathlib import Path
from decouple import config


# =============================================================================
# PATHS
# =============================================================================

BASE_DIR = Path(__file__).resolve().parent.parent.parent

# =============================================================================
# SECURITY
# =============================================================================

# No hay sesiones ni formularios; la clave solo satisface el arranque de Django.
SECRET_KEY = config('SECRET_KEY', default='zsb-local-only-key')
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# =============================================================================
# APPLICATIONS
# =============================================================================

INSTALLED_APPS = [
    # Third party
    'rest_framework',

    # Local apps
    'apps.core',
    'apps.potentials',
    'apps.spectral',
    'apps.sequences',
    'apps.frequencies',
    'apps.evolution',
]

# Sin base de datos: los tests usan SimpleTestCase.
DATABASES = {}

# =============================================================================
# INTERNATIONALIZATION
# =============================================================================

LANGUAGE_CODE = 'es-cl'
TIME_ZONE = 'America/Santiago'
USE_I18N = False
USE_TZ = True

# =============================================================================
# SPECTRAL TOOLKIT (ZSB_*)
# =============================================================================
#
# Valores por defecto de RunConfig. Orden de precedencia en los comandos:
# 1. Estos settings (entorno / .env)
# 2. Archivo --config (key=value o JSON)
# 3. Flags explícitos de la línea de comandos
# =============================================================================

# Paralelismo (ThreadPoolExecutor en apps.core.parallel)
ZSB_THREADS = config('ZSB_THREADS', default=1, cast=int)

# Ventana espectral [-N, N] y tolerancias
ZSB_DEFAULT_N = config('ZSB_DEFAULT_N', default=32, cast=int)
ZSB_DEFAULT_TOL = config('ZSB_DEFAULT_TOL', default=1e-6, cast=float)
ZSB_QUAD_TOL = config('ZSB_QUAD_TOL', default=1e-10, cast=float)
ZSB_NEWTON_TOL = config('ZSB_NEWTON_TOL', default=1e-10, cast=float)

# Integrador ODE de la matriz de transferencia (scipy DOP853)
ZSB_ODE_RTOL = config('ZSB_ODE_RTOL', default=1e-12, cast=float)
ZSB_ODE_ATOL = config('ZSB_ODE_ATOL', default=1e-14, cast=float)
# La ventana N = 520 de la tabla de mal planteamiento llega a |λ| ≈ 1635
ZSB_LAMBDA_CEILING = config('ZSB_LAMBDA_CEILING', default=2000.0, cast=float)

# Cuadratura trapezoidal en contornos (se duplica hasta converger)
ZSB_CONTOUR_NODES = config('ZSB_CONTOUR_NODES', default=64, cast=int)
ZSB_CONTOUR_MAX_NODES = config('ZSB_CONTOUR_MAX_NODES', default=4096, cast=int)

# Evolución pseudoespectral
ZSB_GRID_SIZE = config('ZSB_GRID_SIZE', default=1024, cast=int)
ZSB_DT = config('ZSB_DT', default=1e-4, cast=float)

# Archivos
ZSB_OUTPUT_DIR = config('ZSB_OUTPUT_DIR', default=str(BASE_DIR / 'output'))
ZSB_DATA_DIR = config('ZSB_DATA_DIR', default=str(BASE_DIR / 'data' / 'potentials'))

# =============================================================================
# LOGGING
# =============================================================================

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '[{levelname}] {asctime} {name}: {message}',
            'style': '{',
        },
        'simple': {
            'format': '[{levelname}] {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose' if DEBUG else 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'apps': {
            'handlers': ['console'],
            'level': 'DEBUG' if DEBUG else 'INFO',
            'propagate': False,
        },
    },
}

# =============================================================================
# OTHER
# =============================================================================

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
