"""
Configuración de producción (corridas batch)
============================================

Características:
- Paralelismo por defecto = número de CPUs (ZSB_THREADS lo limita)
- Logging compacto a nivel INFO

Usar con: DJANGO_ENVIRONMENT=production
"""

import os

from .base import *

DEBUG = False

# ==============================================================================
# PARALELISMO
# ==============================================================================

ZSB_THREADS = config('ZSB_THREADS', default=os.cpu_count() or 1, cast=int)

# ==============================================================================
# LOGGING
# ==============================================================================

LOGGING['handlers']['console']['formatter'] = 'simple'
LOGGING['loggers']['apps']['level'] = config('ZSB_LOG_LEVEL', default='INFO')
