"""
Settings para desarrollo local.
"""
from .base import *

DEBUG = True

# Logs detallados de las apps numéricas (iteraciones de Newton, duplicación de nodos)
LOGGING['handlers']['console']['formatter'] = 'verbose'
LOGGING['loggers']['apps']['level'] = config('ZSB_LOG_LEVEL', default='DEBUG')
