"""
Settings del toolkit espectral.

DJANGO_ENVIRONMENT=production activa corridas batch (todos los CPUs,
logging compacto); cualquier otro valor usa development.
"""
import os

from .base import *

if os.environ.get('DJANGO_ENVIRONMENT', 'development') == 'production':
    from .production import *
else:
    from .development import *
