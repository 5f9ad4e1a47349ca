"""
Configuración de la app Spectral.
"""
from django.apps import AppConfig


class SpectralConfig(AppConfig):
    """Problema de Zakharov–Shabat"""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.spectral'
    verbose_name = ' espectro, raíces e integral abeliana.:Espectral'
