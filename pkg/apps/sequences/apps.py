"""
Configuración de la app Sequences.
"""
from django.apps import AppConfig


class SequencesConfig(AppConfig):
    """Bi-sucesiones, transformada de Hilbert y ajuste de decaimiento."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.sequences'
    verbose_name = 'Sucesiones'
