"""
Configuración de la app Frequencies.
"""
from django.apps import AppConfig


class FrequenciesConfig(AppConfig):
    """Acciones, sistema ψ_n, momentos y frecuencias de mKdV."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.frequencies'
    verbose_name = 'Frecuencias'
