"""
Configuración de la app Evolution.
"""
from django.apps import AppConfig


class EvolutionConfig(AppConfig):
    """Integrador ETDRK4, flujo de Birkhoff y experimentos."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.evolution'
    verbose_name = 'Evolución'
