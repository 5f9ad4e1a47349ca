"""
Configuración de la app Potentials.
"""
from django.apps import AppConfig


class PotentialsConfig(AppConfig):
    """Potenciales φ = (φ₋, φ₊), normas de Fourier–Lebesgue y Hamiltonianos."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.potentials'
    verbose_name = 'Potenciales'
