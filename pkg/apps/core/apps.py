from django.apps import AppConfig


class CoreConfig(AppConfig):
    """Excepciones, RunConfig, paralelismo, artefactos y management commands."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.core'
    verbose_name = 'Núcleo'
