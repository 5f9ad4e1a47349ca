# =============================================================================
# apps/core/management/base.py
# =============================================================================
# Base común de los comandos del toolkit.
#
# Flags compartidos: --potential --N --M --tol --out --config --threads
# Todo SpectralError se traduce a CommandError con código y mensaje
# (exit status != 0).
# =============================================================================

from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import ConfigError, SpectralError
from apps.core.run_config import RunConfig, load_run_config
from apps.potentials.potential import Potential
from apps.potentials.serializers import load_potential


class SpectralCommand(BaseCommand):
    """Comando con RunConfig en tres capas y manejo uniforme de errores."""

    title = ''
    requires_potential = True

    def add_arguments(self, parser):
        parser.add_argument('--potential', type=str, default=None,
                            help='Archivo JSON de potencial o nombre en data/potentials')
        parser.add_argument('--N', type=int, default=None, help='Ventana espectral [-N, N]')
        parser.add_argument('--M', type=int, default=None, help='Truncación del producto (M >= N)')
        parser.add_argument('--tol', type=float, default=None, help='Tolerancia espectral')
        parser.add_argument('--out', type=str, default=None, help='Carpeta de salida')
        parser.add_argument('--config', type=str, default=None, help='Archivo key=value o JSON')
        parser.add_argument('--threads', type=int, default=None, help='Hilos (default ZSB_THREADS)')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            config = load_run_config(options['config'], overrides={
                'N': options['N'],
                'M': options['M'],
                'tol': options['tol'],
                'out_dir': options['out'],
                'potential': options['potential'],
                'threads': options['threads'],
            })
            if self.title:
                self.banner(self.title)
            phi = self.resolve_potential(config) if self.requires_potential else None
            # options['config'] (ruta de --config) ya fue consumido arriba y
            # chocaría con el parámetro posicional config de run().
            run_options = {k: v for k, v in options.items() if k != 'config'}
            self.run(config, phi, **run_options)
        except SpectralError as e:
            raise CommandError(f'[{e.code}] {e.message}')

    def run(self, config: RunConfig, phi: Potential, **options):
        raise NotImplementedError

    # =========================================================================
    # HELPERS
    # =========================================================================

    def resolve_potential(self, config: RunConfig) -> Potential:
        if not config.potential:
            raise ConfigError('Se requiere --potential (o "potential" en --config)')
        path = Path(config.potential)
        if not path.exists():
            bundled = Path(settings.ZSB_DATA_DIR) / f'{config.potential}.json'
            if bundled.exists():
                path = bundled
        phi = load_potential(path)
        self.stdout.write(f'📄 Potencial: {phi!r}')
        return phi

    def banner(self, text: str):
        self.stdout.write(self.style.HTTP_INFO('=' * 70))
        self.stdout.write(self.style.HTTP_INFO(f'  {text}'))
        self.stdout.write(self.style.HTTP_INFO('=' * 70))

    def written(self, path):
        self.stdout.write(self.style.SUCCESS(f'   ✓ {path}'))
