# =============================================================================
# apps/core/management/commands/validate.py
# =============================================================================
# Corre la suite de aceptación sobre los potenciales de data/potentials
# Uso: python manage.py validate [--criteria 1 2 9]
# Exit status != 0 si algún criterio falla.
# =============================================================================

from django.core.management.base import CommandError

from apps.core.artifacts import write_json
from apps.core.services.acceptance import AcceptanceSuite

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Suite de aceptación (criterios 1–12)'
    title = 'VALIDACIÓN'
    requires_potential = False

    def add_command_arguments(self, parser):
        parser.add_argument('--criteria', type=int, nargs='+', default=None, help='Subconjunto de criterios')
        parser.add_argument('--data-dir', type=str, default=None, help='Carpeta de potenciales')

    def run(self, config, phi, **options):
        suite = AcceptanceSuite(config, data_dir=options['data_dir'])
        try:
            results = suite.run(options['criteria'])
        except ValueError as e:
            raise CommandError(str(e))

        for result in results:
            style = self.style.SUCCESS if result.passed else self.style.ERROR
            self.stdout.write(style(f'   {"✓" if result.passed else "✗"} {result.summary()}'))

        data = {
            str(r.number): {
                'title': r.title,
                'status': r.status.value,
                'checks': {name: {'value': v, 'threshold': l} for name, (v, l) in r.checks.items()},
                'message': r.message,
            }
            for r in results
        }
        self.written(write_json(config.out_dir, 'acceptance.json', data))

        failed = [r.number for r in results if not r.passed]
        if failed:
            raise CommandError(f'Criterios fallidos: {", ".join(map(str, failed))}')
        self.stdout.write(self.style.SUCCESS(f'\n✅ {len(results)} criterios aprobados'))
