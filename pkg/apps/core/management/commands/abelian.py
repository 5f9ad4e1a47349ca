# =============================================================================
# apps/core/management/commands/abelian.py
# =============================================================================
# Integral abeliana F_n
# Uso:
#   python manage.py abelian eval --potential cos-0.1 --n 1 --lambda 0.3+0.2j 2.0
#   python manage.py abelian eval --potential cos-0.1 --grid -3 3 61
#   python manage.py abelian laurent --potential two-mode-0.1
# =============================================================================

import numpy as np
from django.core.management.base import CommandError

from apps.core.artifacts import write_csv, write_json
from apps.frequencies.services.pipeline import SpectralPipeline
from apps.spectral.serializers import LaurentFitSerializer

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Evalúa F_n (CSV) o ajusta su expansión de Laurent (JSON)'
    title = 'INTEGRAL ABELIANA'

    def add_command_arguments(self, parser):
        parser.add_argument('mode', choices=['eval', 'laurent'])
        parser.add_argument('--n', type=int, default=0, help='Índice del gap de referencia')
        parser.add_argument('--lambda', dest='lambdas', nargs='+', default=[],
                            help='Puntos λ (ej: 0.3+0.2j)')
        parser.add_argument('--grid', nargs=3, type=float, default=None, metavar=('A', 'B', 'COUNT'),
                            help='Malla real equiespaciada (usa la fórmula cerrada de la recta real)')
        parser.add_argument('--side', type=int, choices=[-1, 1], default=None,
                            help='Lado del gap cuando λ está sobre uno abierto')
        parser.add_argument('--jmin', type=int, default=None)
        parser.add_argument('--jmax', type=int, default=None)

    def run(self, config, phi, **options):
        ai = SpectralPipeline(phi, config).ai
        if options['mode'] == 'laurent':
            fit = ai.laurent_fit(jmin=options['jmin'], jmax=options['jmax'])
            self.stdout.write(f'\n📈 j ∈ [{fit.jmin}, {fit.jmax}], residuo {fit.residual:.2e}')
            for k, value in enumerate(fit.hamiltonians.as_array(), 1):
                self.stdout.write(f'   H{k} = {value.real:.12g}')
            self.written(write_json(config.out_dir, 'laurent.json', LaurentFitSerializer(fit).data))
            return

        if options['grid']:
            a, b, count = options['grid']
            lam = np.linspace(a, b, int(count)).astype(complex)
            values = ai.F_realline(lam.real) if options['n'] == 0 else ai.F_batch(options['n'], lam, side=options['side'])
        elif options['lambdas']:
            try:
                lam = np.array([complex(text.replace(' ', '')) for text in options['lambdas']])
            except ValueError as e:
                raise CommandError(f'λ inválido: {e}')
            values = ai.F_batch(options['n'], lam, side=options['side'])
        else:
            raise CommandError('eval requiere --lambda o --grid')

        rows = np.column_stack([lam.real, lam.imag, values.real, values.imag])
        self.stdout.write(f'\n∫ F_{options["n"]} en {lam.size} puntos')
        self.written(write_csv(config.out_dir, 'abelian.csv', ['lambda_re', 'lambda_im', 'F_re', 'F_im'], rows))
