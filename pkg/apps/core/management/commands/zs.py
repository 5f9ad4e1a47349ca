# =============================================================================
# apps/core/management/commands/zs.py
# =============================================================================
# Discriminante Δ(λ) y Δ̇(λ) por integración de la ODE de Zakharov–Shabat
# Uso: python manage.py zs eval --potential constant-0.3 --lambda 0.1 1+0.5j
# =============================================================================

import numpy as np
from django.core.management.base import CommandError

from apps.core.artifacts import write_csv
from apps.spectral.services.transfer import ZSSolver

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Evalúa Δ y Δ̇ en una lista de λ (CSV)'
    title = 'DISCRIMINANTE'

    def add_command_arguments(self, parser):
        parser.add_argument('mode', choices=['eval'])
        parser.add_argument('--lambda', dest='lambdas', nargs='+', required=True, help='Puntos λ')

    def run(self, config, phi, **options):
        try:
            lam = np.array([complex(text.replace(' ', '')) for text in options['lambdas']])
        except ValueError as e:
            raise CommandError(f'λ inválido: {e}')
        delta, ddelta = ZSSolver(phi, threads=config.threads).discriminant_batch(lam)
        for z, d in zip(lam, delta):
            self.stdout.write(f'   Δ({z:.6g}) = {d:.12g}')
        rows = np.column_stack([lam.real, lam.imag, delta.real, delta.imag, ddelta.real, ddelta.imag])
        columns = ['lambda_re', 'lambda_im', 'delta_re', 'delta_im', 'ddelta_re', 'ddelta_im']
        self.written(write_csv(config.out_dir, 'zs.csv', columns, rows))
