# =============================================================================
# apps/core/management/commands/illposed_demo.py
# =============================================================================
# H₁(v_k) diverge y ω★_n(v_k) converge para truncaciones del dato modelo
# Uso: python manage.py illposed_demo --p 4 --alpha 0.3 --kmax 512
# =============================================================================

import numpy as np

from apps.core.artifacts import write_json
from apps.evolution.services.experiments import illposedness_demo

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Tabla del mecanismo de mal planteamiento en Fℓ^p (JSON)'
    title = 'MECANISMO DE MAL PLANTEAMIENTO'
    requires_potential = False

    def add_command_arguments(self, parser):
        parser.add_argument('--p', type=float, default=4.0)
        parser.add_argument('--alpha', type=float, default=0.3)
        parser.add_argument('--kmax', type=int, default=512)
        parser.add_argument('--amplitude', type=float, default=0.05)
        parser.add_argument('--freq-kmax', type=int, default=512, help='k máximo con ω★ calculada')
        parser.add_argument('--ns', type=int, nargs='+', default=[1], help='Índices n de ω★_n')

    def run(self, config, phi, **options):
        table = illposedness_demo(
            p=options['p'], alpha=options['alpha'], kmax=options['kmax'],
            amplitude=options['amplitude'], freq_kmax=options['freq_kmax'],
            ns=options['ns'], config=config,
        )
        for row in table.rows:
            extra = '  '.join(f'{k}={v:.10g}' for k, v in row.items() if k.startswith('omega'))
            self.stdout.write(f"   k={row['k']:4d}  H₁={row['h1']:.6f}  ‖·‖_ℓ^p={row['lp_norm']:.6f}  {extra}")
        self.stdout.write(f'\n   H₁ creciente: {table.h1_increasing} | ℓ^p convergente: {table.lp_converging} '
                          f'| ω★ Cauchy: {table.omega_cauchy} (cola {table.omega_tail})')
        data = {
            'p': table.p,
            'alpha': table.alpha,
            'kmax': table.kmax,
            'rows': table.rows,
            'h1_increasing': table.h1_increasing,
            'lp_converging': table.lp_converging,
            'omega_cauchy': {str(n): ok for n, ok in table.omega_cauchy.items()},
            'omega_tail': {str(n): None if np.isnan(value) else value for n, value in table.omega_tail.items()},
        }
        self.written(write_json(config.out_dir, 'illposed_demo.json', data))
