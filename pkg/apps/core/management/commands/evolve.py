# =============================================================================
# apps/core/management/commands/evolve.py
# =============================================================================
# Integra mKdV (o mKdV#) desde el dato u del potencial E_r
# Uso: python manage.py evolve --potential cos-0.1 --T 0.05 --samples 11 [--renormalized]
# =============================================================================

import numpy as np

from apps.core.artifacts import write_csv
from apps.core.exceptions import DomainError
from apps.evolution.services.integrator import GridState, conserved_quantities, evolve_trajectory

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Trayectoria pseudoespectral con cantidades conservadas (CSV)'
    title = 'EVOLUCIÓN'

    def add_command_arguments(self, parser):
        parser.add_argument('--T', type=float, default=0.05, help='Tiempo final')
        parser.add_argument('--samples', type=int, default=11, help='Tiempos muestreados (incluye 0 y T)')
        parser.add_argument('--dt', type=float, default=None, help='Paso temporal (default ZSB_DT)')
        parser.add_argument('--renormalized', action='store_true', help='Integra mKdV# en vez de mKdV')

    def run(self, config, phi, **options):
        if not phi.is_er():
            raise DomainError('La evolución requiere un potencial E_r (u real)')
        u0 = GridState.from_function(lambda x: phi.evaluate(x)[0].real, size=config.grid_size)
        states = evolve_trajectory(
            u0, options['T'], dt=options['dt'] or config.dt, samples=options['samples'],
            renormalized=options['renormalized'],
        )
        table = [conserved_quantities(s) for s in states]
        columns = ['t', 'mean', 'l2', 'h3']
        rows = np.array([[row[c] for c in columns] for row in table])
        drift = np.max(np.abs(rows[:, 2] - rows[0, 2]))
        self.stdout.write(f'\n⏱  {len(states)} muestras, deriva de ∫u² {drift:.2e}')
        name = 'trajectory_sharp.csv' if options['renormalized'] else 'trajectory.csv'
        self.written(write_csv(config.out_dir, name, columns, rows))
