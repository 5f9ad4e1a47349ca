# =============================================================================
# apps/core/management/commands/actions.py
# =============================================================================
# Acciones I_n por las dos fórmulas de contorno
# Uso: python manage.py actions --potential two-mode-0.1 --out output/
# =============================================================================

from apps.core.artifacts import write_json
from apps.frequencies.serializers import ActionSerializer
from apps.frequencies.services.pipeline import SpectralPipeline

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Variables de acción I_n en la ventana (JSON)'
    title = 'ACCIONES'

    def run(self, config, phi, **options):
        pipeline = SpectralPipeline(phi, config)
        actions = [pipeline.engine.action(int(n)) for n in pipeline.sd.indices]
        worst = max((a.discrepancy for a in actions), default=0.0)
        self.stdout.write(f'\n📐 {len(actions)} acciones, discrepancia máxima entre fórmulas {worst:.2e}')
        for a in actions:
            if a.value != 0:
                self.stdout.write(f'   I_{a.n:+d} = {a.value.real:.12g}')
        data = {
            'potential': phi.name,
            'actions': ActionSerializer(actions, many=True).data,
        }
        self.written(write_json(config.out_dir, 'actions.json', data))
