# =============================================================================
# apps/core/management/commands/spectrum.py
# =============================================================================
# Localiza λ_n^± en la ventana [-N, N] y escribe spectrum.json
# Uso: python manage.py spectrum --potential cos-0.1 --N 32 --out output/
# =============================================================================

from apps.core.artifacts import write_json
from apps.frequencies.services.pipeline import SpectralPipeline
from apps.spectral.serializers import SpectralDataSerializer

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Espectro periódico del operador de Zakharov–Shabat (JSON)'
    title = 'ESPECTRO PERIÓDICO'

    def run(self, config, phi, **options):
        sd = SpectralPipeline(phi, config).sd
        open_gaps = sd.open_gaps()
        self.stdout.write(f'\n🔎 Ventana N={sd.N}: {open_gaps.size} gaps abiertos, c={sd.separation_constant:.3f}')
        for n in open_gaps:
            self.stdout.write(f'   n={int(n):+d}  γ={abs(sd.gamma_of(int(n))):.6e}')
        self.written(write_json(config.out_dir, 'spectrum.json', SpectralDataSerializer(sd).data))
