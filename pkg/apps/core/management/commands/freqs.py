# =============================================================================
# apps/core/management/commands/freqs.py
# =============================================================================
# Frecuencias ω★_n, ω#_n (y ω_n en E_r) con su cota de truncación
# Uso: python manage.py freqs --potential cos-0.1 --nmax 8 --out output/
# =============================================================================

from apps.core.artifacts import write_json
from apps.frequencies.serializers import FrequencySpectrumSerializer
from apps.frequencies.services.pipeline import SpectralPipeline

from ..base import SpectralCommand


class Command(SpectralCommand):
    help = 'Frecuencias de mKdV y mKdV# desde los momentos Ω_nk^(2) (JSON)'
    title = 'FRECUENCIAS'

    def add_command_arguments(self, parser):
        parser.add_argument('--nmax', type=int, default=None, help='|n| máximo (default: N)')

    def run(self, config, phi, **options):
        fs = SpectralPipeline(phi, config).engine.spectrum(nmax=options['nmax'])
        self.stdout.write(f'\n🎵 |n| ≤ {fs.n.max()}, gaps abiertos {fs.open_k.tolist()}, H₁={fs.h1.real:.10g}')
        for n, sharp, err in zip(fs.n, fs.omega_sharp, fs.trunc_err):
            self.stdout.write(f'   ω#_{int(n):+d} = {sharp.real:.12g}  (± {err:.1e})')
        self.written(write_json(config.out_dir, 'freqs.json', FrequencySpectrumSerializer(fs).data))
