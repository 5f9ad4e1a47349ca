"""
Tests para la infraestructura del toolkit: configuración de corridas,
artefactos, errores, map paralelo, suite de aceptación y comandos.
"""
import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .artifacts import dumps, write_csv, write_json
from .exceptions import ConfigError, DomainError, LocalizationError, SpectralError
from .parallel import chunked, ordered_map
from .run_config import RunConfig, load_run_config, parse_config_text
from .services.acceptance import AcceptanceSuite, Status


class RunConfigTestCase(SimpleTestCase):
    """Tests para las tres capas de RunConfig."""

    def test_key_value_text(self):
        """Comentarios y líneas vacías se ignoran; los valores se tipan."""
        values = parse_config_text('# ventana\nN = 12\n\ntol = 1e-8  # fino\npotential = cos-0.1\n')
        self.assertEqual(values, {'N': 12, 'tol': 1e-8, 'potential': 'cos-0.1'})

    def test_json_text(self):
        values = parse_config_text('{\n  "N": 8,\n  "threads": 2\n}')
        self.assertEqual(values, {'N': 8, 'threads': 2})

    def test_unknown_key_reports_line(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config_text('N = 8\nventana = 3\n')
        self.assertEqual(ctx.exception.details['line'], 2)

    def test_invalid_value_reports_line(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config_text('N = 8\n\nM = 2.5\n')
        self.assertEqual(ctx.exception.details['line'], 3)

    def test_missing_equals(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config_text('N 8')
        self.assertEqual(ctx.exception.details['line'], 1)

    def test_broken_json_reports_line(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config_text('{\n  "N": 8,\n  "tol": \n}')
        self.assertIn('line', ctx.exception.details)

    def test_layers_last_wins(self):
        """settings < archivo < flags; None en los flags no pisa."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'run.cfg'
            path.write_text('N = 10\ntol = 1e-7\n', encoding='utf-8')
            config = load_run_config(str(path), overrides={'N': 6, 'tol': None})
        self.assertEqual(config.N, 6)
        self.assertEqual(config.tol, 1e-7)
        self.assertGreaterEqual(config.M, config.N)

    def test_validation(self):
        base = RunConfig.from_settings()
        with self.assertRaises(ConfigError):
            base.with_overrides(N=8, M=4).validate()
        with self.assertRaises(ConfigError):
            base.with_overrides(grid_size=100).validate()
        with self.assertRaises(ConfigError):
            load_run_config('/no/existe.cfg')

    def test_window_override_widens_truncation(self):
        """Al subir N, M pasa a ser al menos 4N."""
        config = RunConfig.from_settings().with_overrides(N=64)
        self.assertGreaterEqual(config.M, 256)


class ArtifactsTestCase(SimpleTestCase):

    def test_json_is_deterministic(self):
        """Mismo contenido, mismos bytes, sin importar el orden de inserción."""
        self.assertEqual(dumps({'b': 1, 'a': [1.5, 2]}), dumps({'a': [1.5, 2], 'b': 1}))
        self.assertTrue(dumps({}).endswith('\n'))

    def test_written_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_json(Path(tmp) / 'sub', 'data.json', {'x': 1})
            self.assertEqual(json.loads(path.read_text(encoding='utf-8')), {'x': 1})
            csv = write_csv(tmp, 'table.csv', ['n', 'value'], np.array([[1, 0.1], [2, 1 / 3]]))
            lines = csv.read_text(encoding='utf-8').splitlines()
        self.assertEqual(lines[0], 'n,value')
        self.assertEqual(float(lines[2].split(',')[1]), 1 / 3)

    def test_csv_column_mismatch(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ValueError):
                write_csv(tmp, 'bad.csv', ['a'], np.zeros((2, 2)))


class ExceptionsTestCase(SimpleTestCase):

    def test_code_and_details(self):
        error = LocalizationError('Disco U_3 con 4 raíces', details={'n': 3})
        self.assertIsInstance(error, SpectralError)
        self.assertEqual(error.code, 'LOCALIZATION_ERROR')
        self.assertEqual(str(error), '[LOCALIZATION_ERROR] Disco U_3 con 4 raíces')
        self.assertEqual(DomainError('x', code='CUSTOM').code, 'CUSTOM')


class ParallelTestCase(SimpleTestCase):

    def test_order_is_preserved(self):
        """La salida sigue el orden de entrada con cualquier número de threads."""
        items = list(range(40))
        serial = ordered_map(lambda x: x * x, items, threads=1)
        threaded = ordered_map(lambda x: x * x, items, threads=4)
        self.assertEqual(serial, threaded)
        self.assertEqual(serial[:3], [0, 1, 4])

    def test_chunked(self):
        parts = chunked(np.arange(10), 3)
        self.assertEqual(len(parts), 3)
        self.assertEqual(np.concatenate(parts).tolist(), list(range(10)))
        self.assertEqual(len(chunked(np.arange(2), 5)), 2)


class AcceptanceSuiteTestCase(SimpleTestCase):
    """Tests para la suite sobre los criterios baratos."""

    def setUp(self):
        self.config = RunConfig.from_settings().with_overrides(N=8, M=32, grid_size=64)

    def test_constant_and_flow_criteria(self):
        results = AcceptanceSuite(self.config).run([2, 9])
        self.assertEqual([r.number for r in results], [2, 9])
        for result in results:
            self.assertTrue(result.passed, result.summary())

    def test_unknown_criterion(self):
        with self.assertRaises(ValueError):
            AcceptanceSuite(self.config).run([13])

    def test_spectral_error_marks_criterion(self):
        """Un potencial ausente marca ERROR sin abortar la suite."""
        with tempfile.TemporaryDirectory() as tmp:
            result = AcceptanceSuite(self.config, data_dir=tmp).run_one(2)
        self.assertEqual(result.status, Status.ERROR)
        self.assertIn('CONFIG_ERROR', result.message)
        self.assertIn('ERROR', result.summary())


class CommandsTestCase(SimpleTestCase):
    """Tests de los comandos de manage.py."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def _call(self, *args):
        stdout = StringIO()
        call_command(*args, '--out', self.out, stdout=stdout)
        return stdout.getvalue()

    def test_spectrum_command(self):
        output = self._call('spectrum', '--potential', 'constant-0.3', '--N', '4')
        self.assertIn('ESPECTRO PERIÓDICO', output)
        data = json.loads((Path(self.out) / 'spectrum.json').read_text(encoding='utf-8'))
        self.assertEqual(data['n'], list(range(-4, 5)))
        self.assertEqual(data['open_gaps'], [0])
        self.assertAlmostEqual(data['gamma'][4][0], 0.6, places=7)

    def test_zs_command(self):
        self._call('zs', 'eval', '--potential', 'zero', '--N', '2', '--lambda', '0.5', '1.0+0.2j')
        rows = np.loadtxt(Path(self.out) / 'zs.csv', delimiter=',', skiprows=1)
        np.testing.assert_allclose(rows[:, 2] + 1j * rows[:, 3], 2 * np.cos([0.5, 1.0 + 0.2j]), atol=1e-10)

    def test_abelian_command_at_zero(self):
        self._call('abelian', 'eval', '--potential', 'zero', '--N', '4', '--n', '1', '--lambda', '0.5+0.1j')
        rows = np.loadtxt(Path(self.out) / 'abelian.csv', delimiter=',', skiprows=1, ndmin=2)
        lam = rows[0, 0] + 1j * rows[0, 1]
        self.assertAlmostEqual(abs(rows[0, 2] + 1j * rows[0, 3] + 1j * (lam - np.pi)), 0.0, places=9)

    def test_evolve_requires_real_potential(self):
        with self.assertRaises(CommandError) as ctx:
            self._call('evolve', '--potential', 'complex-pair', '--T', '0.001')
        self.assertIn('DOMAIN_ERROR', str(ctx.exception))

    def test_evolve_writes_trajectory(self):
        self._call('evolve', '--potential', 'cos-0.1', '--T', '0.002', '--samples', '3', '--dt', '1e-4')
        rows = np.loadtxt(Path(self.out) / 'trajectory.csv', delimiter=',', skiprows=1)
        self.assertEqual(rows.shape, (3, 4))
        self.assertAlmostEqual(rows[0, 2], 0.005, places=12)

    def test_illposed_demo_command(self):
        self._call('illposed_demo', '--kmax', '32', '--freq-kmax', '0')
        data = json.loads((Path(self.out) / 'illposed_demo.json').read_text(encoding='utf-8'))
        self.assertEqual([row['k'] for row in data['rows']], [8, 16, 32])
        self.assertTrue(data['h1_increasing'])
        self.assertIsNone(data['omega_tail']['1'], 'Sin ω★ calculada no hay diferencia de cola')

    def test_missing_potential(self):
        with self.assertRaises(CommandError) as ctx:
            self._call('spectrum')
        self.assertIn('CONFIG_ERROR', str(ctx.exception))

    def test_validate_unknown_criterion(self):
        with self.assertRaises(CommandError):
            self._call('validate', '--criteria', '42')
