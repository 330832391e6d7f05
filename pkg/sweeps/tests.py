import io
import json
import os
import random
import tempfile
from pathlib import Path
from concurrent.futures import ProcessPoolExecutor
from unittest import mock, skipUnless

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from arithmetic.codec import probability_product
from weights.exceptions import ParameterError
from weights.functions import WeightFunctionSpec
from weights.trajectory import CodingVariant

from .models import SweepResult, SweepRun
from .reports import COLUMNS, SCHEMA_VERSION, store_run, write_csv, write_json
from .runner import SweepConfig, corpus_files, run_sweep, sweep_file

EXAMPLE = b"ccabbbcaaa"


def drifting_text(size=1500, seed=3):
    """Mostly 'a' early, mostly 'b' late: recent positions predict better than old ones."""
    rng = random.Random(seed)
    half = size // 2
    early = rng.choices(b"abcd", weights=[8, 1, 1, 1], k=half)
    late = rng.choices(b"abcd", weights=[1, 8, 1, 1], k=size - half)
    return bytes(early + late)


class CorpusMixin:
    def make_corpus(self, files):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        root = Path(tmp.name)
        for name, data in files.items():
            (root / name).parent.mkdir(parents=True, exist_ok=True)
            (root / name).write_bytes(data)
        return root


class SweepConfigTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(ParameterError):
            SweepConfig('poly')
        with self.assertRaises(ParameterError):
            SweepConfig('zipf', ['1'])
        with self.assertRaises(ParameterError):
            SweepConfig('poly', ['1'], engine='huffman', mode='streaming')
        self.assertEqual(SweepConfig('exp2', ['5']).points(10), [('', 'exp2')])

    def test_points(self):
        self.assertEqual(SweepConfig('poly', ['0', ' 1/2 ', '']).points(10), [('0', 'poly:0'), ('1/2', 'poly:1/2')])
        self.assertEqual(SweepConfig('exp', ['1.0004']).points(10), [('1.0004', 'exp:1.0004')])
        self.assertEqual(len(SweepConfig('interp', ['all']).points(7)), 7)


class RunnerTests(CorpusMixin, SimpleTestCase):
    def test_example_rows(self):
        root = self.make_corpus({'example.txt': EXAMPLE})
        rows = sweep_file(root / 'example.txt', SweepConfig('pos'))
        self.assertEqual([(row.method, row.net_bits) for row in rows],
                         [('static', 16), ('backward', 19), ('weighted', 10)])
        self.assertEqual(rows[1].header_bits, 0)
        self.assertEqual(rows[2].net_ratio, 0.125)

    def test_positional_beats_constant_at_ratio_level(self):
        root = self.make_corpus({'example.txt': EXAMPLE, 'drift.txt': drifting_text()})
        rows = run_sweep(root, SweepConfig('poly', ['0', '1'], engine='arith'))
        for name in ('example.txt', 'drift.txt'):
            by_param = {row.param: row for row in rows if row.file == name and row.method == 'weighted'}
            self.assertLessEqual(by_param['1'].net_ratio, by_param['0'].net_ratio)

    def test_interpolated_grid(self):
        text = drifting_text(60)
        root = self.make_corpus({'small.txt': text})
        rows = [row for row in run_sweep(root, SweepConfig('interp', ['all'], engine='arith'))
                if row.method == 'weighted']
        self.assertEqual([row.param for row in rows], [str(j) for j in range(1, 61)])
        bits = [row.net_bits for row in rows]
        for earlier, later in zip(bits, bits[1:]):
            self.assertLessEqual(later, earlier + 1)
        self.assertLessEqual(bits[-1], bits[0])
        products = [probability_product(text, CodingVariant.weighted(WeightFunctionSpec.interpolated(j)))
                    for j in range(1, 61)]
        self.assertEqual(products, sorted(products))

    def test_errors_are_recorded(self):
        root = self.make_corpus({'a/empty.txt': b"", 'b/short.txt': b"abcabc"})
        rows = run_sweep(root, SweepConfig('interp', ['2', '50']), threads=2)
        empty = [row for row in rows if row.file == os.path.join('a', 'empty.txt')]
        self.assertEqual(len(empty), 4)
        self.assertTrue(all(row.error.startswith('EmptyInputError') for row in empty))
        short = {row.param: row for row in rows if row.file == os.path.join('b', 'short.txt')}
        self.assertEqual(short['2'].error, '')
        self.assertTrue(short['50'].error.startswith('InvalidSpecError'))
        self.assertIsNone(short['50'].net_bits)

    def test_parallel_order_and_determinism(self):
        rng = random.Random(11)
        files = {f"f{index}.txt": bytes(rng.choices(b"abcdef", k=200 + index)) for index in range(5)}
        root = self.make_corpus(files)
        config = SweepConfig('exp', ['1.0004', '2'])
        first = run_sweep(root, config, threads=3)
        second = run_sweep(root, config, threads=1)
        self.assertEqual([row.file for row in first][::4], sorted(files))
        self.assertEqual([(row.file, row.param, row.net_bits) for row in first],
                         [(row.file, row.param, row.net_bits) for row in second])

    def test_files_fan_out_to_processes(self):
        root = self.make_corpus({f"f{index}.txt": EXAMPLE * (index + 1) for index in range(3)})
        config = SweepConfig('pos')
        with mock.patch('sweeps.runner.ProcessPoolExecutor', wraps=ProcessPoolExecutor) as pool:
            pooled = run_sweep(root, config, threads=8)
        pool.assert_called_once()
        self.assertEqual(pool.call_args.kwargs['max_workers'], 3)
        with mock.patch('sweeps.runner.ProcessPoolExecutor') as pool:
            inline = run_sweep(root, config, threads=1)
        pool.assert_not_called()
        self.assertEqual([row.as_dict() | {'runtime': 0} for row in pooled],
                         [row.as_dict() | {'runtime': 0} for row in inline])
        self.assertEqual((inline[2].file, inline[2].method, inline[2].net_bits), ('f0.txt', 'weighted', 10))

    def test_corpus_files(self):
        root = self.make_corpus({'z.txt': b"z", 'sub/a.txt': b"a"})
        self.assertEqual(corpus_files(root), [str(root / 'z.txt'), str(root / 'sub' / 'a.txt')])
        self.assertEqual(corpus_files(root / 'z.txt'), [str(root / 'z.txt')])
        with self.assertRaises(ParameterError):
            corpus_files(root / 'missing')


class ReportTests(CorpusMixin, TestCase):
    def setUp(self):
        root = self.make_corpus({'example.txt': EXAMPLE})
        self.config = SweepConfig('poly', ['0', '1'])
        self.root = root
        self.rows = run_sweep(root, self.config)

    def test_csv(self):
        stream = io.StringIO()
        self.assertEqual(write_csv(self.rows, stream), 4)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], ",".join(COLUMNS))
        self.assertIn(",0.125000,", lines[-1])

    def test_json(self):
        stream = io.StringIO()
        write_json(self.rows, stream, self.config)
        document = json.loads(stream.getvalue())
        self.assertEqual(document['schema_version'], SCHEMA_VERSION)
        self.assertEqual(document['config']['grid'], ['0', '1'])
        self.assertEqual(document['rows'][-1]['net_bits'], 10)
        self.assertEqual(document['rows'][2]['net_bits'], 12)

    def test_store(self):
        run = store_run(self.root, self.config, self.rows)
        self.assertEqual(run.status, 'completed')
        self.assertEqual(run.results.count(), 4)
        self.assertEqual(run.results.get(param='1').net_bits, 10)


class SweepCommandTests(CorpusMixin, TestCase):
    def setUp(self):
        self.root = self.make_corpus({'example.txt': EXAMPLE, 'drift.txt': drifting_text(400)})

    def test_report_file_and_storage(self):
        target = self.root.parent / f"{self.root.name}-report.csv"
        self.addCleanup(lambda: target.exists() and target.unlink())
        call_command('sweep', str(self.root), '--family', 'poly', '--grid', '0,1', '8',
                     '--output', str(target), stderr=io.StringIO())
        lines = target.read_text().splitlines()
        self.assertEqual(len(lines), 1 + 2 * 5)
        run = SweepRun.objects.get()
        self.assertEqual(run.grid, ['0', '1', '8'])
        self.assertEqual(SweepResult.objects.filter(run=run).count(), 10)

    def test_stdout_json_without_storage(self):
        out = io.StringIO()
        call_command('sweep', str(self.root), '--family', 'exp2', '--engine', 'arith', '--mode', 'streaming',
                     '--format', 'json', '--output', '-', '--no-store', stdout=out)
        document = json.loads(out.getvalue())
        self.assertEqual(len(document['rows']), 6)
        self.assertFalse(SweepRun.objects.exists())

    def test_default_report_directory(self):
        with tempfile.TemporaryDirectory() as reports, override_settings(WACODE_REPORT_DIR=Path(reports)):
            call_command('sweep', str(self.root), '--family', 'pos', '--no-store', stderr=io.StringIO())
            written = list(Path(reports).glob('sweep-pos-*.csv'))
            self.assertEqual(len(written), 1)

    def test_usage_errors(self):
        with self.assertRaises(CommandError) as caught:
            call_command('sweep', str(self.root), '--family', 'poly', '--output', '-')
        self.assertEqual(caught.exception.returncode, 2)
        with self.assertRaises(CommandError) as caught:
            call_command('sweep', str(self.root / 'missing'), '--family', 'pos', '--output', '-')
        self.assertEqual(caught.exception.returncode, 2)


class SweepApiTests(CorpusMixin, APITestCase):
    def setUp(self):
        root = self.make_corpus({'example.txt': EXAMPLE})
        config = SweepConfig('poly', ['1'])
        self.run_record = store_run(root, config, run_sweep(root, config))

    def test_list(self):
        response = self.client.get(reverse('sweep-list'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(len(response.data), 1)
        self.assertEqual(response.data[0]['result_count'], 3)
        response = self.client.get(reverse('sweep-list'), {'family': 'exp'})
        self.assertEqual(response.data, [])

    def test_detail(self):
        response = self.client.get(reverse('sweep-detail', args=[self.run_record.id]))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([row['method'] for row in response.data['results']], ['static', 'backward', 'weighted'])
        self.assertEqual(response.data['results'][-1]['net_bits'], 10)
        response = self.client.get(reverse('sweep-detail', args=[self.run_record.id + 1]))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)


KJV_PATH = os.getenv('WACODE_KJV_PATH')


@skipUnless(KJV_PATH, "set WACODE_KJV_PATH to a King James Bible text to run the corpus spot checks")
class BibleCorpusTests(SimpleTestCase):
    """Long-running spot checks against published net ratios; tolerance covers unknown preprocessing."""

    def test_polynomial_huffman(self):
        rows = run_sweep(KJV_PATH, SweepConfig('poly', ['0', '1', '8'], strip_punct=True))
        ratios = {row.param: row.net_ratio for row in rows if row.method == 'weighted'}
        for param, expected in (('0', 0.523213), ('1', 0.523057), ('8', 0.522608)):
            self.assertAlmostEqual(ratios[param], expected, delta=0.0015)
        static = next(row for row in rows if row.method == 'static')
        self.assertLess(min(row.combined_ratio for row in rows if row.method == 'weighted'),
                        static.combined_ratio)

    def test_exponential_huffman(self):
        rows = run_sweep(KJV_PATH, SweepConfig('exp', ['1.0004'], strip_punct=True, fast_bits=64))
        (row,) = [row for row in rows if row.method == 'weighted']
        self.assertAlmostEqual(row.net_ratio, 0.516991, delta=0.0015)

    def test_forward_arithmetic(self):
        rows = run_sweep(KJV_PATH, SweepConfig('poly', ['0'], engine='arith', mode='streaming', strip_punct=True))
        (row,) = [row for row in rows if row.method == 'weighted']
        self.assertAlmostEqual(row.net_ratio, 0.518015, delta=0.0015)
