import io
import json
import random
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from headers.header import Engine, Mode
from weights.exceptions import ParameterError
from weights.trajectory import Variant

from .service import CompressOptions, compress_bytes, decompress_bytes, strip_punctuation

EXAMPLE = b"ccabbbcaaa"


class ServiceTests(SimpleTestCase):
    def test_example_stats(self):
        _container, stats = compress_bytes(EXAMPLE, variant=Variant.WEIGHTED, g='pos')
        self.assertEqual(stats['net_bits'], 10)
        self.assertEqual(stats['g'], 'pos')
        self.assertEqual(stats['net_ratio'], 0.125)
        _container, stats = compress_bytes(EXAMPLE, variant=Variant.BACKWARD)
        self.assertEqual((stats['net_bits'], stats['header_bits']), (19, 0))
        _container, stats = compress_bytes(EXAMPLE, variant=Variant.FORWARD)
        self.assertEqual(stats['net_bits'], 12)

    def test_round_trips(self):
        rng = random.Random(7)
        data = bytes(rng.choices(range(40), k=3000))
        for options in (
            CompressOptions(),
            CompressOptions(variant=Variant.STATIC),
            CompressOptions(variant=Variant.BACKWARD, g='exp:1.0004'),
            CompressOptions(engine=Engine.ARITHMETIC, g='poly:8'),
            CompressOptions(engine=Engine.ARITHMETIC, mode=Mode.STREAMING, g='exp2'),
            CompressOptions(engine=Engine.ARITHMETIC, mode=Mode.STREAMING, g='poly:1/2', fast_bits=64),
            CompressOptions(variant=Variant.FORWARD, fast_bits=80),
        ):
            container, stats = compress_bytes(data, options)
            self.assertEqual(stats['n'], 3000)
            self.assertEqual(decompress_bytes(container), data)

    def test_invalid_combinations(self):
        for kwargs in (
            {'engine': 'lzw'},
            {'engine': Engine.HUFFMAN, 'mode': Mode.STREAMING},
            {'variant': Variant.FORWARD, 'g': 'pos'},
            {'fast_bits': 32},
        ):
            with self.assertRaises(ParameterError):
                CompressOptions(**kwargs)

    def test_strip_punctuation(self):
        self.assertEqual(strip_punctuation(b"Hello,  world!\n\tBye."), b"Hello world Bye")
        self.assertEqual(strip_punctuation(b"1:1 In the beginning"), b"11 In the beginning")


class CommandTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.example = self.dir / 'example.txt'
        self.example.write_bytes(EXAMPLE)

    def compress(self, *args, source=None):
        out = io.StringIO()
        call_command('compress', str(source or self.example), str(self.dir / 'out.wac'), *args, stdout=out)
        return json.loads(out.getvalue())

    def assertExit(self, code, *args, **kwargs):
        with self.assertRaises(CommandError) as caught:
            call_command(*args, stdout=io.StringIO(), **kwargs)
        self.assertEqual(caught.exception.returncode, code)
        return caught.exception

    def test_compress_reports_stats(self):
        self.assertEqual(self.compress('--variant', 'weighted', '--g', 'pos')['net_bits'], 10)
        stats = self.compress('--variant', 'backward')
        self.assertEqual(stats['net_bits'], 19)
        self.assertEqual(stats['header_bits'], 0)
        stats = self.compress('--engine', 'arith', '--mode', 'streaming')
        self.assertEqual(stats['engine'], 'arith')
        self.assertEqual(stats['mode'], 'streaming')

    def test_round_trip(self):
        for args in (('--variant', 'forward'), ('--variant', 'backward'), ('--engine', 'arith', '--g', 'exp2')):
            self.compress(*args)
            call_command('decompress', str(self.dir / 'out.wac'), str(self.dir / 'back.txt'))
            self.assertEqual((self.dir / 'back.txt').read_bytes(), EXAMPLE)

    def test_empty_input(self):
        empty = self.dir / 'empty.txt'
        empty.write_bytes(b"")
        error = self.assertExit(2, 'compress', str(empty), str(self.dir / 'out.wac'))
        self.assertEqual(str(error), "empty input")

    def test_usage_errors(self):
        out = str(self.dir / 'out.wac')
        self.assertExit(2, 'compress', str(self.example), out, '--mode', 'streaming')
        self.assertExit(2, 'compress', str(self.example), out, '--variant', 'static', '--g', 'exp2')
        self.assertExit(2, 'compress', str(self.example), out, '--g', 'interp:50')
        self.assertExit(2, 'compress', str(self.example), out, '--g', 'poly:-1')
        self.assertExit(2, 'compress', str(self.dir / 'missing.txt'), out)

    def test_corrupt_containers(self):
        self.compress()
        data = (self.dir / 'out.wac').read_bytes()
        broken = self.dir / 'broken.wac'
        broken.write_bytes(data[:-1])
        self.assertExit(3, 'decompress', str(broken), str(self.dir / 'back.txt'))
        broken.write_bytes(b"nope" + data[4:])
        self.assertExit(3, 'decompress', str(broken), str(self.dir / 'back.txt'))

    def test_interpolation_point_beyond_text_is_corrupt(self):
        self.compress('--g', 'interp:3')
        data = (self.dir / 'out.wac').read_bytes()
        self.assertEqual(data[10], 3)
        broken = self.dir / 'broken.wac'
        broken.write_bytes(data[:10] + bytes([11]) + data[11:])
        error = self.assertExit(3, 'decompress', str(broken), str(self.dir / 'back.txt'))
        self.assertIn("exceeds text length 10", str(error))

    def test_inspect(self):
        out = io.StringIO()
        call_command('inspect', str(self.example), '--g', 'pos', stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(len(lines), 11)
        self.assertTrue(lines[1].startswith("1,99,c,97=14 98=18 99=23,23/55"))

        target = self.dir / 'trace.csv'
        call_command('inspect', str(self.example), '--variant', 'forward', '--output', str(target))
        self.assertIn("97=4 98=3 99=3", target.read_text().splitlines()[1])


class StatsApiTests(APITestCase):
    def test_stats(self):
        response = self.client.post(reverse('archive-stats'), {'text': EXAMPLE.decode()}, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['net_bits'], 10)
        self.assertEqual(response.data['variant'], 'weighted')

    def test_empty_text(self):
        response = self.client.post(reverse('archive-stats'), {'text': ''}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data, {'error': 'empty input'})

    def test_bad_parameters(self):
        response = self.client.post(
            reverse('archive-stats'), {'text': 'abc', 'variant': 'forward', 'g': 'pos'}, format='json',
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('error', response.data)
        response = self.client.post(reverse('archive-stats'), {'text': 'abc', 'engine': 'lzw'}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
