import io
import math
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from arithmetic.codec import ideal_code_length
from headers.header import Engine
from huffman.codec import huffman_encode
from oracles.strategies import examples, texts
from weights.exceptions import InvalidDistributionError, SupportMismatchError
from weights.tables import WeightTable, probability_of
from weights.trajectory import CodingVariant

from .measures import Distribution, cross_entropy, entropy, kl_divergence, kl_perturbation_curve
from .traces import TRACE_COLUMNS, trace_model, write_trace_csv

EXAMPLE = b"ccabbbcaaa"
A, B, C = ord('a'), ord('b'), ord('c')

# Positional weights of a, b, c before coding each position of EXAMPLE.
TABLE_COLUMNS = [
    (14, 18, 23), (14, 18, 13), (14, 18, 4), (6, 18, 4), (6, 11, 4),
    (6, 5, 4), (6, 0, 4), (6, 0, 0), (3, 0, 0), (1, 0, 0),
]


def weight_maps(size=4):
    return st.lists(st.integers(1, 100), min_size=size, max_size=size).map(lambda ws: dict(enumerate(ws)))


class MeasureTests(SimpleTestCase):
    def test_entropy(self):
        self.assertAlmostEqual(float(entropy({A: Fraction(1, 2), B: Fraction(1, 2)})), 1.0, places=15)
        self.assertEqual(entropy({A: 1}), 0)
        self.assertEqual(entropy({A: 1, B: 0}), 0)
        self.assertAlmostEqual(float(entropy(Distribution.from_weights({A: 4, B: 3, C: 3}))), 1.570951, places=6)

    def test_kl_divergence(self):
        p = {A: Fraction(1, 2), B: Fraction(1, 2)}
        q = {A: Fraction(1, 4), B: Fraction(3, 4)}
        self.assertEqual(kl_divergence(p, p), 0)
        self.assertAlmostEqual(float(kl_divergence(p, q)), 1 - math.log2(3) / 2, places=12)

    def test_invalid_distributions(self):
        with self.assertRaises(InvalidDistributionError):
            Distribution({A: Fraction(1, 2), B: Fraction(1, 3)})
        with self.assertRaises(InvalidDistributionError):
            Distribution({A: Fraction(3, 2), B: Fraction(-1, 2)})
        with self.assertRaises(InvalidDistributionError):
            Distribution({})
        with self.assertRaises(InvalidDistributionError):
            Distribution.from_weights({A: 0})

    def test_support_mismatch(self):
        with self.assertRaises(SupportMismatchError):
            kl_divergence({A: Fraction(1, 2), B: Fraction(1, 2)}, {A: 1})
        with self.assertRaises(SupportMismatchError):
            cross_entropy({A: Fraction(1, 2), B: Fraction(1, 2)}, {A: 1, B: 0})
        self.assertEqual(kl_divergence({A: 1, B: 0}, {A: 1}), 0)

    def test_from_weight_table(self):
        self.assertEqual(
            Distribution.from_weights(WeightTable({A: 14, B: 18, C: 23})),
            Distribution({A: Fraction(14, 55), B: Fraction(18, 55), C: Fraction(23, 55)}),
        )

    def test_perturbation_curve_increases(self):
        p = Distribution({A: Fraction(1, 2), B: Fraction(3, 10), C: Fraction(1, 5)})
        curve = kl_perturbation_curve(p, A, B, [Fraction(x, 100) for x in range(0, 50)])
        self.assertEqual(curve[0][1], 0)
        for (_x, smaller), (_y, larger) in zip(curve, curve[1:]):
            self.assertLess(smaller, larger)

    @given(weight_maps(), weight_maps())
    @examples(100)
    def test_gibbs_and_cross_entropy(self, p_weights, q_weights):
        p, q = Distribution.from_weights(p_weights), Distribution.from_weights(q_weights)
        kl = kl_divergence(p, q)
        if p == q:
            self.assertEqual(kl, 0)
        else:
            self.assertGreater(kl, 0)
        self.assertLess(abs(cross_entropy(p, q) - entropy(p) - kl), 1e-12)

    @given(st.integers(1, 50), st.integers(1, 50), st.integers(0, 50), st.integers(0, 50))
    @examples(100)
    def test_weight_ratio_is_monotone(self, a, b, extra_c, extra_d):
        # q(x) = (a + x b) / (c + x d) with c = a + extra_c and d = b + extra_d.
        tables = [WeightTable({A: a + x * b, B: extra_c + x * extra_d}, keep_zero=True) for x in range(0, 20)]
        values = [probability_of(table, A) for table in tables]
        self.assertEqual(values[1], Fraction(a + b, a + extra_c + b + extra_d))
        steps = [later - earlier for earlier, later in zip(values, values[1:])]
        self.assertTrue(all(step >= 0 for step in steps) or all(step <= 0 for step in steps))


class TraceTests(SimpleTestCase):
    def test_positional_columns(self):
        records = trace_model(EXAMPLE, CodingVariant.positional())
        self.assertEqual(len(records), 10)
        for record, column in zip(records, TABLE_COLUMNS):
            self.assertEqual(tuple(record.weights.get(s, 0) for s in (A, B, C)), column)
        self.assertEqual(sum(record.bits for record in records), 10)
        self.assertEqual(records[0].q, Fraction(23, 55))
        self.assertEqual([record.inferred for record in records].index(True), 7)

    def test_arithmetic_costs(self):
        records = trace_model(EXAMPLE, CodingVariant.positional(), Engine.ARITHMETIC)
        self.assertEqual(records[3].q, Fraction(18, 28))
        self.assertEqual(records[-1].q, 1)
        total = sum(record.bits for record in records)
        self.assertLess(abs(total - ideal_code_length(EXAMPLE, CodingVariant.positional())), 1e-12)

    def test_forward_first_step(self):
        records = trace_model(EXAMPLE, CodingVariant.forward())
        self.assertEqual(records[0].weights, {A: 4, B: 3, C: 3})
        self.assertEqual(sum(record.bits for record in records), 12)

    def test_singleton_text(self):
        (record,) = trace_model(b"x", CodingVariant.forward())
        self.assertEqual(record.q, 1)
        self.assertEqual(record.bits, 0)
        self.assertEqual(record.weights, {ord('x'): 1})

    def test_csv(self):
        stream = io.StringIO()
        self.assertEqual(write_trace_csv(trace_model(EXAMPLE, CodingVariant.positional()), stream), 10)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], ",".join(TRACE_COLUMNS))
        self.assertEqual(lines[1], "1,99,c,97=14 98=18 99=23,23/55,1")
        self.assertEqual(len(lines), 11)

    @given(texts(max_size=120, max_alphabet=8), st.sampled_from([
        CodingVariant.static(), CodingVariant.backward(), CodingVariant.forward(), CodingVariant.positional(),
    ]))
    @examples(60)
    def test_huffman_trace_matches_payload(self, text, variant):
        records = trace_model(text, variant)
        self.assertEqual(len(records), len(text))
        self.assertEqual(sum(record.bits for record in records), len(huffman_encode(text, variant)[1]))
