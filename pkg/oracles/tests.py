from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given

from weights.functions import PositionWeights, WeightFunctionSpec
from weights.trajectory import CodingVariant, ModelTrajectory

from .references import (
    oracle_arith_length,
    oracle_forward_cost,
    oracle_g,
    oracle_huffman_cost,
    oracle_weights,
)
from .strategies import examples, texts, weight_specs

EXAMPLE = b"ccabbbcaaa"
A, B, C = ord('a'), ord('b'), ord('c')


class OracleWeightTests(SimpleTestCase):
    def test_positional_columns(self):
        positional = WeightFunctionSpec.positional()
        self.assertEqual(oracle_weights(EXAMPLE, positional, 1), {A: 14, B: 18, C: 23})
        self.assertEqual(oracle_weights(EXAMPLE, positional, 4), {A: 6, B: 18, C: 4})
        self.assertEqual(oracle_weights(EXAMPLE, positional, 8), {A: 6, B: 0, C: 0})

    def test_literal_g(self):
        self.assertEqual(oracle_g(WeightFunctionSpec.polynomial('1/2'), 1, 4), 2)
        self.assertEqual(oracle_g(WeightFunctionSpec.polynomial('1/2'), 3, 4), Fraction(26087635650665564424, 2 ** 64))
        self.assertEqual(oracle_g(WeightFunctionSpec.exponential('3/2'), 1, 3), Fraction(9, 4))
        self.assertEqual(oracle_g(WeightFunctionSpec.interpolated(3), 2, 10), 3)
        self.assertEqual(oracle_g(WeightFunctionSpec.exp2(), 7, 10), 16)

    def test_literal_g_agrees_with_engine(self):
        specs = [WeightFunctionSpec.polynomial(k) for k in (0, 1, 2, '1/2', '3/2', '2/3')]
        specs += [WeightFunctionSpec.exponential(base) for base in ('1.0004', '5/4', 3)]
        specs += [WeightFunctionSpec.exp2(), WeightFunctionSpec.interpolated(4), WeightFunctionSpec.positional()]
        for spec in specs:
            with self.subTest(spec=spec.token):
                self.assertEqual([oracle_g(spec, i, 12) for i in range(1, 13)], list(PositionWeights(spec, 12)))

    def test_constant_counts(self):
        self.assertEqual(oracle_weights(EXAMPLE, WeightFunctionSpec.constant(), 1), {A: 4, B: 3, C: 3})

    @given(texts(max_size=80, max_alphabet=6), weight_specs())
    @examples(60)
    def test_trajectory_matches_literal_sums(self, text, spec):
        walk = ModelTrajectory.for_text(text, CodingVariant.weighted(spec))
        for i, symbol in enumerate(text, 1):
            expected = {s: w for s, w in oracle_weights(text, spec, i).items() if w > 0}
            self.assertEqual(walk.model_weights(), expected)
            walk.advance(symbol)


class OracleHuffmanTests(SimpleTestCase):
    def test_costs(self):
        self.assertEqual(oracle_huffman_cost({A: 14, B: 18, C: 23}), 87)
        self.assertEqual(oracle_huffman_cost({ord('x'): 5}), 0)
        self.assertEqual(oracle_huffman_cost({A: 4, B: 3, C: 3}), 16)

    def test_forward_cost_per_position(self):
        costs = oracle_forward_cost(EXAMPLE, WeightFunctionSpec.positional())
        self.assertEqual(len(costs), 10)
        self.assertEqual(costs[0], 87)
        self.assertEqual(costs[-1], 0)


class OracleArithTests(SimpleTestCase):
    def test_static_pair(self):
        product, length = oracle_arith_length(b"ab", CodingVariant.static())
        self.assertEqual(product, Fraction(1, 4))
        self.assertAlmostEqual(float(length), 2.0, places=12)

    def test_positional_example(self):
        product, _length = oracle_arith_length(EXAMPLE, CodingVariant.positional())
        self.assertEqual(
            product,
            Fraction(23, 55) * Fraction(13, 45) * Fraction(14, 36) * Fraction(18, 28)
            * Fraction(11, 21) * Fraction(5, 15) * Fraction(4, 10),
        )

    def test_singleton_text_costs_nothing(self):
        product, length = oracle_arith_length(b"zzzz", CodingVariant.backward(), smoothing=1)
        self.assertEqual(product, 1)
        self.assertEqual(length, 0)
