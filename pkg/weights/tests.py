from fractions import Fraction

import mpmath
from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from oracles.strategies import examples, texts, weight_specs

from .exceptions import (
    EmptyInputError,
    EmptyModelError,
    InvalidSpecError,
    ModelDesyncError,
    ParameterError,
    PositionError,
    UnderflowError,
    UnknownSymbolError,
)
from .functions import PositionWeights, WeightFunctionSpec, eval_g
from .numbers import NumberField, integer_root, to_fraction
from .tables import (
    WeightTable,
    init_backward_table,
    init_forward_table,
    probability_of,
    update_backward,
    update_forward,
)
from .trajectory import CodingVariant, ModelTrajectory, Variant

EXAMPLE = b"ccabbbcaaa"
A, B, C = ord('a'), ord('b'), ord('c')

POS = WeightFunctionSpec.positional()
CONST = WeightFunctionSpec.constant()


def literal_weights(text, spec, start):
    n = len(text)
    weights = {}
    for j in range(start, n + 1):
        symbol = text[j - 1]
        weights[symbol] = weights.get(symbol, 0) + eval_g(spec, j, n)
    return {symbol: weight for symbol, weight in weights.items() if weight}


class WeightFunctionTests(SimpleTestCase):
    def test_documented_values(self):
        self.assertEqual(eval_g(POS, 1, 10), 10)
        self.assertEqual(eval_g(CONST, 7, 10), 1)
        self.assertEqual(eval_g(WeightFunctionSpec.interpolated(4), 8, 10), 3)
        self.assertEqual(eval_g(WeightFunctionSpec.exp2(), 3, 10), 128)

    def test_special_cases_coincide(self):
        n = 12
        for i in range(1, n + 1):
            self.assertEqual(eval_g(WeightFunctionSpec.polynomial(0), i, n), eval_g(CONST, i, n))
            self.assertEqual(eval_g(WeightFunctionSpec.polynomial(1), i, n), eval_g(POS, i, n))
            self.assertEqual(eval_g(WeightFunctionSpec.interpolated(1), i, n), eval_g(CONST, i, n))
            self.assertEqual(eval_g(WeightFunctionSpec.interpolated(n), i, n), eval_g(POS, i, n))

    def test_integer_polynomial_is_exact_power(self):
        spec = WeightFunctionSpec.polynomial(8)
        self.assertEqual(eval_g(spec, 1, 30), 30 ** 8)
        self.assertEqual(eval_g(spec, 30, 30), 1)

    def test_fractional_exponent_hits_perfect_powers(self):
        self.assertEqual(eval_g(WeightFunctionSpec.polynomial('0.5'), 1, 4), 2)
        self.assertEqual(eval_g(WeightFunctionSpec.polynomial('3/2'), 1, 4), 8)

    def test_fractional_exponent_relative_error(self):
        value = eval_g(WeightFunctionSpec.polynomial('1/2'), 1, 2)
        self.assertIsInstance(value, Fraction)
        with mpmath.workprec(256):
            error = abs(mpmath.mpf(value.numerator) / value.denominator - mpmath.sqrt(2))
            self.assertLess(error / mpmath.sqrt(2), mpmath.mpf(2) ** -64)

    def test_exponential_base(self):
        spec = WeightFunctionSpec.exponential('1.0004')
        self.assertEqual(spec.base, Fraction(2501, 2500))
        self.assertEqual(eval_g(spec, 8, 10), Fraction(2501, 2500) ** 2)
        self.assertEqual(eval_g(spec, 10, 10), 1)

    def test_interpolated_is_monotone_in_j_and_bounded_by_positional(self):
        n = 15
        for i in range(1, n + 1):
            values = [eval_g(WeightFunctionSpec.interpolated(j), i, n) for j in range(1, n + 1)]
            self.assertEqual(values, sorted(values))
            self.assertLessEqual(values[-1], eval_g(POS, i, n))
            self.assertEqual(values[-1], eval_g(POS, i, n))

    def test_parse_and_token(self):
        for token in ('const', 'pos', 'poly:8', 'poly:0.5', 'poly:1.5', 'exp:1.0004', 'exp2', 'interp:3'):
            self.assertEqual(WeightFunctionSpec.parse(token).token, token)
        self.assertEqual(WeightFunctionSpec.parse('exp:5/3').token, 'exp:5/3')

    def test_invalid_specs(self):
        with self.assertRaises(InvalidSpecError):
            WeightFunctionSpec.exponential(1)
        with self.assertRaises(InvalidSpecError):
            WeightFunctionSpec.polynomial(-1)
        with self.assertRaises(InvalidSpecError):
            WeightFunctionSpec.interpolated(0)
        with self.assertRaises(InvalidSpecError):
            WeightFunctionSpec.parse('cubic')
        with self.assertRaises(InvalidSpecError):
            WeightFunctionSpec.parse('pos:3')
        with self.assertRaises(InvalidSpecError):
            eval_g(WeightFunctionSpec.interpolated(11), 1, 10)

    def test_position_out_of_range(self):
        with self.assertRaises(PositionError):
            eval_g(POS, 0, 10)
        with self.assertRaises(PositionError):
            eval_g(POS, 11, 10)

    def test_sequence_matches_pointwise_evaluation(self):
        for spec in (POS, WeightFunctionSpec.exp2(), WeightFunctionSpec.exponential('5/4'),
                     WeightFunctionSpec.polynomial('1/2'), WeightFunctionSpec.interpolated(3)):
            weights = PositionWeights(spec, 9)
            self.assertEqual(list(weights), [eval_g(spec, i, 9) for i in range(1, 10)])
            self.assertEqual(weights.tail_sum(4), sum(eval_g(spec, i, 9) for i in range(4, 10)))
            self.assertEqual(weights.minimum(), 1)
            numerators = list(weights.numerators())
            self.assertTrue(all(isinstance(value, int) for value in numerators))
            self.assertEqual([Fraction(value, weights.denominator) for value in numerators], list(weights))
            self.assertEqual(weights.tail_sum(4, scaled=True), sum(numerators[3:]))
        self.assertEqual(PositionWeights(WeightFunctionSpec.exponential('5/4'), 9).denominator, 4 ** 8)
        self.assertEqual(PositionWeights(POS, 9).denominator, 1)


class NumberFieldTests(SimpleTestCase):
    def test_integer_root(self):
        self.assertEqual(integer_root(0, 3), 0)
        self.assertEqual(integer_root(26, 3), 2)
        self.assertEqual(integer_root(27, 3), 3)
        self.assertEqual(integer_root(10 ** 40, 2), 10 ** 20)
        self.assertEqual(integer_root(10 ** 40 - 1, 2), 10 ** 20 - 1)

    def test_fast_field_needs_64_bits(self):
        with self.assertRaises(ValueError):
            NumberField(32)

    def test_fast_values_convert_to_exact_dyadics(self):
        field = NumberField.fast()
        self.assertEqual(to_fraction(field.coerce(Fraction(3, 4))), Fraction(3, 4))
        self.assertEqual(to_fraction(field.coerce(0)), 0)
        self.assertEqual(field.coerce(to_fraction(field.ratio(1, 3))), field.ratio(1, 3))


class WeightTableTests(SimpleTestCase):
    def test_init_forward(self):
        self.assertEqual(init_forward_table(EXAMPLE, POS).as_dict(), {A: 14, B: 18, C: 23})
        self.assertEqual(init_forward_table(EXAMPLE, CONST).as_dict(), {A: 4, B: 3, C: 3})
        self.assertEqual(init_forward_table(b"aaaa", POS).as_dict(), {A: 10})

    def test_init_forward_rejects_empty_text(self):
        with self.assertRaises(EmptyInputError):
            init_forward_table(b"", POS)

    def test_init_backward(self):
        table = init_backward_table(b"abc")
        self.assertEqual(table.as_dict(), {A: 0, B: 0, C: 0})
        self.assertEqual(table.active_count, 0)
        self.assertEqual(init_backward_table({ord('x')}).as_dict(), {ord('x'): 0})
        self.assertEqual(len(init_backward_table(range(256))), 256)
        with self.assertRaises(EmptyInputError):
            init_backward_table([])

    def test_update_forward(self):
        table = update_forward(WeightTable({A: 14, B: 18, C: 23}), C, 10)
        self.assertEqual(table.as_dict(), {A: 14, B: 18, C: 13})
        self.assertEqual(table.total, 45)

        table = update_forward(WeightTable({A: 6, B: 5, C: 4}), B, 5)
        self.assertEqual(table.as_dict(), {A: 6, C: 4})
        self.assertNotIn(B, table)
        self.assertEqual(table.active_count, 2)

        table = update_forward(WeightTable({A: 1}), A, 1)
        self.assertTrue(table.is_empty)
        self.assertEqual(table.total, 0)

    def test_update_forward_underflow(self):
        with self.assertRaises(UnderflowError):
            update_forward(WeightTable({A: 3}), A, 4)
        with self.assertRaises(UnknownSymbolError):
            update_forward(WeightTable({A: 3}), B, 1)

    def test_update_backward(self):
        table = update_backward(init_backward_table(b"abc"), C, 1)
        self.assertEqual(table.as_dict(), {A: 0, B: 0, C: 1})
        self.assertEqual(table.active_count, 1)
        table = update_backward(WeightTable({A: 1, B: 2, C: 2}, keep_zero=True), B, 1)
        self.assertEqual(table.as_dict(), {A: 1, B: 3, C: 2})
        x = ord('x')
        self.assertEqual(update_backward(WeightTable({x: 5}), x, 1).as_dict(), {x: 6})
        with self.assertRaises(UnknownSymbolError):
            update_backward(init_backward_table(b"ab"), C, 1)

    def test_probability_of(self):
        self.assertEqual(probability_of(WeightTable({A: 14, B: 18, C: 23}), C), Fraction(23, 55))
        self.assertEqual(probability_of(WeightTable({ord('x'): 7}), ord('x')), 1)
        self.assertEqual(probability_of(WeightTable({A: 1, B: 1}), A), Fraction(1, 2))
        with self.assertRaises(EmptyModelError):
            probability_of(init_backward_table(b"ab"), A)

    def test_copy_is_independent(self):
        table = WeightTable({A: 2, B: 1})
        clone = table.copy()
        update_forward(clone, B, 1)
        self.assertEqual(table.as_dict(), {A: 2, B: 1})
        self.assertEqual(clone.as_dict(), {A: 2})

    @given(texts(max_size=120), weight_specs())
    @examples(60)
    def test_initial_total_is_sum_of_g(self, text, spec):
        table = init_forward_table(text, spec)
        table.check()
        self.assertEqual(table.total, sum(eval_g(spec, i, len(text)) for i in range(1, len(text) + 1)))

    @given(texts(max_size=80), weight_specs())
    @examples(60)
    def test_forward_replay_matches_literal_weights(self, text, spec):
        n = len(text)
        table = init_forward_table(text, spec)
        for i in range(1, n + 1):
            self.assertEqual(table.as_dict(), literal_weights(text, spec, i))
            update_forward(table, text[i - 1], eval_g(spec, i, n))
        self.assertTrue(table.is_empty)

    @given(texts(max_size=60, max_alphabet=6))
    @examples(40)
    def test_probabilities_sum_to_one(self, text):
        table = init_forward_table(text, POS)
        self.assertEqual(sum(probability_of(table, symbol) for symbol in table.members), 1)


class TrajectoryTests(SimpleTestCase):
    def test_positional_walk_reproduces_weight_columns(self):
        columns = [
            {A: 14, B: 18, C: 23},
            {A: 14, B: 18, C: 13},
            {A: 14, B: 18, C: 4},
            {A: 6, B: 18, C: 4},
            {A: 6, B: 11, C: 4},
            {A: 6, B: 5, C: 4},
            {A: 6, C: 4},
            {A: 6},
        ]
        walk = ModelTrajectory.for_text(EXAMPLE, CodingVariant.positional())
        for expected, symbol in zip(columns[:-1], EXAMPLE):
            self.assertEqual(walk.table.as_dict(), expected)
            walk.advance(symbol)
        self.assertEqual(walk.table.as_dict(), columns[-1])
        self.assertTrue(walk.is_singleton)
        self.assertEqual(walk.infer_run(), (A, 3))

    def test_forward_starts_from_counts(self):
        walk = ModelTrajectory.for_text(EXAMPLE, CodingVariant.forward())
        self.assertEqual(walk.table.as_dict(), {A: 4, B: 3, C: 3})

    def test_backward_alphabet(self):
        walk = ModelTrajectory.for_text(EXAMPLE, CodingVariant.backward())
        self.assertEqual(walk.table.as_dict(), {A: 0, B: 0, C: 0})
        walk.advance(C)
        self.assertEqual(walk.table.as_dict(), {A: 0, B: 0, C: 1})
        self.assertFalse(walk.is_singleton)

    def test_static_never_changes(self):
        walk = ModelTrajectory.for_text(EXAMPLE, CodingVariant.static())
        for symbol in EXAMPLE:
            walk.advance(symbol)
        self.assertEqual(walk.table.as_dict(), {A: 4, B: 3, C: 3})

    def test_run_inference_detects_desync(self):
        table = WeightTable({A: 7})
        walk = ModelTrajectory(CodingVariant.positional(), 3, table)
        with self.assertRaises(ModelDesyncError):
            walk.infer_run()

    def test_exact_walk_runs_on_integers(self):
        spec = WeightFunctionSpec.exponential('5/4')
        text = b"abcabbacca"
        walk = ModelTrajectory.for_text(text, CodingVariant.weighted(spec))
        self.assertEqual(walk.scale, 4 ** 9)
        for i, symbol in enumerate(text, 1):
            if walk.is_singleton:
                break
            self.assertTrue(all(isinstance(weight, int) for weight in walk.table.weights.values()))
            expected = literal_weights(text, spec, i)
            self.assertEqual(walk.model_weights(), expected)
            self.assertEqual(walk.probability(symbol), Fraction(expected[symbol]) / sum(expected.values()))
            walk.advance(symbol)

    def test_true_unit_table_is_rescaled(self):
        spec = WeightFunctionSpec.polynomial('1/2')
        variant = CodingVariant.weighted(spec)
        walk = ModelTrajectory.for_text(EXAMPLE, variant)
        rebuilt = ModelTrajectory(variant, len(EXAMPLE), WeightTable(walk.model_weights()))
        self.assertEqual(rebuilt.table, walk.table)
        self.assertEqual(rebuilt.scale, 1 << 64)
        with self.assertRaises(ModelDesyncError):
            ModelTrajectory(variant, len(EXAMPLE), WeightTable({A: Fraction(1, 3)}))

    def test_backward_exponential_deltas(self):
        spec = WeightFunctionSpec.exponential('3/2')
        walk = ModelTrajectory.for_text(b"aab", CodingVariant.backward(spec))
        walk.advance(A)
        walk.advance(A)
        self.assertEqual(walk.model_weights(), {A: Fraction(9, 4) + Fraction(3, 2), B: 0})

    def test_advance_past_end(self):
        walk = ModelTrajectory.for_text(b"a", CodingVariant.forward())
        walk.advance(A)
        with self.assertRaises(PositionError):
            walk.advance(A)

    def test_variant_options(self):
        self.assertEqual(CodingVariant.from_options('weighted', 'pos'), CodingVariant.positional())
        self.assertEqual(CodingVariant.from_options('forward').kind, Variant.FORWARD)
        self.assertEqual(CodingVariant.from_options('static', 'const'), CodingVariant.static())
        with self.assertRaises(ParameterError):
            CodingVariant.from_options('weighted')
        with self.assertRaises(ParameterError):
            CodingVariant.from_options('static', 'pos')
        with self.assertRaises(ParameterError):
            CodingVariant.from_options('lz77')

    @given(texts(max_size=100), st.sampled_from([WeightFunctionSpec.exp2(), POS, CONST]))
    @examples(40)
    def test_fast_field_removes_symbols_at_their_last_occurrence(self, text, spec):
        field = NumberField.fast()
        walk = ModelTrajectory.for_text(text, CodingVariant.weighted(spec), field)
        for i, symbol in enumerate(text, 1):
            self.assertEqual(set(walk.members), set(text[i - 1:]))
            self.assertGreater(walk.table[symbol], 0)
            walk.advance(symbol)
        self.assertTrue(walk.table.is_empty)
