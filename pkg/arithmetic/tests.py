import math
import random
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from headers.header import Mode
from huffman.bitstream import BitStream
from oracles.references import oracle_probability_product
from oracles.strategies import corpus_texts, examples, large_text, multi_symbol_texts, texts, weight_specs
from weights.exceptions import EmptyInputError, EmptyModelError, ModelDesyncError
from weights.functions import WeightFunctionSpec
from weights.numbers import NumberField
from weights.tables import WeightTable
from weights.trajectory import CodingVariant

from .codec import (
    arith_decode,
    arith_encode,
    ideal_bits_ceiling,
    ideal_code_length,
    probability_product,
)
from .coder import ExactEncoder
from .layout import FREQUENCY_LIMIT, CumulativeLayout

EXAMPLE = b"ccabbbcaaa"
A, B, C = ord('a'), ord('b'), ord('c')

VARIANTS = [
    CodingVariant.static(),
    CodingVariant.backward(),
    CodingVariant.forward(),
    CodingVariant.positional(),
    CodingVariant.weighted(WeightFunctionSpec.polynomial(2)),
    CodingVariant.weighted(WeightFunctionSpec.polynomial(8)),
    CodingVariant.weighted(WeightFunctionSpec.exponential('1.0004')),
    CodingVariant.weighted(WeightFunctionSpec.exp2()),
]
# Base 1.0004 adds an 11-bit factor per position to every exact total; exact runs use 5/4.
EXACT_VARIANTS = VARIANTS[:6] + [
    CodingVariant.weighted(WeightFunctionSpec.exponential('5/4')),
    CodingVariant.weighted(WeightFunctionSpec.exp2()),
]

POSITIONAL_FACTORS = [
    Fraction(23, 55), Fraction(13, 45), Fraction(14, 36), Fraction(18, 28),
    Fraction(11, 21), Fraction(5, 15), Fraction(4, 10),
]


def product(factors):
    result = Fraction(1)
    for factor in factors:
        result *= factor
    return result


class LayoutTests(SimpleTestCase):
    def test_exact_layout_scales_rationals(self):
        layout = CumulativeLayout.exact(WeightTable({A: Fraction(1, 2), C: Fraction(1, 3)}))
        self.assertEqual(layout.symbols, [A, C])
        self.assertEqual(layout.cumulative, [0, 3, 5])
        self.assertEqual(layout.interval(C), (3, 2))
        self.assertEqual(layout.locate(4), (C, 3, 2))

    def test_streaming_layout_keeps_small_counts(self):
        layout = CumulativeLayout.streaming(WeightTable({A: 3, B: 1}))
        self.assertEqual(layout.cumulative, [0, 3, 4])

    def test_streaming_layout_rescales_large_totals(self):
        layout = CumulativeLayout.streaming(WeightTable({A: 1 << 40, B: 1}))
        self.assertEqual(layout.interval(B), (FREQUENCY_LIMIT - 1, 1))
        self.assertLessEqual(layout.total, FREQUENCY_LIMIT + 1)

    def test_zero_weights_have_no_interval(self):
        with self.assertRaises(EmptyModelError):
            CumulativeLayout.exact(WeightTable({A: 0}, keep_zero=True))


class ExactCoderTests(SimpleTestCase):
    def test_symmetric_pair(self):
        encoder = ExactEncoder()
        layout = CumulativeLayout.exact(WeightTable({A: 1, B: 1}))
        encoder.encode(layout, A)
        encoder.encode(layout, B)
        state = encoder.state
        self.assertEqual(Fraction(state.low, state.denominator), Fraction(1, 4))
        self.assertEqual(Fraction(state.low + state.width, state.denominator), Fraction(1, 2))

        header, payload = arith_encode(b"ab", CodingVariant.static())
        self.assertLessEqual(len(payload), 4)
        self.assertEqual(str(payload), "01")
        self.assertEqual(arith_decode(header, payload), b"ab")

    def test_positional_example_within_bound(self):
        expected = product(POSITIONAL_FACTORS)
        self.assertEqual(probability_product(EXAMPLE, CodingVariant.positional()), expected)
        bound = ideal_bits_ceiling(expected)
        _header, payload = arith_encode(EXAMPLE, CodingVariant.positional())
        self.assertGreaterEqual(len(payload), bound)
        self.assertLessEqual(len(payload), bound + 1)

    def test_singleton_model_needs_no_bits(self):
        header, payload = arith_encode(b"aaaa", CodingVariant.forward())
        self.assertEqual(len(payload), 0)
        self.assertEqual(arith_decode(header, payload), b"aaaa")
        header, payload = arith_encode(b"aaaa", CodingVariant.forward(), Mode.STREAMING)
        self.assertEqual(len(payload), 0)
        self.assertEqual(arith_decode(header, payload), b"aaaa")

    def test_ideal_lengths(self):
        self.assertAlmostEqual(float(ideal_code_length(b"ab", CodingVariant.static())), 2.0, places=12)
        forward = product([Fraction(3, 10), Fraction(2, 9), Fraction(4, 8), Fraction(3, 7),
                           Fraction(2, 6), Fraction(1, 5), Fraction(1, 4)])
        self.assertEqual(probability_product(EXAMPLE, CodingVariant.forward()), forward)
        self.assertAlmostEqual(
            float(ideal_code_length(EXAMPLE, CodingVariant.forward())),
            float(sum(-math.log2(f) for f in [0.3, 2 / 9, 0.5, 3 / 7, 1 / 3, 0.2, 0.25])),
            places=9,
        )

    def test_empty_input(self):
        with self.assertRaises(EmptyInputError):
            arith_encode(b"", CodingVariant.forward())

    def test_extra_bits_for_a_singleton_text(self):
        header, _payload = arith_encode(b"aaa", CodingVariant.forward())
        with self.assertRaises(ModelDesyncError):
            arith_decode(header, BitStream.from_string("1"))

    @given(texts(max_size=200, max_alphabet=12), st.sampled_from(EXACT_VARIANTS))
    @examples(100)
    def test_exact_round_trip_and_bound(self, text, variant):
        header, payload = arith_encode(text, variant)
        self.assertEqual(arith_decode(header, payload), text)
        bound = ideal_bits_ceiling(probability_product(text, variant))
        self.assertGreaterEqual(len(payload), bound)
        self.assertLessEqual(len(payload), bound + 1)
        self.assertLessEqual(ideal_code_length(text, variant), len(payload) + 1e-9)


class StreamingCoderTests(SimpleTestCase):
    @given(texts(max_size=400, max_alphabet=16), st.sampled_from(VARIANTS))
    @examples(100)
    def test_streaming_round_trip(self, text, variant):
        header, payload = arith_encode(text, variant, Mode.STREAMING)
        self.assertEqual(arith_decode(header, payload), text)

    @given(texts(max_size=300, max_alphabet=16), weight_specs())
    @examples(50)
    def test_streaming_round_trip_fast_field(self, text, spec):
        field = NumberField.fast()
        for variant in (CodingVariant.weighted(spec), CodingVariant.backward(spec)):
            header, payload = arith_encode(text, variant, Mode.STREAMING, field)
            self.assertEqual(arith_decode(header, payload), text)

    @given(st.binary(min_size=1, max_size=500))
    @examples(30)
    def test_streaming_arbitrary_bytes(self, text):
        header, payload = arith_encode(text, CodingVariant.backward(), Mode.STREAMING)
        self.assertEqual(arith_decode(header, payload), text)

    def test_streaming_loss_is_small(self):
        rng = random.Random(1)
        text = bytes(rng.choices(b"etaoinsh", weights=[12, 9, 8, 8, 7, 7, 6, 6], k=10_000))
        for variant in (CodingVariant.forward(), CodingVariant.positional(), CodingVariant.backward()):
            header, payload = arith_encode(text, variant, Mode.STREAMING)
            ideal = float(ideal_code_length(text, variant))
            self.assertLessEqual(len(payload) - ideal, 0.01 * len(text))
            self.assertEqual(arith_decode(header, payload), text)


class PositionalDominanceTests(SimpleTestCase):
    @given(texts(max_size=120, max_alphabet=8))
    @examples(150)
    def test_positional_at_least_as_good_as_forward(self, text):
        self.assertGreaterEqual(
            probability_product(text, CodingVariant.positional()),
            probability_product(text, CodingVariant.forward()),
        )

    @given(multi_symbol_texts(max_size=40, max_alphabet=5))
    @examples(40)
    def test_interpolated_family_improves_with_j(self, text):
        products = [
            probability_product(text, CodingVariant.weighted(WeightFunctionSpec.interpolated(j)))
            for j in range(1, len(text) + 1)
        ]
        for smaller, larger in zip(products, products[1:]):
            self.assertLessEqual(smaller, larger)

    @given(texts(max_size=60, max_alphabet=6), st.sampled_from(VARIANTS))
    @examples(80)
    def test_matches_oracle_product(self, text, variant):
        smoothing = 1 if variant == CodingVariant.backward() else 0
        self.assertEqual(
            probability_product(text, variant),
            oracle_probability_product(text, variant, smoothing=smoothing),
        )


class CorpusScaleTests(SimpleTestCase):
    """Corpus-length texts over the whole byte alphabet."""

    def test_streaming_every_variant_at_corpus_scale(self):
        text = large_text(seed=7)
        self.assertEqual((len(text), len(set(text))), (10_000, 256))
        for variant in VARIANTS:
            with self.subTest(variant=variant.label):
                header, payload = arith_encode(text, variant, Mode.STREAMING)
                self.assertEqual(arith_decode(header, payload), text)

    def test_streaming_fast_field_at_corpus_scale(self):
        text = large_text(seed=5)
        spec = WeightFunctionSpec.exponential('1.0004')
        for variant in (CodingVariant.weighted(spec), CodingVariant.backward(spec)):
            with self.subTest(variant=variant.label):
                header, payload = arith_encode(text, variant, Mode.STREAMING, NumberField.fast())
                self.assertEqual(arith_decode(header, payload), text)

    def test_exact_full_alphabet(self):
        # The exact interval gains log2(total) bits per symbol, so exponential totals stay out.
        text = large_text(n=2_000, seed=13)
        self.assertEqual(len(set(text)), 256)
        for variant in EXACT_VARIANTS[:6]:
            with self.subTest(variant=variant.label):
                header, payload = arith_encode(text, variant)
                self.assertEqual(arith_decode(header, payload), text)

    @given(corpus_texts(), st.sampled_from(VARIANTS))
    @examples(4)
    def test_streaming_round_trip_long_texts(self, text, variant):
        header, payload = arith_encode(text, variant, Mode.STREAMING)
        self.assertEqual(arith_decode(header, payload), text)
