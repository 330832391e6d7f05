from fractions import Fraction
from unittest import mock

from django.test import SimpleTestCase, override_settings
from hypothesis import given, strategies as st

from oracles.references import oracle_huffman_cost
from oracles.strategies import corpus_texts, examples, large_text, multi_symbol_texts, texts, weight_specs
from weights.exceptions import EmptyModelError, ModelDesyncError, TruncatedStreamError, UnknownSymbolError
from weights.functions import EXACT, WeightFunctionSpec
from weights.numbers import NumberField
from weights.tables import WeightTable, init_backward_table
from weights.trajectory import CodingVariant, ModelTrajectory

from .bitstream import BitStream
from .codec import huffman_decode, huffman_encode
from .tree import HuffmanTree, build_tree, change_weight, decode_symbol, encode_symbol

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


def tree_of(weights):
    return build_tree(WeightTable(weights))


def encoded(tree, symbol):
    out = BitStream()
    encode_symbol(tree, symbol, out)
    return str(out)


class BitStreamTests(SimpleTestCase):
    def test_pack_and_unpack(self):
        stream = BitStream.from_string("1011001")
        self.assertEqual(stream.to_bytes(), bytes([0b10110010]))
        self.assertEqual(BitStream.from_bytes(stream.to_bytes(), 7), stream)

    def test_read_past_end(self):
        stream = BitStream.from_string("1")
        self.assertEqual(stream.read(), 1)
        with self.assertRaises(TruncatedStreamError):
            stream.read()

    def test_declared_length_beyond_data(self):
        with self.assertRaises(TruncatedStreamError):
            BitStream.from_bytes(b"\x00", 9)


class TreeTests(SimpleTestCase):
    def test_build_lengths(self):
        self.assertEqual(tree_of({A: 14, B: 18, C: 23}).code_lengths(), {A: 2, B: 2, C: 1})
        self.assertEqual(tree_of({A: 4, B: 3, C: 3}).code_lengths(), {A: 1, B: 2, C: 2})
        self.assertEqual(tree_of({ord('x'): 1}).code_lengths(), {ord('x'): 0})

    def test_build_needs_symbols(self):
        with self.assertRaises(EmptyModelError):
            tree_of({})

    def test_encode_examples(self):
        self.assertEqual(encoded(tree_of({A: 14, B: 18, C: 23}), C), "0")
        self.assertEqual(encoded(tree_of({A: 14, B: 18, C: 13}), C), "10")
        self.assertEqual(encoded(tree_of({ord('x'): 3}), ord('x')), "")
        self.assertEqual(encoded(tree_of({A: 4, B: 3, C: 3}), A), "0")
        with self.assertRaises(UnknownSymbolError):
            encoded(tree_of({A: 1, B: 1}), C)

    def test_decode_examples(self):
        self.assertEqual(decode_symbol(tree_of({A: 14, B: 18, C: 23}), BitStream.from_string("0")), C)
        self.assertEqual(decode_symbol(tree_of({A: 6, B: 18, C: 4}), BitStream.from_string("01")), B)
        empty = BitStream()
        self.assertEqual(decode_symbol(tree_of({ord('x'): 9}), empty), ord('x'))
        self.assertEqual(empty.cursor, 0)

    def test_decode_truncated(self):
        with self.assertRaises(TruncatedStreamError):
            decode_symbol(tree_of({A: 14, B: 18, C: 13}), BitStream.from_string("1"))

    def test_lowering_a_weight_keeps_lengths(self):
        tree = tree_of({A: 4, B: 3, C: 3})
        change_weight(tree, C, 2)
        self.assertEqual(tree.code_lengths(), {A: 1, B: 2, C: 2})
        self.assertEqual(tree.leaf_weights(), {A: 4, B: 3, C: 2})
        tree.check_invariants()

    def test_zero_weight_removes_leaf(self):
        tree = tree_of({A: 6, B: 5, C: 4})
        change_weight(tree, B, 0)
        self.assertNotIn(B, tree)
        self.assertEqual(tree.code_lengths(), {A: 1, C: 1})
        tree.check_invariants()

    def test_same_weight_is_a_no_op(self):
        tree = tree_of({A: 6, B: 5, C: 4})
        before = {symbol: tree.codeword(symbol) for symbol in (A, B, C)}
        change_weight(tree, A, 6)
        self.assertEqual({symbol: tree.codeword(symbol) for symbol in (A, B, C)}, before)

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbolError):
            change_weight(tree_of({A: 1}), B, 3)

    def test_backward_tree_keeps_zero_leaves(self):
        tree = build_tree(init_backward_table(b"abc"))
        self.assertEqual(len(tree), 3)
        change_weight(tree, C, 1)
        self.assertEqual(tree.leaf_weights(), {A: 0, B: 0, C: 1})
        tree.check_invariants()

    def test_raise_and_lower_match_rebuilt_cost(self):
        tree = HuffmanTree({symbol: symbol % 7 + 1 for symbol in range(20)})
        for symbol, weight in [(3, 40), (11, 1), (3, 2), (19, 25), (0, 9), (19, 25), (5, 0)]:
            tree.change_weight(symbol, weight)
            tree.check_invariants()
            self.assertEqual(tree.weighted_path_length(), oracle_huffman_cost(tree.leaf_weights()))


class TrackedWalkTests(SimpleTestCase):
    """Step the model and the tree together: each step must be an optimal tree, not necessarily the rebuilt one."""

    def walk(self, text, variant, field=EXACT):
        walk = ModelTrajectory.for_text(text, variant, field)
        tree = build_tree(walk.table)
        for symbol in text:
            if walk.is_singleton:
                break
            yield walk, tree, symbol
            tree.change_weight(symbol, walk.advance(symbol))

    @given(texts(max_size=150, max_alphabet=12), st.sampled_from(VARIANTS))
    @examples(80)
    def test_incremental_tree_is_optimal(self, text, variant):
        for walk, tree, _symbol in self.walk(text, variant):
            tree.check_invariants()
            self.assertEqual(tree.leaf_weights(), walk.table.as_dict())
            self.assertEqual(tree.weighted_path_length(), oracle_huffman_cost(walk.table.as_dict()))
            self.assertEqual(tree.weighted_path_length(), build_tree(walk.table).weighted_path_length())
            self.assertEqual(sum(Fraction(1, 2 ** length) for length in tree.code_lengths().values()), 1)

    def test_updated_tree_is_optimal_not_identical_to_rebuild(self):
        # At ties the updated tree and a rebuild are different optimal trees.
        text = b"\x00\x01\x02\x03"
        steps = self.walk(text, CodingVariant.backward())
        for _ in range(4):
            walk, tree, _symbol = next(steps)
        self.assertEqual(walk.table.as_dict(), {0: 1, 1: 1, 2: 1, 3: 0})
        rebuilt = build_tree(walk.table)
        tree.check_invariants()
        self.assertEqual(sorted(tree.depth(symbol) for symbol in text), [1, 2, 3, 3])
        self.assertEqual(sorted(rebuilt.depth(symbol) for symbol in text), [2, 2, 2, 2])
        self.assertEqual(tree.weighted_path_length(), rebuilt.weighted_path_length())
        self.assertEqual(tree.weighted_path_length(), oracle_huffman_cost(walk.table.as_dict()))
        self.assertEqual(sum(Fraction(1, 2 ** tree.depth(symbol)) for symbol in text), 1)

    @given(texts(max_size=150))
    @examples(60)
    def test_exp2_spends_one_bit_per_symbol(self, text):
        variant = CodingVariant.weighted(WeightFunctionSpec.exp2())
        for _walk, tree, symbol in self.walk(text, variant):
            self.assertEqual(tree.depth(symbol), 1)
        _header, payload = huffman_encode(text, variant)
        run = len(text) - len(text.rstrip(text[-1:]))
        self.assertEqual(len(payload), len(text) - run)


class HuffmanCodecTests(SimpleTestCase):
    def test_golden_totals(self):
        self.assertEqual(len(huffman_encode(EXAMPLE, CodingVariant.positional())[1]), 10)
        self.assertEqual(len(huffman_encode(EXAMPLE, CodingVariant.backward())[1]), 19)
        self.assertEqual(len(huffman_encode(EXAMPLE, CodingVariant.forward())[1]), 12)
        self.assertEqual(len(huffman_encode(EXAMPLE, CodingVariant.weighted(WeightFunctionSpec.exp2()))[1]), 7)

    def test_headers_carry_initial_model(self):
        self.assertEqual(huffman_encode(EXAMPLE, CodingVariant.forward())[0].weights, {A: 4, B: 3, C: 3})
        self.assertEqual(huffman_encode(EXAMPLE, CodingVariant.positional())[0].weights, {A: 14, B: 18, C: 23})
        header = huffman_encode(EXAMPLE, CodingVariant.backward())[0]
        self.assertEqual(header.weights, {})
        self.assertEqual(header.header_bits, 0)

    def test_golden_round_trips(self):
        for variant in (CodingVariant.positional(), CodingVariant.backward(), CodingVariant.forward()):
            header, payload = huffman_encode(EXAMPLE, variant)
            self.assertEqual(huffman_decode(header, payload), EXAMPLE)

    def test_single_symbol_text_needs_no_bits(self):
        for length in (1, 2, 17):
            text = b"a" * length
            for variant in VARIANTS:
                header, payload = huffman_encode(text, variant)
                self.assertEqual(len(payload), 0)
                self.assertEqual(huffman_decode(header, payload), text)

    def test_trailing_bits_are_a_desync(self):
        header, payload = huffman_encode(EXAMPLE, CodingVariant.forward())
        payload.write(1)
        with self.assertRaises(ModelDesyncError):
            huffman_decode(header, payload)

    def test_truncated_payload(self):
        header, payload = huffman_encode(EXAMPLE, CodingVariant.backward())
        short = BitStream.from_string(str(payload)[:-3])
        with self.assertRaises(TruncatedStreamError):
            huffman_decode(header, short)

    @given(texts(max_size=300, max_alphabet=16), st.sampled_from(VARIANTS))
    @examples(150)
    def test_round_trip(self, text, variant):
        header, payload = huffman_encode(text, variant)
        self.assertEqual(huffman_decode(header, payload), text)

    @given(texts(max_size=300, max_alphabet=16), weight_specs())
    @examples(60)
    def test_round_trip_fast_field(self, text, spec):
        field = NumberField.fast()
        for variant in (CodingVariant.weighted(spec), CodingVariant.backward(spec)):
            header, payload = huffman_encode(text, variant, field)
            self.assertEqual(header.precision, 64)
            self.assertEqual(huffman_decode(header, payload), text)

    @given(st.binary(min_size=1, max_size=400))
    @examples(40)
    def test_round_trip_arbitrary_bytes(self, text):
        for variant in (CodingVariant.backward(), CodingVariant.positional()):
            header, payload = huffman_encode(text, variant)
            self.assertEqual(huffman_decode(header, payload), text)

    @given(multi_symbol_texts(max_size=300, max_alphabet=12))
    @examples(120)
    def test_forward_beats_static_by_m_minus_one(self, text):
        forward = len(huffman_encode(text, CodingVariant.forward())[1])
        static = len(huffman_encode(text, CodingVariant.static())[1])
        self.assertLessEqual(forward, static - (len(set(text)) - 1))


class CorpusScaleTests(SimpleTestCase):
    """Round trips at corpus length over the whole byte alphabet."""

    def test_every_variant_at_corpus_scale(self):
        text = large_text(seed=7)
        self.assertEqual((len(text), len(set(text))), (10_000, 256))
        for variant in VARIANTS + [CodingVariant.backward(WeightFunctionSpec.exponential('1.0004'))]:
            with self.subTest(variant=variant.label):
                header, payload = huffman_encode(text, variant)
                self.assertEqual(huffman_decode(header, payload), text)

    def test_forward_saving_at_corpus_scale(self):
        text = large_text(seed=11)
        forward = len(huffman_encode(text, CodingVariant.forward())[1])
        static = len(huffman_encode(text, CodingVariant.static())[1])
        self.assertLessEqual(forward, static - 255)

    def test_fast_field_at_corpus_scale(self):
        text = large_text(seed=5)
        field = NumberField.fast()
        spec = WeightFunctionSpec.exponential('1.0004')
        for variant in (CodingVariant.weighted(spec), CodingVariant.backward(spec)):
            with self.subTest(variant=variant.label):
                header, payload = huffman_encode(text, variant, field)
                self.assertEqual(huffman_decode(header, payload), text)

    @given(corpus_texts(), st.sampled_from(VARIANTS))
    @examples(4)
    def test_round_trip_long_texts(self, text, variant):
        header, payload = huffman_encode(text, variant)
        self.assertEqual(huffman_decode(header, payload), text)


class DebugInvariantTests(SimpleTestCase):
    def test_checked_after_every_update_in_debug(self):
        with override_settings(DEBUG=True), mock.patch.object(
            HuffmanTree, 'check_invariants', autospec=True, side_effect=HuffmanTree.check_invariants,
        ) as check:
            header, payload = huffman_encode(EXAMPLE, CodingVariant.forward())
            self.assertEqual(check.call_count, 7)
            self.assertEqual(huffman_decode(header, payload), EXAMPLE)
            self.assertEqual(check.call_count, 14)

    def test_not_checked_outside_debug(self):
        with override_settings(DEBUG=False), mock.patch.object(HuffmanTree, 'check_invariants') as check:
            header, payload = huffman_encode(EXAMPLE, CodingVariant.forward())
            huffman_decode(header, payload)
        check.assert_not_called()

    def test_broken_tree_fails_loudly_in_debug(self):
        with override_settings(DEBUG=True), mock.patch.object(
            HuffmanTree, 'check_invariants', side_effect=AssertionError("weights decrease at position 2"),
        ):
            with self.assertRaises(AssertionError):
                huffman_encode(EXAMPLE, CodingVariant.forward())
