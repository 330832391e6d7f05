from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from arithmetic.codec import arith_encode
from huffman.bitstream import BitStream
from huffman.codec import huffman_decode, huffman_encode
from oracles.strategies import examples, texts, weight_specs
from weights.exceptions import BadMagicError, HeaderError, NonCanonicalError
from weights.functions import WeightFunctionSpec
from weights.numbers import NumberField
from weights.trajectory import CodingVariant

from .container import MAGIC, VERSION, accounted_sizes, read_container, write_container
from .header import Engine, Mode, ModelHeader, parse_header, serialize_header
from .varints import BITMAP_BYTES, Reader, write_magnitude, write_rational, write_varint

EXAMPLE = b"ccabbbcaaa"
A, B, C = ord('a'), ord('b'), ord('c')

VARIANTS = [
    CodingVariant.static(),
    CodingVariant.backward(),
    CodingVariant.forward(),
    CodingVariant.positional(),
    CodingVariant.weighted(WeightFunctionSpec.polynomial(2)),
    CodingVariant.weighted(WeightFunctionSpec.polynomial('1/2')),
    CodingVariant.weighted(WeightFunctionSpec.exponential('1.0004')),
    CodingVariant.weighted(WeightFunctionSpec.exp2()),
    CodingVariant.weighted(WeightFunctionSpec.interpolated(1)),
]


class VarintTests(SimpleTestCase):
    def test_varint_bytes(self):
        self.assertEqual(bytes(write_varint(bytearray(), 0)), b"\x00")
        self.assertEqual(bytes(write_varint(bytearray(), 127)), b"\x7f")
        self.assertEqual(bytes(write_varint(bytearray(), 312)), b"\xb8\x02")
        self.assertEqual(Reader(b"\xb8\x02").varint(), 312)

    def test_magnitude_has_no_leading_zero(self):
        self.assertEqual(bytes(write_magnitude(bytearray(), 0)), b"\x00")
        self.assertEqual(bytes(write_magnitude(bytearray(), 256)), b"\x02\x01\x00")
        self.assertEqual(Reader(b"\x02\x01\x00").magnitude(), 256)

    def test_rational(self):
        self.assertEqual(bytes(write_rational(bytearray(), '1.0004')), b"\xc5\x13\xc4\x13")
        self.assertEqual(Reader(bytes(write_rational(bytearray(), '5/4'))).rational(), Fraction(5, 4))

    def test_non_canonical_forms_are_rejected(self):
        with self.assertRaises(NonCanonicalError):
            Reader(b"\x80\x00").varint()
        with self.assertRaises(NonCanonicalError):
            Reader(b"\x02\x00\x05").magnitude()
        with self.assertRaises(NonCanonicalError):
            Reader(b"\x02\x04").rational()
        with self.assertRaises(HeaderError):
            Reader(b"\x01\x00").rational()

    def test_truncation(self):
        with self.assertRaises(HeaderError):
            Reader(b"\x80").varint()
        with self.assertRaises(HeaderError):
            Reader(b"\x03\x01").magnitude()
        with self.assertRaises(HeaderError):
            Reader(bytes(BITMAP_BYTES - 1)).bitmap()


class ModelHeaderTests(SimpleTestCase):
    def test_forward_header_bytes(self):
        header, _payload = huffman_encode(EXAMPLE, CodingVariant.forward())
        self.assertEqual(header.weights, {A: 4, B: 3, C: 3})
        self.assertIsNone(header.counts)
        bitmap = bytearray(BITMAP_BYTES)
        bitmap[12] = 0x70
        model = bytes(bitmap) + b"\x00" + b"\x01\x04\x01\x03\x01\x03"
        self.assertEqual(header.model_section(), model)
        self.assertEqual(header.header_bits, len(model) * 8)
        self.assertEqual(serialize_header(header), b"\x00\x02\x00\x00\x00" + b"\x0a" + b"\xb8\x02" + model)

    def test_positional_header(self):
        header, _payload = huffman_encode(EXAMPLE, CodingVariant.positional())
        self.assertEqual(header.weights, {A: 14, B: 18, C: 23})
        self.assertEqual(parse_header(serialize_header(header)), header)

    def test_backward_header_has_empty_model_section(self):
        header, _payload = huffman_encode(EXAMPLE, CodingVariant.backward())
        self.assertEqual(header.model_section(), b"")
        self.assertEqual(header.header_bits, 0)
        self.assertEqual(header.alphabet, (A, B, C))
        parsed = parse_header(serialize_header(header))
        self.assertEqual(parsed, header)
        self.assertEqual(parsed.weights, {})

    def test_rational_weights(self):
        header, _payload = huffman_encode(EXAMPLE, CodingVariant.weighted(WeightFunctionSpec.polynomial('1/2')))
        self.assertEqual(header.model_section()[BITMAP_BYTES], 1)
        self.assertEqual(parse_header(serialize_header(header)), header)

    def test_fast_forward_header_carries_counts(self):
        header, _payload = huffman_encode(EXAMPLE, CodingVariant.forward(), NumberField.fast())
        self.assertEqual(header.precision, 64)
        self.assertEqual(header.counts, {A: 4, B: 3, C: 3})
        parsed = parse_header(serialize_header(header))
        self.assertEqual(parsed, header)
        self.assertEqual(parsed.field, NumberField.fast())

    def test_counts_must_add_up(self):
        header = ModelHeader(Engine.HUFFMAN, CodingVariant.forward(), 10, weights={A: 5, B: 3, C: 3})
        with self.assertRaises(HeaderError):
            parse_header(serialize_header(header))

    def test_trailing_and_missing_bytes(self):
        data = serialize_header(huffman_encode(EXAMPLE, CodingVariant.positional())[0])
        with self.assertRaises(HeaderError):
            parse_header(data + b"\x00")
        with self.assertRaises(HeaderError):
            parse_header(data[:-1])

    def test_unknown_tags_and_weak_precision(self):
        with self.assertRaises(HeaderError):
            parse_header(b"\x07\x00\x00\x00\x00\x01\x00")
        with self.assertRaises(HeaderError):
            parse_header(b"\x00\x01\x00\x20\x00\x03\x00" + bytes(BITMAP_BYTES))

    @given(texts(max_size=120, max_alphabet=10), st.sampled_from(VARIANTS), st.booleans())
    @examples(100)
    def test_round_trip_is_canonical(self, text, variant, arithmetic):
        if arithmetic:
            header, _payload = arith_encode(text, variant, Mode.STREAMING)
        else:
            header, _payload = huffman_encode(text, variant)
        data = serialize_header(header)
        parsed = parse_header(data)
        self.assertEqual(parsed, header)
        self.assertEqual(serialize_header(parsed), data)

    @given(texts(max_size=120, max_alphabet=10), weight_specs())
    @examples(40)
    def test_fast_field_round_trip(self, text, spec):
        for variant in (CodingVariant.weighted(spec), CodingVariant.backward(spec)):
            header, _payload = huffman_encode(text, variant, NumberField.fast())
            self.assertEqual(parse_header(serialize_header(header)), header)


class ContainerTests(SimpleTestCase):
    def container(self, variant=None):
        header, payload = huffman_encode(EXAMPLE, variant or CodingVariant.positional())
        return header, payload, write_container(header, payload)

    def test_frame_round_trip(self):
        header, payload, data = self.container()
        self.assertTrue(data.startswith(MAGIC + bytes([VERSION])))
        frame = read_container(data)
        self.assertEqual(frame.header, header)
        self.assertEqual(frame.payload, payload)
        self.assertEqual(frame.n, 10)
        self.assertEqual(huffman_decode(frame.header, frame.payload), EXAMPLE)

    def test_accounted_sizes(self):
        _header, _payload, data = self.container()
        sizes = accounted_sizes(read_container(data))
        self.assertEqual(sizes['payload_bits'], 10)
        self.assertGreaterEqual(sizes['frame_bits'], 0)
        self.assertEqual(sizes['payload_bits'] + sizes['header_bits'] + sizes['frame_bits'], sizes['total_bits'])
        self.assertEqual(sizes['total_bits'], len(data) * 8)

        _header, _payload, data = self.container(CodingVariant.backward())
        sizes = accounted_sizes(read_container(data))
        self.assertEqual(sizes['payload_bits'], 19)
        self.assertEqual(sizes['header_bits'], 0)
        self.assertGreaterEqual(sizes['frame_bits'], 0)

    def test_interpolation_point_beyond_text(self):
        _header, _payload, data = self.container(CodingVariant.weighted(WeightFunctionSpec.interpolated(3)))
        self.assertEqual(data[9:11], bytes([5, 3]))
        self.assertEqual(read_container(data[:10] + bytes([10]) + data[11:]).header.variant.spec.j, 10)
        with self.assertRaisesRegex(HeaderError, "exceeds text length 10"):
            read_container(data[:10] + bytes([11]) + data[11:])

    def test_bad_magic(self):
        _header, _payload, data = self.container()
        with self.assertRaises(BadMagicError):
            read_container(b"WACy" + data[len(MAGIC):])

    def test_unknown_version(self):
        _header, _payload, data = self.container()
        with self.assertRaises(HeaderError):
            read_container(MAGIC + bytes([VERSION + 1]) + data[len(MAGIC) + 1:])

    def test_truncated_and_trailing(self):
        _header, _payload, data = self.container()
        with self.assertRaises(HeaderError):
            read_container(data[:-1])
        with self.assertRaises(HeaderError):
            read_container(data + b"\x00")
        with self.assertRaises(HeaderError):
            read_container(data[:3])

    def test_padding_bits_must_be_zero(self):
        _header, payload, data = self.container()
        self.assertEqual(len(payload) % 8, 2)
        with self.assertRaises(NonCanonicalError):
            read_container(data[:-1] + bytes([data[-1] | 1]))

    def test_empty_payload(self):
        header, payload = huffman_encode(b"aaaa", CodingVariant.forward())
        frame = read_container(write_container(header, payload))
        self.assertEqual(frame.payload, BitStream())
        self.assertEqual(huffman_decode(frame.header, frame.payload), b"aaaa")
