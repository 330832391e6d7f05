"""Whole-file compression on top of the engines: options, containers, stats."""
import logging
import re
from dataclasses import dataclass

from arithmetic.codec import arith_decode, arith_encode
from headers.container import accounted_sizes, read_container, write_container
from headers.header import Engine, Mode
from huffman.codec import huffman_decode, huffman_encode
from weights.exceptions import (
    EmptyInputError,
    InvalidSpecError,
    ParameterError,
    PositionError,
)
from weights.functions import EXACT
from weights.numbers import NumberField
from weights.trajectory import CodingVariant, Variant

logger = logging.getLogger(__name__)

# Errors caused by the request rather than by the data; commands exit 2 on these.
USAGE_ERRORS = (ParameterError, InvalidSpecError, EmptyInputError, PositionError)

RATIO_DIGITS = 6


@dataclass
class CompressOptions:
    engine: str = Engine.HUFFMAN
    variant: str = Variant.WEIGHTED
    g: str | None = None
    mode: str = Mode.EXACT
    fast_bits: int | None = None

    def __post_init__(self):
        if self.engine not in Engine.values:
            raise ParameterError(f"unknown engine {self.engine!r}; choose from {', '.join(Engine.values)}")
        if self.mode not in Mode.values:
            raise ParameterError(f"unknown mode {self.mode!r}; choose from {', '.join(Mode.values)}")
        if self.variant not in Variant.values:
            raise ParameterError(f"unknown variant {self.variant!r}; choose from {', '.join(Variant.values)}")
        self.engine, self.mode, self.variant = Engine(self.engine), Mode(self.mode), Variant(self.variant)
        if self.engine == Engine.HUFFMAN and self.mode != Mode.EXACT:
            raise ParameterError("--mode only applies to the arithmetic engine")
        if self.g is None and self.variant == Variant.WEIGHTED:
            self.g = 'pos'
        self.coding_variant = CodingVariant.from_options(self.variant, self.g)
        try:
            self.field = NumberField(self.fast_bits) if self.fast_bits else EXACT
        except ValueError as exc:
            raise ParameterError(str(exc)) from exc


def encode(data, options):
    if not data:
        raise EmptyInputError("empty input")
    variant = options.coding_variant
    if options.engine == Engine.HUFFMAN:
        return huffman_encode(data, variant, options.field)
    return arith_encode(data, variant, options.mode, options.field)


def decode(header, payload):
    if header.engine == Engine.HUFFMAN:
        return huffman_decode(header, payload)
    return arith_decode(header, payload)


def stats(header, container):
    """The JSON stats line: bit accounting and ratios against the input size."""
    sizes = accounted_sizes(read_container(container))
    input_bits = header.n * 8
    net = sizes['payload_bits']
    return {
        'engine': header.engine.value,
        'variant': header.variant.kind.value,
        'g': header.variant.spec.token,
        'mode': header.mode.value,
        'n': header.n,
        'net_bits': net,
        'header_bits': sizes['header_bits'],
        'frame_bits': sizes['frame_bits'],
        'net_ratio': round(net / input_bits, RATIO_DIGITS),
        'combined_ratio': round((net + sizes['header_bits']) / input_bits, RATIO_DIGITS),
    }


def compress_bytes(data, options=None, **kwargs):
    """Compress ``data``; returns (container bytes, stats dict)."""
    options = options or CompressOptions(**kwargs)
    header, payload = encode(data, options)
    container = write_container(header, payload)
    result = stats(header, container)
    logger.info("compressed %d bytes with %s/%s: %d payload bits, %d header bits",
                len(data), options.engine, header.variant.label, result['net_bits'], result['header_bits'])
    return container, result


def decompress_bytes(container):
    frame = read_container(container)
    data = decode(frame.header, frame.payload)
    logger.info("decompressed %d bytes (%s/%s)", len(data), frame.header.engine, frame.header.variant.label)
    return data


def strip_punctuation(data):
    """Keep ASCII letters, digits and spaces; other whitespace becomes a space, runs collapse."""
    data = re.sub(rb"[^A-Za-z0-9\s]", b"", data)
    return re.sub(rb"\s+", b" ", data)
