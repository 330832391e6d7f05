import logging
from fractions import Fraction

import mpmath

from headers.header import Engine, Mode, ModelHeader
from huffman.bitstream import BitStream
from weights.exceptions import (
    EmptyInputError,
    EmptyModelError,
    ModelDesyncError,
    ParameterError,
    UnderflowError,
    UnknownSymbolError,
)
from weights.functions import EXACT
from weights.trajectory import ModelTrajectory, Variant

from .coder import ExactDecoder, ExactEncoder, StreamingDecoder, StreamingEncoder
from .layout import CumulativeLayout

logger = logging.getLogger(__name__)

LOG_BITS = 128


def _smoothing(variant):
    return 1 if variant.kind == Variant.BACKWARD else 0


def _layout_for(mode):
    if mode == Mode.EXACT:
        return CumulativeLayout.exact
    if mode == Mode.STREAMING:
        return CumulativeLayout.streaming
    raise ParameterError(f"unknown arithmetic mode {mode!r}")


def arith_encode(text, variant, mode=Mode.EXACT, field=EXACT, alphabet=None):
    """Code ``text`` with the variant's model trajectory; returns (ModelHeader, BitStream)."""
    if not text:
        raise EmptyInputError("empty input")
    layout_of = _layout_for(mode)
    walk = ModelTrajectory.for_text(text, variant, field, smoothing=_smoothing(variant), alphabet=alphabet)
    header = ModelHeader.describe(Engine.ARITHMETIC, walk, mode)
    out = BitStream()
    encoder = ExactEncoder() if mode == Mode.EXACT else StreamingEncoder(out)
    coded = 0
    for symbol in text:
        if walk.is_singleton:
            walk.infer_run()
            break
        encoder.encode(layout_of(walk.table), symbol)
        walk.advance(symbol)
        coded += 1
    if mode == Mode.EXACT:
        encoder.finish(out)
    elif coded:
        encoder.finish()
    logger.debug("arith %s/%s: %d coded symbols, %d payload bits", variant.label, mode, coded, len(out))
    return header, out


def arith_decode(header, payload):
    walk = header.trajectory()
    layout_of = _layout_for(header.mode)
    decoder = None
    out = bytearray()
    try:
        while not walk.finished:
            if walk.is_singleton:
                symbol, run = walk.infer_run()
                out.extend(bytes([symbol]) * run)
                break
            if walk.table.is_empty:
                raise ModelDesyncError(f"model emptied at position {walk.position} of {walk.n}")
            if decoder is None:
                decoder = ExactDecoder(payload) if header.mode == Mode.EXACT else StreamingDecoder(payload)
            symbol = decoder.decode(layout_of(walk.table))
            out.append(symbol)
            walk.advance(symbol)
    except (UnderflowError, UnknownSymbolError, EmptyModelError) as exc:
        raise ModelDesyncError(f"decoder model diverged at position {walk.position}: {exc}") from exc
    if decoder is None and len(payload):
        raise ModelDesyncError(f"{len(payload)} payload bits for a text that needs none")
    return bytes(out)


def probabilities(text, variant, field=EXACT, alphabet=None, smoothing=None):
    """q of every coded symbol, in order; singleton steps are not coded."""
    if not text:
        raise EmptyInputError("empty input")
    if smoothing is None:
        smoothing = _smoothing(variant)
    walk = ModelTrajectory.for_text(text, variant, field, smoothing=smoothing, alphabet=alphabet)
    for symbol in text:
        if walk.is_singleton:
            return
        yield walk.probability(symbol)
        walk.advance(symbol)


def probability_product(text, variant, field=EXACT, alphabet=None, smoothing=None):
    """Product of the model probabilities of every coded symbol, exact in the exact field."""
    product = Fraction(1) if field.exact else field.ctx.mpf(1)
    for q in probabilities(text, variant, field, alphabet, smoothing):
        product *= q
    return product


def ideal_code_length(text, variant, field=EXACT, alphabet=None, smoothing=None):
    """Sum of -log2 q over the coded symbols, each q exact, summed at LOG_BITS of precision."""
    with mpmath.workprec(LOG_BITS):
        total = mpmath.mpf(0)
        for q in probabilities(text, variant, field, alphabet, smoothing):
            if isinstance(q, (int, Fraction)):
                q = Fraction(q)
                total += mpmath.log(mpmath.mpf(q.denominator) / q.numerator, 2)
            else:
                total -= mpmath.log(mpmath.mpf(q), 2)
        return total


def ideal_bits_ceiling(product):
    """Smallest integer I with 2**-I <= product, computed exactly."""
    product = Fraction(product)
    bits = max(0, (product.denominator // product.numerator).bit_length() - 1)
    while product.denominator > product.numerator << bits:
        bits += 1
    return bits
