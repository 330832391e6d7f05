import logging

from django.conf import settings

from headers.header import Engine, ModelHeader
from weights.exceptions import (
    EmptyInputError,
    ModelDesyncError,
    UnderflowError,
    UnknownSymbolError,
)
from weights.functions import EXACT
from weights.trajectory import ModelTrajectory

from .bitstream import BitStream
from .tree import build_tree, decode_symbol, encode_symbol

logger = logging.getLogger(__name__)


def _update(tree, walk, symbol):
    tree.change_weight(symbol, walk.advance(symbol))
    if settings.DEBUG:
        tree.check_invariants(exact=walk.field.exact)


def huffman_encode(text, variant, field=EXACT, alphabet=None):
    """Code ``text`` symbol by symbol; returns (ModelHeader, BitStream)."""
    if not text:
        raise EmptyInputError("empty input")
    walk = ModelTrajectory.for_text(text, variant, field, alphabet=alphabet)
    header = ModelHeader.describe(Engine.HUFFMAN, walk)
    tree = build_tree(walk.table)
    out = BitStream()
    for symbol in text:
        if walk.is_singleton:
            walk.infer_run()
            break
        encode_symbol(tree, symbol, out)
        _update(tree, walk, symbol)
    logger.debug("huffman %s: %d symbols, %d payload bits, %d rebuilds",
                 variant.label, len(text), len(out), tree.rebuilds)
    return header, out


def huffman_decode(header, payload):
    walk = header.trajectory()
    tree = build_tree(walk.table)
    out = bytearray()
    try:
        while not walk.finished:
            if walk.is_singleton:
                symbol, run = walk.infer_run()
                out.extend(bytes([symbol]) * run)
                break
            if walk.table.is_empty:
                raise ModelDesyncError(f"model emptied at position {walk.position} of {walk.n}")
            symbol = decode_symbol(tree, payload)
            out.append(symbol)
            _update(tree, walk, symbol)
    except (UnderflowError, UnknownSymbolError) as exc:
        raise ModelDesyncError(f"decoder model diverged at position {walk.position}: {exc}") from exc
    if payload.remaining:
        raise ModelDesyncError(f"{payload.remaining} payload bits left after {walk.n} symbols")
    return bytes(out)
