import csv
import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from headers.header import Engine
from huffman.tree import build_tree
from weights.exceptions import EmptyInputError, ParameterError
from weights.functions import EXACT
from weights.numbers import to_fraction
from weights.trajectory import ModelTrajectory, Variant

from .measures import LOG_BITS

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ['position', 'symbol', 'char', 'weights', 'q', 'bits']


@dataclass
class TraceRecord:
    position: int
    symbol: int
    # The model in force before coding this position, as exact rationals.
    weights: dict
    q: Fraction
    bits: object
    inferred: bool = False

    def as_row(self):
        char = chr(self.symbol)
        return {
            'position': self.position,
            'symbol': self.symbol,
            'char': char if char.isprintable() else '',
            'weights': " ".join(f"{symbol}={weight}" for symbol, weight in self.weights.items()),
            'q': str(self.q),
            'bits': mpmath.nstr(self.bits, 12) if isinstance(self.bits, mpmath.mpf) else self.bits,
        }


def trace_model(text, variant, engine=Engine.HUFFMAN, field=EXACT, alphabet=None):
    """One record per position: the live model, q of the actual symbol and its cost.

    Huffman costs are codeword lengths from the incrementally kept tree;
    arithmetic costs are -log2 q. Positions covered by singleton inference
    cost nothing and carry q = 1.
    """
    if not text:
        raise EmptyInputError("empty input")
    if engine not in (Engine.HUFFMAN, Engine.ARITHMETIC):
        raise ParameterError(f"unknown engine {engine!r}")
    smoothing = 1 if engine == Engine.ARITHMETIC and variant.kind == Variant.BACKWARD else 0
    walk = ModelTrajectory.for_text(text, variant, field, smoothing=smoothing, alphabet=alphabet)
    tree = build_tree(walk.table) if engine == Engine.HUFFMAN else None
    records = []
    for symbol in text:
        weights = walk.model_weights()
        if walk.is_singleton:
            records.append(TraceRecord(walk.position, symbol, weights, Fraction(1), 0, inferred=True))
            walk.advance(symbol)
            continue
        if walk.table.total:
            q = to_fraction(walk.probability(symbol))
        else:
            # all-zero backward model: uniform over the alphabet
            q = Fraction(1, len(walk.table))
        if tree is not None:
            bits = tree.depth(symbol)
        else:
            with mpmath.workprec(LOG_BITS):
                bits = mpmath.log(q.denominator, 2) - mpmath.log(q.numerator, 2)
        records.append(TraceRecord(walk.position, symbol, weights, q, bits))
        weight = walk.advance(symbol)
        if tree is not None and not walk.is_singleton:
            tree.change_weight(symbol, weight)
    logger.debug("traced %d positions of %s/%s", len(records), engine, variant.label)
    return records


def write_trace_csv(records, stream):
    writer = csv.DictWriter(stream, fieldnames=TRACE_COLUMNS)
    writer.writeheader()
    for record in records:
        writer.writerow(record.as_row())
    return len(records)
