"""The model header: everything a decoder needs besides the payload bits."""
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from django.db import models

from weights.exceptions import HeaderError, NonCanonicalError
from weights.functions import Family, WeightFunctionSpec
from weights.numbers import NumberField
from weights.tables import WeightTable, init_backward_table
from weights.trajectory import CodingVariant, ModelTrajectory, Variant

from .varints import Reader, write_bitmap, write_magnitude, write_rational, write_varint


class Engine(models.TextChoices):
    HUFFMAN = 'huffman', 'Huffman'
    ARITHMETIC = 'arith', 'Arithmetic'


class Mode(models.TextChoices):
    EXACT = 'exact', 'Exact'
    STREAMING = 'streaming', 'Streaming'


# Wire tags are list positions; append only.
ENGINE_TAGS = [Engine.HUFFMAN, Engine.ARITHMETIC]
VARIANT_TAGS = [Variant.STATIC, Variant.BACKWARD, Variant.FORWARD, Variant.WEIGHTED]
MODE_TAGS = [Mode.EXACT, Mode.STREAMING]
FAMILY_TAGS = [
    Family.CONSTANT,
    Family.POSITIONAL,
    Family.POLYNOMIAL,
    Family.EXPONENTIAL_BASE,
    Family.EXPONENTIAL_POW2,
    Family.INTERPOLATED,
]

INTEGER_WEIGHTS = 0
RATIONAL_WEIGHTS = 1


def _tag(tags, value, what):
    try:
        return tags.index(value)
    except ValueError:
        raise HeaderError(f"no wire tag for {what} {value!r}") from None


def _untag(tags, tag, what):
    if tag >= len(tags):
        raise HeaderError(f"unknown {what} tag {tag}")
    return tags[tag]


@dataclass
class ModelHeader:
    engine: str
    variant: CodingVariant
    n: int
    mode: str = Mode.EXACT
    # Mantissa bits of the fast weight field; None for exact weights.
    precision: int | None = None
    # Backward models only: the alphabet both sides agree on.
    alphabet: tuple = ()
    # Forward, weighted and static models: initial weights as exact rationals.
    weights: dict = dataclass_field(default_factory=dict)
    # Forward models in a fast field: occurrences of every symbol.
    counts: dict | None = None

    @classmethod
    def describe(cls, engine, walk, mode=Mode.EXACT):
        """Header for a trajectory that has not advanced yet."""
        variant = walk.variant
        header = cls(
            engine=Engine(engine),
            variant=variant,
            n=walk.n,
            mode=Mode(mode),
            precision=walk.field.bits,
        )
        if variant.kind == Variant.BACKWARD:
            header.alphabet = tuple(walk.table.members)
        else:
            header.weights = walk.model_weights()
            if walk.counts is not None:
                header.counts = dict(sorted(walk.counts.items()))
        return header

    @property
    def field(self):
        return NumberField(self.precision)

    @property
    def smoothing(self):
        """Backward arithmetic starts every symbol at 1 so none has probability zero."""
        return 1 if self.engine == Engine.ARITHMETIC and self.variant.kind == Variant.BACKWARD else 0

    def initial_table(self):
        field = self.field
        if self.variant.kind == Variant.BACKWARD:
            return init_backward_table(self.alphabet, initial=self.smoothing, field=field)
        if self.variant.kind == Variant.STATIC or field.exact:
            return WeightTable(dict(self.weights))
        return WeightTable({symbol: field.coerce(weight) for symbol, weight in self.weights.items()}, field=field)

    def trajectory(self):
        return ModelTrajectory(self.variant, self.n, self.initial_table(), self.field, self.counts)

    def model_section(self):
        """The serialized initial model; empty for backward coding."""
        if self.variant.kind == Variant.BACKWARD:
            return b""
        out = bytearray()
        symbols = sorted(self.weights)
        write_bitmap(out, symbols)
        values = [Fraction(self.weights[symbol]) for symbol in symbols]
        if all(value.denominator == 1 for value in values):
            out.append(INTEGER_WEIGHTS)
            for value in values:
                write_magnitude(out, value.numerator)
        else:
            out.append(RATIONAL_WEIGHTS)
            for value in values:
                write_magnitude(out, value.numerator)
                write_magnitude(out, value.denominator)
        if self.counts is not None:
            for symbol in symbols:
                write_varint(out, self.counts[symbol])
        return bytes(out)

    @property
    def header_bits(self):
        return len(self.model_section()) * 8


def write_spec(out, spec):
    out.append(_tag(FAMILY_TAGS, spec.family, "weight family"))
    if spec.family == Family.POLYNOMIAL:
        write_rational(out, spec.k)
    elif spec.family == Family.EXPONENTIAL_BASE:
        write_rational(out, spec.base)
    elif spec.family == Family.INTERPOLATED:
        write_varint(out, spec.j)
    return out


def read_spec(reader):
    family = _untag(FAMILY_TAGS, reader.byte("weight family"), "weight family")
    try:
        if family == Family.POLYNOMIAL:
            return WeightFunctionSpec.polynomial(reader.rational("exponent k"))
        if family == Family.EXPONENTIAL_BASE:
            return WeightFunctionSpec.exponential(reader.rational("base"))
        if family == Family.INTERPOLATED:
            return WeightFunctionSpec.interpolated(reader.varint("j"))
        return WeightFunctionSpec(family)
    except HeaderError:
        raise
    except ValueError as exc:
        raise HeaderError(f"invalid weight function in header: {exc}") from exc


def write_descriptor(out, header):
    out.append(_tag(ENGINE_TAGS, header.engine, "engine"))
    out.append(_tag(VARIANT_TAGS, header.variant.kind, "variant"))
    out.append(_tag(MODE_TAGS, header.mode, "mode"))
    write_varint(out, header.precision or 0)
    write_spec(out, header.variant.spec)
    return out


def read_descriptor(reader):
    engine = _untag(ENGINE_TAGS, reader.byte("engine"), "engine")
    kind = _untag(VARIANT_TAGS, reader.byte("variant"), "variant")
    mode = _untag(MODE_TAGS, reader.byte("mode"), "mode")
    precision = reader.varint("precision") or None
    if precision is not None and precision < 64:
        raise HeaderError(f"fast weight field needs at least 64 bits, header says {precision}")
    spec = read_spec(reader)
    try:
        variant = CodingVariant(kind, spec)
    except ValueError as exc:
        raise HeaderError(str(exc)) from exc
    return engine, variant, mode, precision


def read_model_section(reader, header):
    """Fill ``header.weights`` (and counts) from a model section."""
    symbols = reader.bitmap()
    if not symbols:
        raise HeaderError("model section lists no symbols")
    kind = reader.byte("weight kind")
    weights = {}
    if kind == INTEGER_WEIGHTS:
        for symbol in symbols:
            weights[symbol] = reader.magnitude("weight")
    elif kind == RATIONAL_WEIGHTS:
        for symbol in symbols:
            numerator = reader.magnitude("weight numerator")
            denominator = reader.magnitude("weight denominator")
            if denominator == 0:
                raise HeaderError(f"weight of symbol {symbol} has a zero denominator")
            value = Fraction(numerator, denominator)
            if value.denominator != denominator:
                raise NonCanonicalError(f"weight of symbol {symbol} is not in lowest terms")
            weights[symbol] = value.numerator if denominator == 1 else value
        if all(isinstance(value, int) for value in weights.values()):
            raise NonCanonicalError("integer weights stored in rational form")
    else:
        raise HeaderError(f"unknown weight kind {kind}")
    if any(value <= 0 for value in weights.values()):
        raise HeaderError("model section stores a zero weight")
    header.weights = weights

    if header.precision is not None and header.variant.is_forward:
        counts = {symbol: reader.varint("symbol count") for symbol in symbols}
        if any(count <= 0 for count in counts.values()) or sum(counts.values()) != header.n:
            raise HeaderError("symbol counts do not add up to the text length")
        header.counts = counts
    if header.variant.kind in (Variant.STATIC, Variant.FORWARD) and sum(weights.values()) != header.n:
        raise HeaderError("occurrence counts do not add up to the text length")
    return header


def serialize_header(header):
    """Descriptor, length, backward alphabet and model section, in that order."""
    out = bytearray()
    write_descriptor(out, header)
    write_varint(out, header.n)
    model = header.model_section()
    write_varint(out, len(model) * 8)
    if header.variant.kind == Variant.BACKWARD:
        write_bitmap(out, header.alphabet)
    out.extend(model)
    return bytes(out)


def read_header(reader):
    engine, variant, mode, precision = read_descriptor(reader)
    n = reader.varint("text length")
    if n < 1:
        raise HeaderError("text length must be positive")
    try:
        variant.spec.check_length(n)
    except ValueError as exc:
        raise HeaderError(f"weight function does not fit the text: {exc}") from exc
    header = ModelHeader(engine=engine, variant=variant, n=n, mode=mode, precision=precision)
    model_bits = reader.varint("header bits")
    if model_bits % 8:
        raise HeaderError(f"model section of {model_bits} bits is not whole bytes")
    if variant.kind == Variant.BACKWARD:
        alphabet = reader.bitmap()
        if not alphabet:
            raise HeaderError("backward alphabet is empty")
        header.alphabet = tuple(alphabet)
        if model_bits:
            raise HeaderError("backward coding carries no model section")
        return header
    section = Reader(reader.take(model_bits // 8, "model section"))
    read_model_section(section, header)
    if section.remaining:
        raise HeaderError(f"{section.remaining} unread bytes in the model section")
    return header


def parse_header(data):
    reader = Reader(data)
    header = read_header(reader)
    if reader.remaining:
        raise HeaderError(f"{reader.remaining} trailing bytes after the header")
    return header
