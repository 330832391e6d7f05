"""Canonical byte-level primitives: LEB128 varints, big magnitudes, rationals, bitmaps."""
from fractions import Fraction

from weights.exceptions import HeaderError, NonCanonicalError

BITMAP_BYTES = 32


def write_varint(out, value):
    if value < 0:
        raise HeaderError(f"varints are unsigned, got {value}")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return out


def write_magnitude(out, value):
    """Byte length as a varint, then big-endian bytes with no leading zero."""
    if value < 0:
        raise HeaderError(f"magnitudes are unsigned, got {value}")
    size = (value.bit_length() + 7) // 8
    write_varint(out, size)
    out.extend(value.to_bytes(size, 'big'))
    return out


def write_rational(out, value):
    value = Fraction(value)
    write_varint(out, value.numerator)
    write_varint(out, value.denominator)
    return out


def write_bitmap(out, symbols):
    bitmap = bytearray(BITMAP_BYTES)
    for symbol in symbols:
        bitmap[symbol >> 3] |= 0x80 >> (symbol & 7)
    out.extend(bitmap)
    return out


class Reader:
    """Cursor over bytes; every read is strict about truncation and canonical form."""

    def __init__(self, data, offset=0):
        self.data = bytes(data)
        self.offset = offset

    @property
    def remaining(self):
        return len(self.data) - self.offset

    def take(self, size, what="data"):
        if size > self.remaining:
            raise HeaderError(f"truncated {what}: need {size} bytes, {self.remaining} left")
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def byte(self, what="byte"):
        return self.take(1, what)[0]

    def varint(self, what="varint"):
        value = 0
        shift = 0
        while True:
            byte = self.byte(what)
            value |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                if byte == 0 and shift > 7:
                    raise NonCanonicalError(f"{what} has a redundant trailing zero group")
                return value

    def magnitude(self, what="magnitude"):
        size = self.varint(what)
        chunk = self.take(size, what)
        if size and chunk[0] == 0:
            raise NonCanonicalError(f"{what} has a leading zero byte")
        return int.from_bytes(chunk, 'big')

    def rational(self, what="rational"):
        numerator = self.varint(what)
        denominator = self.varint(what)
        if denominator == 0:
            raise HeaderError(f"{what} has a zero denominator")
        value = Fraction(numerator, denominator)
        if value.denominator != denominator:
            raise NonCanonicalError(f"{what} {numerator}/{denominator} is not in lowest terms")
        return value

    def bitmap(self, what="alphabet bitmap"):
        chunk = self.take(BITMAP_BYTES, what)
        return [index * 8 + bit for index, byte in enumerate(chunk) for bit in range(8) if byte & (0x80 >> bit)]
