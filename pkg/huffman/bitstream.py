from weights.exceptions import TruncatedStreamError


class BitStream:
    """Append-only bit sequence with a read cursor. Bits are packed MSB first."""

    def __init__(self, bits=b""):
        self.bits = bytearray(bits)
        self.cursor = 0

    @classmethod
    def from_bytes(cls, data, length=None):
        if length is None:
            length = len(data) * 8
        if length > len(data) * 8:
            raise TruncatedStreamError(f"{length} bits declared, only {len(data) * 8} available")
        stream = cls()
        bits = stream.bits
        for byte in data[:(length + 7) // 8]:
            bits.extend((byte >> shift) & 1 for shift in range(7, -1, -1))
        del bits[length:]
        return stream

    @classmethod
    def from_string(cls, text):
        return cls(int(ch) for ch in text)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join("1" if bit else "0" for bit in self.bits)

    def __eq__(self, other):
        if not isinstance(other, BitStream):
            return NotImplemented
        return self.bits == other.bits

    @property
    def length(self):
        return len(self.bits)

    @property
    def remaining(self):
        return len(self.bits) - self.cursor

    def write(self, bit):
        self.bits.append(1 if bit else 0)

    def extend(self, bits):
        self.bits.extend(1 if bit else 0 for bit in bits)

    def read(self):
        if self.cursor >= len(self.bits):
            raise TruncatedStreamError(f"stream ended after {len(self.bits)} bits")
        bit = self.bits[self.cursor]
        self.cursor += 1
        return bit

    def read_or_zero(self):
        """Past the end, read zeros (arithmetic decoders look ahead of the payload)."""
        if self.cursor >= len(self.bits):
            self.cursor += 1
            return 0
        return self.read()

    def rewind(self):
        self.cursor = 0
        return self

    def to_bytes(self):
        """Pack into bytes, zero-padding the last one."""
        out = bytearray((len(self.bits) + 7) // 8)
        for index, bit in enumerate(self.bits):
            if bit:
                out[index >> 3] |= 0x80 >> (index & 7)
        return bytes(out)
