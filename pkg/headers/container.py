"""The on-disk container: magic, version, header, payload bit count, payload."""
from dataclasses import dataclass

from huffman.bitstream import BitStream
from weights.exceptions import BadMagicError, HeaderError, NonCanonicalError

from .header import read_header, serialize_header
from .varints import Reader, write_varint

MAGIC = b"WACx"
VERSION = 1


@dataclass
class ContainerFrame:
    header: object
    payload: BitStream
    magic: bytes = MAGIC
    version: int = VERSION
    total_bits: int = 0

    @property
    def n(self):
        return self.header.n

    @property
    def header_bits(self):
        return self.header.header_bits

    @property
    def payload_bits(self):
        return len(self.payload)


def write_container(header, payload):
    out = bytearray(MAGIC)
    out.append(VERSION)
    out.extend(serialize_header(header))
    write_varint(out, len(payload))
    out.extend(payload.to_bytes())
    return bytes(out)


def read_container(data):
    reader = Reader(data)
    magic = reader.take(len(MAGIC), "magic")
    if magic != MAGIC:
        raise BadMagicError(f"not a container: magic {magic!r}")
    version = reader.byte("version")
    if version != VERSION:
        raise HeaderError(f"unsupported container version {version}")
    header = read_header(reader)
    payload_bits = reader.varint("payload bits")
    size = (payload_bits + 7) // 8
    if reader.remaining < size:
        raise HeaderError(f"truncated payload: {payload_bits} bits declared, {reader.remaining} bytes left")
    if reader.remaining > size:
        raise HeaderError(f"{reader.remaining - size} trailing bytes after the payload")
    raw = reader.take(size, "payload")
    if payload_bits % 8 and raw[-1] & (0xFF >> (payload_bits % 8)):
        raise NonCanonicalError("payload padding bits are not zero")
    return ContainerFrame(
        header=header,
        payload=BitStream.from_bytes(raw, payload_bits),
        magic=magic,
        version=version,
        total_bits=len(data) * 8,
    )


def accounted_sizes(frame):
    """Bit accounting for reports: net = payload, header+coding = payload + model section."""
    total = frame.total_bits
    header_bits = frame.header_bits
    payload_bits = frame.payload_bits
    return {
        'payload_bits': payload_bits,
        'header_bits': header_bits,
        'frame_bits': total - header_bits - payload_bits,
        'total_bits': total,
    }
