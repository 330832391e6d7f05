"""Arithmetic coders over CumulativeLayout intervals.

The exact coder keeps the interval [low / denominator, (low + width) / denominator)
as three Python integers and never rounds. The streaming coder is the usual
fixed-width low/high register with pending (underflow) bits.
"""
from dataclasses import dataclass

from weights.exceptions import ModelDesyncError

STATE_BITS = 62


@dataclass
class ArithCoderState:
    low: int = 0
    width: int = 1
    denominator: int = 1
    pending: int = 0


class ExactEncoder:
    def __init__(self):
        self.state = ArithCoderState()

    def encode(self, layout, symbol):
        low, frequency = layout.interval(symbol)
        total = layout.total
        state = self.state
        state.low = state.low * total + state.width * low
        state.width *= frequency
        state.denominator *= total

    def finish(self, out):
        """Emit the shortest dyadic interval [c / 2**k, (c + 1) / 2**k) inside the final interval."""
        state = self.state
        low, width, denominator = state.low, state.width, state.denominator
        k = max(0, (denominator // width).bit_length() - 1)
        while True:
            scaled = low << k
            code = -(-scaled // denominator)
            if (code + 1) * denominator <= (low + width) << k:
                break
            k += 1
        out.extend((code >> shift) & 1 for shift in range(k - 1, -1, -1))
        return k


class ExactDecoder:
    def __init__(self, payload):
        self.state = ArithCoderState()
        self.bits = len(payload) - payload.cursor
        self.code = 0
        for _ in range(self.bits):
            self.code = (self.code << 1) | payload.read()

    def decode(self, layout):
        state = self.state
        total = layout.total
        offset = self.code * state.denominator - (state.low << self.bits)
        if offset < 0:
            raise ModelDesyncError("code value fell below the current interval")
        value = offset * total // (state.width << self.bits)
        if value >= total:
            raise ModelDesyncError("code value fell above the current interval")
        symbol, low, frequency = layout.locate(value)
        state.low = state.low * total + state.width * low
        state.width *= frequency
        state.denominator *= total
        return symbol


class _StreamingBase:
    FULL = 1 << STATE_BITS
    HALF = FULL >> 1
    QUARTER = HALF >> 1
    MASK = FULL - 1

    def __init__(self):
        self.low = 0
        self.high = self.MASK

    def _narrow(self, layout, low, frequency):
        span = self.high - self.low + 1
        total = layout.total
        self.high = self.low + (low + frequency) * span // total - 1
        self.low = self.low + low * span // total
        while not (self.low ^ self.high) & self.HALF:
            self._shift()
            self.low = (self.low << 1) & self.MASK
            self.high = ((self.high << 1) & self.MASK) | 1
        while self.low & ~self.high & self.QUARTER:
            self._underflow()
            self.low = (self.low << 1) & (self.MASK >> 1)
            self.high = ((self.high << 1) & (self.MASK >> 1)) | self.HALF | 1


class StreamingEncoder(_StreamingBase):
    def __init__(self, out):
        super().__init__()
        self.out = out
        self.pending = 0

    def encode(self, layout, symbol):
        low, frequency = layout.interval(symbol)
        self._narrow(layout, low, frequency)

    def _emit(self, bit):
        self.out.write(bit)
        for _ in range(self.pending):
            self.out.write(bit ^ 1)
        self.pending = 0

    def _shift(self):
        self._emit(self.low >> (STATE_BITS - 1))

    def _underflow(self):
        self.pending += 1

    def finish(self):
        """Two disambiguating bits (plus pending ones) select a quarter inside [low, high]."""
        self.pending += 1
        self._emit(0 if self.low < self.QUARTER else 1)


class StreamingDecoder(_StreamingBase):
    def __init__(self, payload):
        super().__init__()
        self.payload = payload
        self.code = 0
        for _ in range(STATE_BITS):
            self.code = (self.code << 1) | payload.read_or_zero()

    def decode(self, layout):
        span = self.high - self.low + 1
        offset = self.code - self.low
        value = ((offset + 1) * layout.total - 1) // span
        if not 0 <= value < layout.total:
            raise ModelDesyncError("code value left the current interval")
        symbol, low, frequency = layout.locate(value)
        self._narrow(layout, low, frequency)
        return symbol

    def _shift(self):
        self.code = ((self.code << 1) & self.MASK) | self.payload.read_or_zero()

    def _underflow(self):
        self.code = (self.code & self.HALF) | ((self.code << 1) & (self.MASK >> 1)) | self.payload.read_or_zero()
