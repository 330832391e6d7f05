"""Symbol -> subinterval mapping: active symbols in ascending byte order."""
from bisect import bisect_right
from math import floor, lcm

from weights.exceptions import EmptyModelError, UnknownSymbolError
from weights.numbers import to_fraction

# Streaming frequencies are rescaled to about this total.
FREQUENCY_LIMIT = 1 << 32


class CumulativeLayout:
    def __init__(self, symbols, frequencies):
        if not symbols:
            raise EmptyModelError("no symbol has positive weight")
        self.symbols = list(symbols)
        self.index = {symbol: position for position, symbol in enumerate(self.symbols)}
        self.cumulative = [0]
        for frequency in frequencies:
            if frequency <= 0:
                raise EmptyModelError("every coded symbol needs a positive frequency")
            self.cumulative.append(self.cumulative[-1] + frequency)

    @property
    def total(self):
        return self.cumulative[-1]

    def __len__(self):
        return len(self.symbols)

    def interval(self, symbol):
        """(cumulative low, frequency) of a symbol."""
        try:
            position = self.index[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol} has no interval in the current model") from None
        low = self.cumulative[position]
        return low, self.cumulative[position + 1] - low

    def locate(self, value):
        """The symbol whose interval holds ``value`` (0 <= value < total)."""
        position = bisect_right(self.cumulative, value) - 1
        symbol = self.symbols[position]
        return symbol, self.cumulative[position], self.cumulative[position + 1] - self.cumulative[position]

    @classmethod
    def exact(cls, table):
        """Weights scaled by the lcm of their denominators: same probabilities, integer counts."""
        members = [(symbol, weight) for symbol, weight in sorted(table.weights.items()) if weight > 0]
        if all(isinstance(weight, int) for _symbol, weight in members):
            return cls([symbol for symbol, _weight in members], [weight for _symbol, weight in members])
        members = [(symbol, to_fraction(weight)) for symbol, weight in members]
        scale = lcm(*(weight.denominator for _symbol, weight in members)) if members else 1
        return cls(
            [symbol for symbol, _weight in members],
            [weight.numerator * (scale // weight.denominator) for _symbol, weight in members],
        )

    @classmethod
    def streaming(cls, table):
        """Integer frequencies under FREQUENCY_LIMIT.

        Integral weights with a small enough total are used as they are;
        anything else is mapped to max(1, floor(w * 2**32 / total)).
        """
        members = [(symbol, weight) for symbol, weight in sorted(table.weights.items()) if weight > 0]
        symbols = [symbol for symbol, _weight in members]
        if all(isinstance(weight, int) for _symbol, weight in members):
            total = sum(weight for _symbol, weight in members)
            if total < FREQUENCY_LIMIT:
                return cls(symbols, [weight for _symbol, weight in members])
            return cls(symbols, [max(1, weight * FREQUENCY_LIMIT // total) for _symbol, weight in members])
        exact = [to_fraction(weight) for _symbol, weight in members]
        total = sum(exact)
        return cls(symbols, [max(1, floor(weight * FREQUENCY_LIMIT / total)) for weight in exact])
