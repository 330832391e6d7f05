"""Per-symbol weight tables W(g, sigma, l, u) and their update rules."""
from fractions import Fraction

from .exceptions import EmptyInputError, EmptyModelError, UnderflowError, UnknownSymbolError
from .functions import EXACT, PositionWeights, WeightFunctionSpec
from .numbers import normalize, to_fraction


class WeightTable:
    """Live symbol weights with a cached total.

    Forward tables drop a symbol the moment its weight reaches zero. Backward
    tables (``keep_zero``) hold every alphabet symbol, zero or not.
    """

    def __init__(self, weights, keep_zero=False, field=EXACT):
        self.field = field
        self.keep_zero = keep_zero
        self.weights = {}
        self.total = field.zero()
        self.active_count = 0
        for symbol, weight in sorted(weights.items()):
            if weight < 0:
                raise UnderflowError(f"negative weight {weight} for symbol {symbol}")
            if weight == 0 and not keep_zero:
                continue
            self.weights[symbol] = weight
            self.total += weight
            if weight > 0:
                self.active_count += 1

    def __repr__(self):
        return f"WeightTable({self.as_dict()!r})"

    def __eq__(self, other):
        if not isinstance(other, WeightTable):
            return NotImplemented
        return self.weights == other.weights and self.keep_zero == other.keep_zero

    def __contains__(self, symbol):
        return symbol in self.weights

    def __getitem__(self, symbol):
        return self.weights.get(symbol, self.field.zero())

    def __len__(self):
        return len(self.weights)

    @property
    def members(self):
        """Symbols in the coding model, ascending."""
        return sorted(self.weights)

    @property
    def is_empty(self):
        return not self.weights

    def as_dict(self):
        return {symbol: self.weights[symbol] for symbol in self.members}

    def copy(self):
        clone = WeightTable.__new__(WeightTable)
        clone.field = self.field
        clone.keep_zero = self.keep_zero
        clone.weights = dict(self.weights)
        clone.total = self.total
        clone.active_count = self.active_count
        return clone

    def assign(self, symbol, weight):
        """Set one weight directly, keeping total and active_count current."""
        if symbol not in self.weights:
            raise UnknownSymbolError(f"symbol {symbol} is not in the model")
        if weight < 0:
            raise UnderflowError(f"weight of symbol {symbol} would become {weight}")
        old = self.weights[symbol]
        if weight == 0 and not self.keep_zero:
            del self.weights[symbol]
        else:
            self.weights[symbol] = weight
        self.total += weight - old
        self.active_count += (weight > 0) - (old > 0)
        if not self.weights:
            self.total = self.field.zero()
        return self

    def check(self):
        """Recompute total and active_count from scratch; raise if the cache drifted."""
        total = sum(self.weights.values(), self.field.zero())
        active = sum(1 for weight in self.weights.values() if weight > 0)
        if self.field.exact and total != self.total:
            raise AssertionError(f"cached total {self.total} != {total}")
        if active != self.active_count:
            raise AssertionError(f"cached active_count {self.active_count} != {active}")
        return True

    def exact_weights(self):
        """Weights as exact rationals, whatever field they were computed in."""
        return {symbol: normalize(to_fraction(weight)) for symbol, weight in self.as_dict().items()}


def init_forward_table(text, spec=None, field=EXACT):
    """weights[sigma] = W(g, sigma, 1, n); symbols absent from text are left out."""
    if not text:
        raise EmptyInputError("empty input")
    spec = spec or WeightFunctionSpec.constant()
    sums = PositionWeights(spec, len(text), field).symbol_sums(text)
    return WeightTable(sums, field=field)


def init_backward_table(alphabet, initial=0, field=EXACT):
    """Every alphabet symbol at the same starting weight (0, or 1 when smoothing)."""
    alphabet = set(alphabet)
    if not alphabet:
        raise EmptyInputError("empty alphabet")
    start = field.coerce(initial) if not field.exact else initial
    return WeightTable({symbol: start for symbol in alphabet}, keep_zero=True, field=field)


def update_forward(table, symbol, delta):
    if symbol not in table:
        raise UnknownSymbolError(f"symbol {symbol} is not in the model")
    current = table.weights[symbol]
    if delta > current:
        raise UnderflowError(
            f"weight of symbol {symbol} is {current}, cannot subtract {delta}"
        )
    return table.assign(symbol, current - delta)


def update_backward(table, symbol, delta):
    if symbol not in table:
        raise UnknownSymbolError(f"symbol {symbol} is not in the alphabet")
    return table.assign(symbol, table.weights[symbol] + delta)


def probability_of(table, symbol):
    """weights[sigma] / total: an exact Fraction in the exact field."""
    if not table.total:
        raise EmptyModelError("probability requested from an empty model")
    weight = table[symbol]
    if table.field.exact:
        return normalize(Fraction(weight) / table.total)
    return weight / table.total
