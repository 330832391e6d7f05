"""The model walk every engine shares.

A trajectory starts from an initial WeightTable and, position by position,
applies the variant's update rule. Encoders, decoders, traces and the ideal
code length all step through the same object, so they cannot disagree about
the model at any position.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from django.db import models

from .exceptions import ModelDesyncError, ParameterError, PositionError
from .functions import EXACT, Family, PositionWeights, WeightFunctionSpec
from .numbers import normalize
from .tables import (
    WeightTable,
    init_backward_table,
    init_forward_table,
    probability_of,
    update_backward,
    update_forward,
)

logger = logging.getLogger(__name__)


class Variant(models.TextChoices):
    STATIC = 'static', 'Static'
    BACKWARD = 'backward', 'Backward (sibling-property)'
    FORWARD = 'forward', 'Forward'
    WEIGHTED = 'weighted', 'Weighted'


@dataclass(frozen=True)
class CodingVariant:
    kind: str
    spec: WeightFunctionSpec = dataclass_field(default_factory=WeightFunctionSpec.constant)

    def __post_init__(self):
        try:
            kind = Variant(self.kind)
        except ValueError as exc:
            raise ParameterError(f"unknown variant {self.kind!r}") from exc
        object.__setattr__(self, 'kind', kind)
        if kind in (Variant.STATIC, Variant.FORWARD) and self.spec.family != Family.CONSTANT:
            raise ParameterError(f"{kind.value} coding always uses the constant weight function")

    @classmethod
    def static(cls):
        return cls(Variant.STATIC)

    @classmethod
    def backward(cls, spec=None):
        return cls(Variant.BACKWARD, spec or WeightFunctionSpec.constant())

    @classmethod
    def forward(cls):
        return cls(Variant.FORWARD)

    @classmethod
    def weighted(cls, spec):
        return cls(Variant.WEIGHTED, spec)

    @classmethod
    def positional(cls):
        return cls.weighted(WeightFunctionSpec.positional())

    @classmethod
    def from_options(cls, variant, g=None):
        """Build a variant from command-line style options (``--variant``, ``--g``)."""
        spec = WeightFunctionSpec.parse(g) if g else None
        if variant == Variant.WEIGHTED:
            if spec is None:
                raise ParameterError("the weighted variant needs --g")
            return cls.weighted(spec)
        if variant == Variant.BACKWARD:
            return cls.backward(spec)
        if spec is not None and spec.family != Family.CONSTANT:
            raise ParameterError(f"--g {g} does not apply to the {variant} variant")
        return cls(variant)

    @property
    def is_forward(self):
        """Forward-looking variants consume weight and need the model in the header."""
        return self.kind in (Variant.FORWARD, Variant.WEIGHTED)

    @property
    def label(self):
        if self.kind == Variant.WEIGHTED:
            return f"Weighted({self.spec.token})"
        if self.kind == Variant.BACKWARD and self.spec.family != Family.CONSTANT:
            return f"{self.kind.label} g={self.spec.token}"
        return self.kind.label


def initial_table(text, variant, field=EXACT, smoothing=0, alphabet=None):
    """The table a coder starts from, as the decoder will rebuild it from the header."""
    if variant.kind == Variant.BACKWARD:
        return init_backward_table(alphabet if alphabet is not None else text, initial=smoothing, field=field)
    if variant.kind == Variant.STATIC:
        return init_forward_table(text)
    return init_forward_table(text, variant.spec, field)


class ModelTrajectory:
    """Walks positions 1..n, keeping ``table`` equal to the model at the current position.

    Exact walks keep ``table`` in integer units of 1/D, D being the common
    denominator of g(1..n) (``scale``): probabilities and code trees do not
    change under a common factor, and integers never need a gcd.
    ``model_weights()`` gives the true weights back.

    In a fast field the forward variants also carry the remaining occurrence
    count of every symbol: a symbol leaves the model exactly when its count
    reaches zero, and its weight is never allowed below count * g(n).
    """

    def __init__(self, variant, n, table, field=EXACT, counts=None, scaled=False):
        if n < 1:
            raise PositionError(f"text length must be positive, got {n}")
        self.variant = variant
        self.n = n
        self.field = field
        self.position = 1
        self.weights = PositionWeights(variant.spec, n, field)
        self.scale = self.weights.denominator
        self.table = table if scaled or self.scale == 1 else _scale_table(table, self.scale)
        self._deltas = self.weights.numerators() if field.exact else iter(self.weights)
        self.counts = dict(counts) if counts is not None else None
        if variant.is_forward and not field.exact:
            if self.counts is None:
                raise ParameterError("fast-field forward models need symbol counts")
            self._floor = self.weights.minimum()

    @classmethod
    def for_text(cls, text, variant, field=EXACT, smoothing=0, alphabet=None):
        counts = Counter(text) if variant.is_forward and not field.exact else None
        if field.exact and variant.kind == Variant.WEIGHTED and text:
            weights = PositionWeights(variant.spec, len(text), field)
            table = WeightTable(weights.symbol_sums(text, scaled=True))
            return cls(variant, len(text), table, field, counts, scaled=True)
        table = initial_table(text, variant, field, smoothing, alphabet)
        return cls(variant, len(text), table, field, counts)

    @property
    def remaining(self):
        return self.n - self.position + 1

    @property
    def finished(self):
        return self.position > self.n

    @property
    def members(self):
        return self.table.members

    @property
    def is_singleton(self):
        """One symbol left in the coding alphabet: nothing more needs to be sent."""
        return len(self.table) == 1

    def probability(self, symbol):
        return probability_of(self.table, symbol)

    def model_weights(self):
        """The current weights as exact rationals, in true units."""
        if self.scale == 1:
            return self.table.exact_weights()
        return {symbol: normalize(Fraction(weight, self.scale)) for symbol, weight in self.table.as_dict().items()}

    def advance(self, symbol):
        """Apply the update for ``symbol`` at the current position; return its new weight in table units."""
        if self.finished:
            raise PositionError(f"trajectory already consumed all {self.n} positions")
        delta = next(self._deltas)
        kind = self.variant.kind
        if kind == Variant.BACKWARD:
            update_backward(self.table, symbol, delta)
        elif kind != Variant.STATIC:
            if self.counts is None:
                update_forward(self.table, symbol, delta)
            else:
                self._advance_counted(symbol, delta)
        self.position += 1
        return self.table[symbol]

    def _advance_counted(self, symbol, delta):
        left = self.counts.get(symbol, 0) - 1
        if left < 0 or symbol not in self.table:
            raise ModelDesyncError(f"symbol {symbol} has no remaining occurrences")
        self.counts[symbol] = left
        if left == 0:
            self.table.assign(symbol, self.field.zero())
            return
        floor = left * self._floor
        self.table.assign(symbol, max(self.table.weights[symbol] - delta, floor))

    def infer_run(self):
        """The sole symbol and how many times it repeats until position n.

        Checks that the model agrees: exact forward models must hold exactly
        the weight of the remaining positions, counted models the remaining count.
        """
        if not self.is_singleton:
            raise ModelDesyncError("run inference requested with more than one symbol left")
        (symbol,) = self.table.members
        run = self.remaining
        if self.variant.is_forward:
            if self.counts is not None:
                if self.counts.get(symbol) != run:
                    raise ModelDesyncError(
                        f"model holds {self.counts.get(symbol)} occurrences of {symbol}, expected {run}"
                    )
            elif self.table.total != self.weights.tail_sum(self.position, scaled=True):
                raise ModelDesyncError(f"remaining weight does not match the last {run} positions")
        logger.debug("singleton inference: symbol %s repeats %d times from position %d", symbol, run, self.position)
        return symbol, run

    def finish(self, symbol, run):
        """Consume an inferred run so the table ends where a full walk would."""
        for _ in range(run):
            self.advance(symbol)


def _scale_table(table, scale):
    """The same table in integer units of 1 / scale."""
    weights = {}
    for symbol, weight in table.weights.items():
        weight = Fraction(weight)
        if scale % weight.denominator:
            raise ModelDesyncError(f"weight {weight} of symbol {symbol} is not a multiple of 1/{scale}")
        weights[symbol] = weight.numerator * (scale // weight.denominator)
    return WeightTable(weights, keep_zero=table.keep_zero, field=table.field)
