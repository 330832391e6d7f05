"""Entropy, cross-entropy and Kullback-Leibler divergence over exact distributions.

Probabilities stay exact Fractions; only the logarithms are evaluated, at
LOG_BITS of binary precision.
"""
from fractions import Fraction

import mpmath

from weights.exceptions import InvalidDistributionError, SupportMismatchError

LOG_BITS = 128


class Distribution:
    """Symbol -> exact probability; every value nonnegative, summing to exactly 1."""

    def __init__(self, probabilities):
        values = {}
        for symbol, probability in dict(probabilities).items():
            try:
                probability = Fraction(probability)
            except (TypeError, ValueError) as exc:
                raise InvalidDistributionError(f"probability of {symbol!r} is not a rational: {exc}") from exc
            if probability < 0:
                raise InvalidDistributionError(f"probability of {symbol!r} is negative")
            values[symbol] = probability
        if not values:
            raise InvalidDistributionError("distribution has no symbols")
        if sum(values.values()) != 1:
            raise InvalidDistributionError(f"probabilities sum to {sum(values.values())}, not 1")
        self.probabilities = values

    @classmethod
    def from_weights(cls, weights):
        """Normalize nonnegative weights (a WeightTable or a mapping)."""
        weights = weights.exact_weights() if hasattr(weights, 'exact_weights') else dict(weights)
        total = sum(Fraction(weight) for weight in weights.values())
        if total <= 0:
            raise InvalidDistributionError("weights have no positive mass")
        return cls({symbol: Fraction(weight) / total for symbol, weight in weights.items()})

    def __getitem__(self, symbol):
        return self.probabilities.get(symbol, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.support == other.support and all(self[s] == other[s] for s in self.support)

    def __repr__(self):
        return f"Distribution({self.probabilities!r})"

    @property
    def support(self):
        return {symbol for symbol, probability in self.probabilities.items() if probability > 0}

    def perturbed(self, a, b, x):
        """Move mass x from symbol a to symbol b."""
        x = Fraction(x)
        moved = dict(self.probabilities)
        moved[a] = self[a] - x
        moved[b] = self[b] + x
        return Distribution(moved)


def _as_distribution(value):
    return value if isinstance(value, Distribution) else Distribution(value)


def _mpf(value):
    return mpmath.mpf(value.numerator) / value.denominator


def _log2(probability):
    return mpmath.log(mpmath.mpf(probability.numerator), 2) - mpmath.log(mpmath.mpf(probability.denominator), 2)


def entropy(p):
    """-sum p log2 p in bits, with 0 log 0 = 0."""
    p = _as_distribution(p)
    with mpmath.workprec(LOG_BITS):
        total = mpmath.mpf(0)
        for symbol in p.support:
            total -= _mpf(p[symbol]) * _log2(p[symbol])
        return +total


def cross_entropy(p, q):
    """-sum p log2 q in bits."""
    p, q = _as_distribution(p), _as_distribution(q)
    _check_support(p, q)
    with mpmath.workprec(LOG_BITS):
        total = mpmath.mpf(0)
        for symbol in p.support:
            total -= _mpf(p[symbol]) * _log2(q[symbol])
        return +total


def kl_divergence(p, q):
    """sum p log2 (p / q) in bits; exactly 0 when p == q."""
    p, q = _as_distribution(p), _as_distribution(q)
    _check_support(p, q)
    if p == q:
        return mpmath.mpf(0)
    with mpmath.workprec(LOG_BITS):
        total = mpmath.mpf(0)
        for symbol in p.support:
            total += _mpf(p[symbol]) * _log2(p[symbol] / q[symbol])
        return +total


def kl_perturbation_curve(p, a, b, xs):
    """[(x, D(p || p moved by x from a to b)) for x in xs]."""
    p = _as_distribution(p)
    return [(Fraction(x), kl_divergence(p, p.perturbed(a, b, x))) for x in xs]


def _check_support(p, q):
    missing = sorted(p.support - q.support, key=repr)
    if missing:
        raise SupportMismatchError(f"q gives probability 0 to {missing!r}, which p uses")
