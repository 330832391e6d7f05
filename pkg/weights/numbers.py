"""Number fields the weight models compute in.

Exact weights are Python ``int`` or ``fractions.Fraction`` and never round.
Fast weights are mpmath binary floats with a fixed mantissa width; they are
meant for corpus-scale runs and are never used for exactness assertions.
"""
from fractions import Fraction
from functools import lru_cache

import mpmath

FAST_DEFAULT_BITS = 64


@lru_cache(maxsize=None)
def _context(bits):
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


class NumberField:
    """Either the exact rationals (``bits is None``) or binary floats of ``bits`` mantissa bits."""

    def __init__(self, bits=None):
        if bits is not None and bits < FAST_DEFAULT_BITS:
            raise ValueError(f"fast mode needs at least {FAST_DEFAULT_BITS} mantissa bits, got {bits}")
        self.bits = bits
        self.ctx = _context(bits) if bits is not None else None

    @classmethod
    def fast(cls, bits=FAST_DEFAULT_BITS):
        return cls(bits)

    @property
    def exact(self):
        return self.bits is None

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.bits == self.bits

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return "NumberField(exact)" if self.exact else f"NumberField(fast, bits={self.bits})"

    def coerce(self, value):
        """Bring an int, Fraction or mpf into this field."""
        if self.exact:
            if isinstance(value, (int, Fraction)):
                return normalize(value)
            return normalize(to_fraction(value))
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / value.denominator
        return self.ctx.mpf(value)

    def zero(self):
        return 0 if self.exact else self.ctx.mpf(0)

    def ratio(self, numerator, denominator):
        if self.exact:
            return Fraction(numerator) / denominator
        return self.ctx.mpf(numerator) / denominator

    def power(self, base, exponent):
        """base ** exponent for a nonnegative integer exponent."""
        if self.exact:
            return normalize(Fraction(base) ** exponent)
        return self.ctx.power(self.coerce(base), exponent)

    def floor(self, value):
        if self.exact:
            return value.__floor__() if isinstance(value, Fraction) else int(value)
        return int(self.ctx.floor(value))


def normalize(value):
    """Collapse integral Fractions to int so integer models stay on the fast int path."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def to_fraction(value):
    """Exact rational value of an int, Fraction or mpf (an mpf is a dyadic rational)."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    sign, man, exp, _ = value._mpf_
    if not man:
        if exp:
            raise ValueError(f"non-finite weight {value!r}")
        return Fraction(0)
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def integer_root(value, degree):
    """floor(value ** (1/degree)) for nonnegative integers, by Newton iteration."""
    if value < 0 or degree < 1:
        raise ValueError("integer_root needs value >= 0 and degree >= 1")
    if value < 2 or degree == 1:
        return value
    guess = 1 << -(-value.bit_length() // degree)
    while True:
        better = ((degree - 1) * guess + value // guess ** (degree - 1)) // degree
        if better >= guess:
            break
        guess = better
    while guess ** degree > value:
        guess -= 1
    while (guess + 1) ** degree <= value:
        guess += 1
    return guess
