"""Position weight functions g: [1, n] -> nonnegative weights."""
from dataclasses import dataclass
from fractions import Fraction

from django.db import models

from .exceptions import InvalidSpecError, PositionError
from .numbers import NumberField, integer_root, normalize

EXACT = NumberField()

# Non-integer exponents are evaluated as floor(x**k * 2**64) / 2**64.
FRACTIONAL_BITS = 64


class Family(models.TextChoices):
    CONSTANT = 'const', 'Constant'
    POSITIONAL = 'pos', 'Positional'
    POLYNOMIAL = 'poly', 'Polynomial (n-i+1)^k'
    EXPONENTIAL_BASE = 'exp', 'Exponential l^(n-i)'
    EXPONENTIAL_POW2 = 'exp2', 'Exponential 2^(n-i)'
    INTERPOLATED = 'interp', 'Interpolated g_j'


def _rational(value, name):
    if value is None:
        raise InvalidSpecError(f"{name} is required")
    if isinstance(value, float):
        value = str(value)
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidSpecError(f"{name} must be a rational number, got {value!r}") from exc


@dataclass(frozen=True)
class WeightFunctionSpec:
    family: str = Family.CONSTANT
    k: Fraction | None = None
    base: Fraction | None = None
    j: int | None = None

    def __post_init__(self):
        try:
            family = Family(self.family)
        except ValueError as exc:
            raise InvalidSpecError(f"unknown weight family {self.family!r}") from exc
        object.__setattr__(self, 'family', family)

        if family == Family.POLYNOMIAL:
            k = _rational(self.k, "k")
            if k < 0:
                raise InvalidSpecError(f"k must be nonnegative, got {k}")
            object.__setattr__(self, 'k', k)
        elif self.k is not None:
            raise InvalidSpecError("k only applies to the polynomial family")

        if family == Family.EXPONENTIAL_BASE:
            base = _rational(self.base, "base")
            if base <= 1:
                raise InvalidSpecError(f"base must exceed 1, got {base}")
            object.__setattr__(self, 'base', base)
        elif self.base is not None:
            raise InvalidSpecError("base only applies to the exponential family")

        if family == Family.INTERPOLATED:
            if not isinstance(self.j, int) or isinstance(self.j, bool) or self.j < 1:
                raise InvalidSpecError(f"j must be a positive integer, got {self.j!r}")
        elif self.j is not None:
            raise InvalidSpecError("j only applies to the interpolated family")

    @classmethod
    def constant(cls):
        return cls(Family.CONSTANT)

    @classmethod
    def positional(cls):
        return cls(Family.POSITIONAL)

    @classmethod
    def polynomial(cls, k):
        return cls(Family.POLYNOMIAL, k=k)

    @classmethod
    def exponential(cls, base):
        return cls(Family.EXPONENTIAL_BASE, base=base)

    @classmethod
    def exp2(cls):
        return cls(Family.EXPONENTIAL_POW2)

    @classmethod
    def interpolated(cls, j):
        return cls(Family.INTERPOLATED, j=j)

    @classmethod
    def parse(cls, token):
        """Parse the command-line form: const, pos, poly:k, exp:l, exp2, interp:j."""
        name, _, arg = token.strip().partition(':')
        try:
            family = Family(name)
        except ValueError as exc:
            raise InvalidSpecError(f"unknown weight function {token!r}") from exc
        if family == Family.POLYNOMIAL:
            return cls.polynomial(arg)
        if family == Family.EXPONENTIAL_BASE:
            return cls.exponential(arg)
        if family == Family.INTERPOLATED:
            try:
                return cls.interpolated(int(arg))
            except ValueError as exc:
                raise InvalidSpecError(f"interp needs an integer j, got {arg!r}") from exc
        if arg:
            raise InvalidSpecError(f"{name} takes no parameter")
        return cls(family)

    @property
    def token(self):
        if self.family == Family.POLYNOMIAL:
            return f"poly:{_format_rational(self.k)}"
        if self.family == Family.EXPONENTIAL_BASE:
            return f"exp:{_format_rational(self.base)}"
        if self.family == Family.INTERPOLATED:
            return f"interp:{self.j}"
        return self.family.value

    @property
    def parameter(self):
        """The family's free parameter (k, l or j), or None."""
        if self.family == Family.POLYNOMIAL:
            return self.k
        if self.family == Family.EXPONENTIAL_BASE:
            return self.base
        if self.family == Family.INTERPOLATED:
            return self.j
        return None

    def check_length(self, n):
        if n < 1:
            raise PositionError(f"text length must be positive, got {n}")
        if self.family == Family.INTERPOLATED and self.j > n:
            raise InvalidSpecError(f"interp j={self.j} exceeds text length {n}")


def _format_rational(value):
    if value.denominator == 1:
        return str(value.numerator)
    # Prefer the decimal spelling when it is exact (0.5, 1.0004).
    decimals = 0
    scaled = value
    while scaled.denominator != 1 and decimals < 40:
        scaled *= 10
        decimals += 1
    if scaled.denominator == 1:
        text = f"{scaled.numerator:0{decimals + 1}d}"
        return f"{text[:-decimals]}.{text[-decimals:]}"
    return f"{value.numerator}/{value.denominator}"


def _fractional_power(x, k):
    """Deterministic floor(x**k * 2**64) / 2**64 for a non-integer rational k."""
    root = integer_root(x ** k.numerator << (FRACTIONAL_BITS * k.denominator), k.denominator)
    return normalize(Fraction(root, 1 << FRACTIONAL_BITS))


def eval_g(spec, i, n, field=EXACT):
    """Exact value of g at position i of a text of length n."""
    spec.check_length(n)
    if not 1 <= i <= n:
        raise PositionError(f"position {i} outside [1, {n}]")
    distance = n - i + 1
    family = spec.family

    if family == Family.CONSTANT:
        value = 1
    elif family == Family.POSITIONAL:
        value = distance
    elif family == Family.INTERPOLATED:
        value = min(spec.j, distance)
    elif family == Family.EXPONENTIAL_POW2:
        if not field.exact:
            return field.ctx.ldexp(1, n - i)
        value = 1 << (n - i)
    elif family == Family.EXPONENTIAL_BASE:
        return field.power(spec.base, n - i)
    elif spec.k.denominator == 1:
        value = distance ** spec.k.numerator
    elif field.exact:
        return _fractional_power(distance, spec.k)
    else:
        return field.ctx.power(distance, field.coerce(spec.k))
    return value if field.exact else field.coerce(value)


class PositionWeights:
    """The sequence g(1), ..., g(n) for one text length, 1-based."""

    def __init__(self, spec, n, field=EXACT):
        spec.check_length(n)
        self.spec = spec
        self.n = n
        self.field = field

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return eval_g(self.spec, i, self.n, self.field)

    def __iter__(self):
        if not self.field.exact:
            for i in range(1, self.n + 1):
                yield eval_g(self.spec, i, self.n, self.field)
            return
        denominator = self.denominator
        if denominator == 1:
            yield from self.numerators()
            return
        for value in self.numerators():
            yield normalize(Fraction(value, denominator))

    @property
    def denominator(self):
        """Common denominator D of g(1..n): every D * g(i) is an integer (1 outside the exact field)."""
        if not self.field.exact:
            return 1
        spec = self.spec
        if spec.family == Family.EXPONENTIAL_BASE:
            return spec.base.denominator ** (self.n - 1)
        if spec.family == Family.POLYNOMIAL and spec.k.denominator != 1:
            return 1 << FRACTIONAL_BITS
        return 1

    def numerators(self):
        """D * g(i) for i = 1..n as Python ints, lazily (exact field only)."""
        spec, n = self.spec, self.n
        family = spec.family
        if family == Family.EXPONENTIAL_BASE:
            p, q = spec.base.numerator, spec.base.denominator
            value = p ** (n - 1)
            for _ in range(n):
                yield value
                value = value // p * q
        elif family == Family.POLYNOMIAL and spec.k.denominator != 1:
            k = spec.k
            for distance in range(n, 0, -1):
                yield integer_root(distance ** k.numerator << (FRACTIONAL_BITS * k.denominator), k.denominator)
        elif family == Family.EXPONENTIAL_POW2:
            value = 1 << (n - 1)
            for _ in range(n):
                yield value
                value >>= 1
        else:
            for i in range(1, n + 1):
                yield eval_g(spec, i, n)

    def symbol_sums(self, text, scaled=False):
        """W(g, sigma, 1, n) for every symbol occurring in text; times D when ``scaled``."""
        if len(text) != self.n:
            raise PositionError(f"text has {len(text)} symbols, weights cover {self.n}")
        if not self.field.exact:
            sums = {}
            for symbol, value in zip(text, self):
                sums[symbol] = sums[symbol] + value if symbol in sums else value
            return sums
        sums = {}
        for symbol, value in zip(text, self.numerators()):
            sums[symbol] = sums.get(symbol, 0) + value
        denominator = self.denominator
        if scaled or denominator == 1:
            return sums
        return {symbol: normalize(Fraction(value, denominator)) for symbol, value in sums.items()}

    def tail_sum(self, start, scaled=False):
        """Sum of g(j) for start <= j <= n; times D when ``scaled``."""
        if not self.field.exact:
            total = self.field.zero()
            for i in range(start, self.n + 1):
                total += self[i]
            return total
        total = 0
        for position, value in enumerate(self.numerators(), 1):
            if position >= start:
                total += value
        if scaled:
            return total
        return normalize(Fraction(total, self.denominator))

    def minimum(self):
        # Every family is nonincreasing in i.
        return self[self.n]
