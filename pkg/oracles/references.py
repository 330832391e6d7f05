"""Brute-force references for the engines.

Everything here is recomputed from scratch at every position, straight from
the weight definition. Nothing is imported from the weight, Huffman or
arithmetic packages: g is written out per family below and models are plain
dicts.
"""
from fractions import Fraction

import mpmath

LOG_BITS = 128
ROOT_BITS = 64


def _root_floor(value, degree):
    """Largest r with r ** degree <= value, by bisection."""
    low, high = 0, 1
    while high ** degree <= value:
        high <<= 1
    while high - low > 1:
        middle = (low + high) // 2
        if middle ** degree <= value:
            low = middle
        else:
            high = middle
    return low


def oracle_g(spec, i, n):
    """g(i) for a text of length n, as an int or Fraction."""
    distance = n - i + 1
    family = str(spec.family)
    if family == 'const':
        return 1
    if family == 'pos':
        return distance
    if family == 'interp':
        return min(spec.j, distance)
    if family == 'exp2':
        return 2 ** (n - i)
    if family == 'exp':
        return Fraction(spec.base) ** (n - i)
    if family == 'poly':
        k = Fraction(spec.k)
        if k.denominator == 1:
            return distance ** k.numerator
        # floor(distance**k * 2**64) / 2**64
        root = _root_floor(distance ** k.numerator * 2 ** (ROOT_BITS * k.denominator), k.denominator)
        return Fraction(root, 2 ** ROOT_BITS)
    raise ValueError(f"no reference for weight family {family!r}")


def _reduced(weights):
    return {symbol: weight.numerator if isinstance(weight, Fraction) and weight.denominator == 1 else weight
            for symbol, weight in weights.items()}


def oracle_weights(text, spec, i):
    """W(g, sigma, i, n) for every symbol of text, by literal summation (zeros kept)."""
    n = len(text)
    weights = {symbol: 0 for symbol in set(text)}
    for j in range(i, n + 1):
        weights[text[j - 1]] += oracle_g(spec, j, n)
    return _reduced(weights)


def oracle_backward_weights(text, spec, i, alphabet=None, smoothing=0):
    """W(g, sigma, 1, i - 1) plus smoothing, over the agreed alphabet."""
    n = len(text)
    weights = {symbol: smoothing for symbol in set(alphabet if alphabet is not None else text)}
    for j in range(1, i):
        weights[text[j - 1]] += oracle_g(spec, j, n)
    return _reduced(weights)


def oracle_huffman_cost(weights):
    """Optimal sum of weight * depth by repeated min-merge on a plain list."""
    pool = list(dict(weights).values())
    cost = 0
    while len(pool) > 1:
        pool.sort()
        merged = pool.pop(0) + pool.pop(0)
        cost += merged
        pool.append(merged)
    return cost


def _positive(weights):
    return {symbol: weight for symbol, weight in weights.items() if weight > 0}


class _Constant:
    family = 'const'


def oracle_model(text, variant, i, alphabet=None, smoothing=0):
    """The coding alphabet and weights in force at position i."""
    kind = str(variant.kind)
    if kind == 'static':
        return _positive(oracle_weights(text, _Constant, 1))
    if kind == 'backward':
        return oracle_backward_weights(text, variant.spec, i, alphabet, smoothing)
    return _positive(oracle_weights(text, variant.spec, i))


def oracle_forward_cost(text, spec):
    """Huffman cost of the forward model at every position 1..n."""
    return [oracle_huffman_cost(_positive(oracle_weights(text, spec, i))) for i in range(1, len(text) + 1)]


def oracle_probability_product(text, variant, alphabet=None, smoothing=0):
    product = Fraction(1)
    for i, symbol in enumerate(text, 1):
        model = oracle_model(text, variant, i, alphabet, smoothing)
        if len(model) == 1:
            break
        product *= Fraction(model[symbol]) / sum(model.values())
    return product


def log2_inverse(product):
    """-log2 of a positive rational, at LOG_BITS of precision."""
    product = Fraction(product)
    with mpmath.workprec(LOG_BITS):
        return mpmath.log(mpmath.mpf(product.denominator), 2) - mpmath.log(mpmath.mpf(product.numerator), 2)
