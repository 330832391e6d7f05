"""Hypothesis strategies and settings shared by the property suites."""
import os
import random

from hypothesis import HealthCheck, settings, strategies as st

from weights.functions import WeightFunctionSpec

# WACODE_PROPERTY_EXAMPLES scales every suite up for long acceptance runs.
SCALE = float(os.getenv("WACODE_PROPERTY_EXAMPLES", "1"))
# WACODE_PROPERTY_SIZE stretches the generated text lengths the same way.
SIZE = float(os.getenv("WACODE_PROPERTY_SIZE", "1"))

CORPUS_LENGTH = 10_000


def examples(count):
    return settings(
        max_examples=max(1, int(count * SCALE)),
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    )


def sized(length):
    return max(1, int(length * SIZE))


@st.composite
def texts(draw, min_size=1, max_size=200, max_alphabet=8):
    """Byte strings over a small random alphabet, so symbols repeat."""
    size = draw(st.integers(min_value=1, max_value=max_alphabet))
    alphabet = draw(st.lists(st.integers(0, 255), min_size=size, max_size=size, unique=True))
    symbols = draw(st.lists(st.sampled_from(alphabet), min_size=min_size, max_size=max(min_size, sized(max_size))))
    return bytes(symbols)


@st.composite
def multi_symbol_texts(draw, max_size=200, max_alphabet=8):
    """Texts with at least two distinct symbols."""
    text = draw(texts(min_size=2, max_size=max_size, max_alphabet=max(2, max_alphabet)))
    if len(set(text)) < 2:
        first = text[0]
        text = text[:-1] + bytes([(first + 1) % 256])
    return text


def large_text(n=CORPUS_LENGTH, alphabet_size=256, seed=0):
    """n bytes using exactly min(n, alphabet_size) symbols with a skewed, repeatable distribution."""
    rng = random.Random(seed)
    alphabet = rng.sample(range(256), min(n, alphabet_size))
    ranks = [1 / (rank + 1) for rank in range(len(alphabet))]
    symbols = alphabet + rng.choices(alphabet, weights=ranks, k=n - len(alphabet))
    rng.shuffle(symbols)
    return bytes(symbols)


def corpus_texts(max_size=CORPUS_LENGTH, max_alphabet=256):
    """Long skewed texts up to sized(max_size) bytes, drawn by length, alphabet size and seed."""
    return st.builds(
        large_text,
        st.integers(min_value=2, max_value=sized(max_size)),
        st.integers(min_value=2, max_value=max_alphabet),
        st.integers(min_value=0, max_value=2 ** 32),
    )


def weight_specs():
    return st.one_of(
        st.just(WeightFunctionSpec.constant()),
        st.just(WeightFunctionSpec.positional()),
        st.just(WeightFunctionSpec.exp2()),
        st.sampled_from([2, 8, '1/2', '3/2']).map(WeightFunctionSpec.polynomial),
        st.sampled_from(['1.0004', '5/4', 2]).map(WeightFunctionSpec.exponential),
    )
