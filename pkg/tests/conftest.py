"""Shared helpers: random balanced rationals and independent oracles.

The oracles here never touch the accelerated evaluation paths: they sum
float64 logarithms of the raw factors directly, so they stay independent
of the dyadic-split and fixed-point machinery they are used to check.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from digitprod import FactoredRational


def popcount_parity(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values.astype(np.uint64)).astype(np.int64) & 1


def pair_parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.uint64)
    return np.bitwise_count(v & (v >> np.uint64(1))).astype(np.int64) & 1


def naive_signed_product(rational: FactoredRational, start: int, terms: int,
                         sequence: str = "t") -> float:
    """Double-precision partial product prod_{n<terms} R(n)^{(-1)^{s_n}}."""
    n = np.arange(start, terms, dtype=np.float64)
    logs = np.full_like(n, math.log(float(rational.scale)))
    for f in rational.factors:
        logs += f.multiplicity * np.log(n + float(f.offset))
    idx = np.arange(start, terms, dtype=np.uint64)
    parity = popcount_parity(idx) if sequence == "t" else pair_parity(idx)
    eps = (1 - 2 * parity).astype(np.float64)
    return math.exp(float(np.dot(eps, logs)))


def random_pm_convergent(rng: random.Random, max_pairs: int = 3) -> FactoredRational:
    """Balanced rational with distinct offsets in (0, 4], net degree zero."""
    pairs = rng.randint(1, max_pairs)
    offsets = {}
    while len(offsets) < 2 * pairs:
        den = rng.randint(1, 8)
        num = rng.randint(1, 4 * den)
        offsets[Fraction(num, den)] = 0
    keys = sorted(offsets)
    rng.shuffle(keys)
    for i, a in enumerate(keys):
        offsets[a] = 1 if i < pairs else -1
    return FactoredRational.from_offsets(offsets)


def random_fully_convergent(rng: random.Random) -> FactoredRational:
    """Balanced rational with equal offset sums (p_1 = 0)."""
    while True:
        a = Fraction(rng.randint(1, 16), rng.randint(1, 4))
        b = Fraction(rng.randint(1, 16), rng.randint(1, 4))
        c = Fraction(rng.randint(1, 16), rng.randint(1, 4))
        d = a + b - c
        if d > 0 and len({a, b, c, d}) == 4:
            return FactoredRational.from_offsets({a: 1, b: 1, c: -1, d: -1})


@pytest.fixture
def rng():
    return random.Random(20260810)
