from pathlib import Path

import numpy as np
import pytest

from walshgl import BooleanFunction, VectorialFunction, load_sbox, parse_anf

DATA = Path(__file__).parent / "data"

# The four nonzero coefficients of the reference quartic, W = 2^4 * S.
EXAMPLE1_ANF = "x1+x2+x2*x3+x3*x4"
EXAMPLE1_SPECTRUM = {0b1001: 8, 0b1100: 8, 0b1110: 8, 0b1011: -8}

# 3-bit permutation with a flat +-4 spectrum on every nonzero component.
NONLINEAR_SBOX3 = (0, 1, 3, 6, 7, 4, 5, 2)


def random_function(n: int, rng: np.random.Generator) -> BooleanFunction:
    return BooleanFunction(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def random_vectorial(n: int, m: int, rng: np.random.Generator) -> VectorialFunction:
    return VectorialFunction(n, m, rng.integers(0, 1 << m, size=1 << n))


def linear_function(n: int, a: int) -> BooleanFunction:
    idx = np.arange(1 << n)
    return BooleanFunction(n, (np.bitwise_count(idx & a) & 1).astype(np.uint8))


def planted_function(n: int, w0: int, disagreements: int, seed: int) -> BooleanFunction:
    """w0.x flipped on a random size-d subset: W(w0) = 2^n - 2d exactly."""
    rng = np.random.default_rng(seed)
    bits = np.zeros(1 << n, dtype=np.uint8)
    idx = np.arange(1 << n)
    bits[:] = np.bitwise_count(idx & w0) & 1
    flip = rng.choice(1 << n, size=disagreements, replace=False)
    bits[flip] ^= 1
    return BooleanFunction(n, bits)


@pytest.fixture
def example1() -> BooleanFunction:
    return parse_anf(EXAMPLE1_ANF)


@pytest.fixture
def identity_sbox3() -> VectorialFunction:
    return VectorialFunction(3, 3, list(range(8)))


@pytest.fixture
def nonlinear_sbox3() -> VectorialFunction:
    return VectorialFunction(3, 3, NONLINEAR_SBOX3)


@pytest.fixture(scope="session")
def aes_sbox() -> VectorialFunction:
    return load_sbox(DATA / "aes_sbox.sbox")
