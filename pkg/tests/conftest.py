import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.data.types import FiniteGame  # noqa: E402
from src.scenarios import load_scenario  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def example_3_1():
    return load_scenario("example_3_1")


@pytest.fixture
def example_3_3_1():
    return load_scenario("example_3_3_1")


@pytest.fixture
def example_4_3_1():
    return load_scenario("example_4_3_1")


def random_game(rng: np.random.Generator, n: int, k, low: int = -5, high: int = 5) -> FiniteGame:
    size = int(np.prod(k))
    utilities = tuple(tuple(Fraction(int(v)) for v in rng.integers(low, high + 1, size)) for _ in range(n))
    return FiniteGame(tuple(k), utilities)


def random_potential_game(rng: np.random.Generator, k, low: int = -5, high: int = 5) -> FiniteGame:
    """c_i = P + d_i with d_i independent of a_i."""
    from src.algebra.stp import all_profiles

    k = tuple(k)
    profiles = list(all_profiles(k))
    p = rng.integers(low, high + 1, len(profiles))
    utilities = []
    for i in range(len(k)):
        others = {}
        vector = []
        for j, a in enumerate(profiles):
            key = a[:i] + a[i + 1:]
            if key not in others:
                others[key] = int(rng.integers(low, high + 1))
            vector.append(Fraction(int(p[j]) + others[key]))
        utilities.append(tuple(vector))
    return FiniteGame(k, tuple(utilities))
