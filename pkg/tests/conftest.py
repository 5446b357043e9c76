import numpy as np
import pytest

from loopwave import (
    FilterSystem,
    Loop,
    base_system,
    daubechies4_system,
    haar_system,
    loop_to_filters,
    random_paraunitary,
)


@pytest.fixture
def haar() -> FilterSystem:
    return haar_system()


@pytest.fixture
def d4() -> FilterSystem:
    return daubechies4_system()


@pytest.fixture
def base2() -> FilterSystem:
    return base_system(2)


def seeded_loop(n: int, degree: int, seed: int) -> Loop:
    return random_paraunitary(n, degree, seed)


def seeded_system(n: int, degree: int, seed: int) -> FilterSystem:
    return loop_to_filters(seeded_loop(n, degree, seed))


def random_vector(size: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)
