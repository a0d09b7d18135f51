import random

import pytest

from gdslab.freering import Commutator, GenPower, Word


def random_word(rng: random.Random, rank: int, depth: int = 2, length: int = 4) -> Word:
    factors = []
    for _ in range(rng.randint(1, length)):
        if depth > 0 and rng.random() < 0.3:
            a = random_word(rng, rank, depth - 1, 2)
            b = random_word(rng, rank, depth - 1, 2)
            factors.append(Commutator(a, b, rng.choice((-2, -1, 1, 2))))
        else:
            factors.append(
                GenPower(rng.randint(1, rank), rng.choice((-3, -2, -1, 1, 2, 3)))
            )
    return Word(tuple(factors))


def random_gamma2_word(rng: random.Random, rank: int, length: int = 3) -> Word:
    factors = []
    for _ in range(rng.randint(1, length)):
        a = random_word(rng, rank, 1, 2)
        b = random_word(rng, rank, 1, 2)
        factors.append(Commutator(a, b, rng.choice((-2, -1, 1, 2))))
    return Word(tuple(factors))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240915)
