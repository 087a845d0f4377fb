import random

import pytest

from treeverb.constructions import adding_machine
from treeverb.core import TreeAutomorphism, inverse


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture
def t3():
    return adding_machine(3)


@pytest.fixture
def tau3():
    return TreeAutomorphism.rooted((1, 0, 2))


@pytest.fixture
def one3():
    return TreeAutomorphism.identity(3)


@pytest.fixture
def tt3(t3, one3):
    """(t, t^-1, 1) in degree 3."""
    return TreeAutomorphism.from_sections([t3, inverse(t3), one3])
