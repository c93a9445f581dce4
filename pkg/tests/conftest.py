from fractions import Fraction as F

import pytest

from pfspace import FiniteSpace, canonicalize


def measure(space, **masses):
    """``measure(X, a="3/4", b="1/4")``."""
    return canonicalize([(p, F(m)) for p, m in masses.items()], space)


@pytest.fixture
def X2():
    return FiniteSpace.discrete("ab", name="X2")


@pytest.fixture
def X3():
    return FiniteSpace.discrete("abc", name="X3")


@pytest.fixture
def line3():
    # a -1- b -2- c on a line
    return FiniteSpace(("a", "b", "c"), [[0, 1, 3], [1, 0, 2], [3, 2, 0]], "line3")


@pytest.fixture
def X4():
    return FiniteSpace.discrete("abcd", name="X4")


@pytest.fixture
def X5():
    return FiniteSpace.discrete("abcde", name="X5")
