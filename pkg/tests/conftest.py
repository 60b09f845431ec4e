import numpy as np
import pytest

from fracmatroid.corpus import graph_instance, unit
from fracmatroid.instance import Instance


@pytest.fixture
def one_line():
    """A single line <e1, e2> in F^2."""
    return graph_instance([(0, 1)])


@pytest.fixture
def k3():
    return graph_instance([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def c4():
    return graph_instance([(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def star():
    return graph_instance([(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def line_in_f3():
    """One line in F^3: n odd and deficient."""
    return Instance.from_lines([(unit(3, 0), unit(3, 1))], 3)


@pytest.fixture
def two_disjoint_lines():
    return Instance.from_lines([(unit(4, 0), unit(4, 1)), (unit(4, 2), unit(4, 3))], 4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
