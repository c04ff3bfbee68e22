import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subset_currents.core_graphs import random_cyclically_reduced, rose, theta  # noqa: E402


@pytest.fixture
def rose2():
    return rose(2)


@pytest.fixture
def rose3():
    return rose(3)


@pytest.fixture
def theta_graph():
    return theta()


MARKINGS = {"rose2": rose(2), "rose3": rose(3), "theta": theta()}


def random_graphs(count, max_vertices, seed):
    """Deterministic batch of (marking name, graph) pairs cycling over the markings."""
    rng = random.Random(seed)
    names = sorted(MARKINGS)
    return [(names[i % 3], random_cyclically_reduced(MARKINGS[names[i % 3]], max_vertices, rng))
            for i in range(count)]
