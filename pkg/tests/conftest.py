import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from finq.lattice import boolean, chain, m_lattice, n5


@pytest.fixture(scope="session")
def m3():
    return m_lattice(3)


@pytest.fixture(scope="session")
def m4():
    return m_lattice(4)


@pytest.fixture(scope="session")
def pentagon():
    return n5()


@pytest.fixture(scope="session")
def small_lattices():
    """Every battery lattice with at most 5 elements."""
    return [chain(1), chain(2), chain(3), chain(4), chain(5),
            boolean(2), m_lattice(2), m_lattice(3), n5()]
