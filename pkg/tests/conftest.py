"""Shared fixtures and hypothesis strategies"""

import numpy as np
import pytest
from hypothesis import strategies as st

from bebound.cf_core import DiscreteDist


@st.composite
def discrete_dists(draw, min_atoms: int = 1, max_atoms: int = 6, nonnegative: bool = False):
    """Random finite distributions with well-separated atoms on a 1e-3 grid."""
    low = 0 if nonnegative else -3000
    ticks = draw(st.lists(st.integers(low, 3000), min_size=min_atoms, max_size=max_atoms, unique=True))
    weights = draw(st.lists(st.integers(1, 100), min_size=len(ticks), max_size=len(ticks)))
    total = sum(weights)
    return DiscreteDist.from_atoms([(tick / 1000.0, w / total) for tick, w in zip(ticks, weights)])


@pytest.fixture
def rademacher():
    return DiscreteDist.rademacher()


@pytest.fixture
def bernoulli():
    return DiscreteDist.bernoulli(0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("BEBOUND_TOL", "BEBOUND_MAX_SUBDIVISIONS", "BEBOUND_MAX_ATOMS", "BEBOUND_MAX_WORKERS", "DEBUG"):
        monkeypatch.delenv(name, raising=False)
