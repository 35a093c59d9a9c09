"""
Fixtures compartidas - Q-Aware L2O
"""
import os

import numpy as np
import pytest

from qaware.config import get_settings
from qaware.models import Graph, PauliSum
from qaware.services.circuits import build_qaoa_maxcut, build_random_pqc


@pytest.fixture(autouse=True)
def _default_settings(monkeypatch):
    """Cada prueba ve los Settings por defecto, sin variables QAWARE_ del entorno"""
    for key in list(os.environ):
        if key.startswith("QAWARE_"):
            monkeypatch.delenv(key)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def triangle():
    return Graph.from_pairs(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def small_pqc():
    return build_random_pqc(3, 2, seed=7)


@pytest.fixture
def single_edge_qaoa():
    return build_qaoa_maxcut(Graph.from_pairs(2, [(0, 1)]), p_layer=1)


@pytest.fixture
def z0():
    return PauliSum.from_terms([(1.0, {0: "Z"})])
