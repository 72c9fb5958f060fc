"""
Fixtures compartidas de la suite de tests
"""
import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest
from scipy.stats import unitary_group

from app.config import get_settings


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: escenarios del oráculo de malla (segundos a minutos)")


@pytest.fixture
def rng():
    """Generador sembrado con QABACUS_RANDOM_SEED si QABACUS_DETERMINISTIC (por defecto)"""
    settings = get_settings()
    seed = settings.random_seed if settings.deterministic else None
    return np.random.default_rng(seed)


@pytest.fixture
def random_unitaries(rng):
    def draw(count: int):
        return [unitary_group.rvs(2, random_state=rng) for _ in range(count)]
    return draw
