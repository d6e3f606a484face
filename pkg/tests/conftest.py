import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def all_elements(orders):
    """Every element of ⊕ Z/orders as a list of coordinates."""
    return [list(x) for x in itertools.product(*(range(o) for o in orders))]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
