import numpy as np
import pytest

from helpers import BACKENDS


@pytest.fixture(params=BACKENDS, ids=lambda k: k.tag)
def kind(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
