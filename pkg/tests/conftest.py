import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from hankelff.ffield import field_make

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def f2():
    return field_make(2)


@pytest.fixture(scope="session")
def f3():
    return field_make(3)


@pytest.fixture(scope="session")
def gf4():
    return field_make(2, 2)


SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3), (7, 1)]
