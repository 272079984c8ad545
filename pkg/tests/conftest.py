import os
import random

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from src.algebra.tree import parse_tree
from src.schemes import library

hypothesis_settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.register_profile(
    "thorough", max_examples=10_000, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", help="run the long-horizon checks")
    parser.addoption("--thorough", action="store_true", help="10^4 hypothesis examples per property")


def pytest_configure(config):
    if config.getoption("--thorough"):
        hypothesis_settings.load_profile("thorough")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended") or os.getenv("BSF_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="needs --extended or BSF_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


# fixtures


@pytest.fixture
def dot():
    return parse_tree("()")


@pytest.fixture
def chain2():
    return parse_tree("(())")


@pytest.fixture
def cherry():
    return parse_tree("(()())")


@pytest.fixture
def chain3():
    return parse_tree("((()))")


@pytest.fixture
def midpoint():
    return library.implicit_midpoint()


@pytest.fixture
def rk4():
    return library.classic_rk4()


@pytest.fixture
def rng():
    return random.Random(0)
