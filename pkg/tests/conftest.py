import pathlib
import sys

import pytest

from povote.axioms import CheckConfig, literature_seeds
from povote.ballots import parse_ballots
from povote.preferences import build_partial_order, empty_order, linear_order

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


TEST_CONFIG = pathlib.Path(__file__).parent / "example-config.toml"

A, B, C, D, E = range(5)


@pytest.fixture()
def config():
    """Loads the test configuration TOML"""
    config_path = TEST_CONFIG

    with open(config_path, "rb") as f:
        config = tomllib.load(f)

    return config


@pytest.fixture()
def toml_patch_target():
    # Python 3.11 and up has tomllib built-in, for 3.10 and lower we use tomli which provides
    # the same functonality. We check if it's Python 3.10 or lower to patch the correct target.
    if sys.version_info < (3, 11):
        return "tomli.load"
    else:
        return "tomllib.load"


@pytest.fixture(autouse=True)
def default_bound(monkeypatch):
    # The enumeration bound must not leak in from the developer's shell
    monkeypatch.delenv("POVOTE_MAX_M", raising=False)


@pytest.fixture()
def cfg():
    """Desk-scale bounds with the known witnesses as seeds"""
    return CheckConfig(m=3, max_voters=2, continuity_voters=1, seeds=literature_seeds(3))


@pytest.fixture()
def apps_order():
    """Instagram > Facebook > TikTok, Gmail > Yahoo, Uber incomparable to everything"""
    instagram, facebook, tiktok, gmail, yahoo, uber = range(6)
    return build_partial_order(6, [(instagram, facebook), (facebook, tiktok), (gmail, yahoo)])


@pytest.fixture()
def opposed_profile():
    """Voter 1: a > b, a > c; voter 2: b > a, c > a"""
    return parse_ballots("alternatives: a b c\nvoter 1: a>b, a>c\nvoter 2: b>a, c>a\n").profile


@pytest.fixture()
def five_alternative_orders():
    """The two five-alternative orders scored by dominance plurality"""
    left = build_partial_order(5, [(A, B), (A, C), (B, D), (E, C)])
    right = build_partial_order(5, [(A, C), (B, C), (C, D), (E, D)])
    return left, right


@pytest.fixture()
def abc():
    return linear_order([A, B, C])


@pytest.fixture()
def empty3():
    return empty_order(3)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run slow exhaustive tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Mark tests as slow exhaustive tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        # --runslow given in cli: do not skip slow tests
        return
    skip_slow = pytest.mark.skip(reason="Slow test: needs --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
