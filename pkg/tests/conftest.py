import pytest

from jamsplit.scenario import generate_scenario


@pytest.fixture
def default_scenario():
    """Ten devices drawn with the library defaults, seed 3."""
    return generate_scenario(10, seed=3)


@pytest.fixture
def small_scenario():
    return generate_scenario(3, seed=11)
