import numpy as np
import pytest

from exactci import make_binomial, make_odds_ratio, make_poisson


@pytest.fixture(scope="session")
def bin2():
    return make_binomial(2)


@pytest.fixture(scope="session")
def bin12():
    return make_binomial(12)


@pytest.fixture(scope="session")
def bin20():
    return make_binomial(20)


@pytest.fixture(scope="session")
def pois():
    return make_poisson()


@pytest.fixture(scope="session")
def or_big():
    # case-control table: 42 of 49 cases exposed, 203 of 317 controls exposed
    return make_odds_ratio(49, 317, 245)


@pytest.fixture(scope="session")
def or_small():
    return make_odds_ratio(6, 6, 6)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260817)
