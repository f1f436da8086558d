import numpy as np
import pytest

import diocheck as dc


@pytest.fixture(scope="session")
def table_1k() -> dc.PrimeTable:
    return dc.build_tables(1000)


@pytest.fixture(scope="session")
def table_100k() -> dc.PrimeTable:
    return dc.build_tables(10**5)


@pytest.fixture(scope="session")
def table_1m() -> dc.PrimeTable:
    return dc.build_tables(10**6)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
