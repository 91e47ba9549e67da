import pytest

from lcmbounds import PrimeTable


@pytest.fixture(scope="session")
def table_small() -> PrimeTable:
    return PrimeTable(10**4)


@pytest.fixture(scope="session")
def table() -> PrimeTable:
    # large enough for every acceptance grid (x up to 10^6, terms to limit^2)
    return PrimeTable(2 * 10**6)
