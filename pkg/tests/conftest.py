import pytest

from cubegap.mollifier import build_tables


@pytest.fixture(scope="session")
def tables():
    return build_tables(20000)
