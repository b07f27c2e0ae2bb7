import pytest

from gamegen import build_d1, corpus


@pytest.fixture(scope="session")
def instance_corpus():
    """The 200 seeded random instances used by the acceptance suite."""
    return corpus(200)


@pytest.fixture(scope="session")
def d1():
    return build_d1()
