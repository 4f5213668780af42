import pytest

from proofchain.crypto import group_params


@pytest.fixture(scope="session")
def toy():
    return group_params("toy")


@pytest.fixture(scope="session")
def test_params():
    return group_params("test")
