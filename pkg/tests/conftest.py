import pytest

from padiccf.exactnf import new_field
from padiccf.fieldspec import load_bundled


@pytest.fixture(scope="session")
def qq():
    return load_bundled("qq.json")


@pytest.fixture(scope="session")
def qsqrt14():
    return load_bundled("qsqrt14.json")


@pytest.fixture(scope="session")
def qz3():
    return load_bundled("qz3.json")


@pytest.fixture(scope="session")
def k14(qsqrt14):
    return qsqrt14.field


@pytest.fixture(scope="session")
def kq(qq):
    return qq.field


@pytest.fixture(scope="session")
def gauss_field():
    return new_field([1, 0, 1])
