import pytest

from src.families.qsl2 import BlockFamily
from src.families.serial import SerialFamily


@pytest.fixture(scope="session")
def serial4() -> SerialFamily:
    return SerialFamily(4, -14, 10)


@pytest.fixture(scope="session")
def serial1() -> SerialFamily:
    return SerialFamily(1, -5, 5)


@pytest.fixture(scope="session")
def block() -> BlockFamily:
    return BlockFamily(10, 6)


@pytest.fixture(scope="session")
def block8() -> BlockFamily:
    return BlockFamily(8, 6)
