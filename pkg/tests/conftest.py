import numpy as np
import pytest

from imagesets.config import get_settings
from imagesets.finite_field import build_field
from imagesets.map_repr import MapTable, from_expression


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("IMAGESETS_TABLE_CAP", "IMAGESETS_WALSH_CAP", "IMAGESETS_WALSH_ZERO_CAP",
                 "IMAGESETS_WALSH_BATCH", "IMAGESETS_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def F8():
    return build_field(2, 3)


@pytest.fixture
def F9():
    return build_field(3, 2)


@pytest.fixture
def F16():
    return build_field(2, 4)


@pytest.fixture
def F32():
    return build_field(2, 5)


@pytest.fixture
def F64():
    return build_field(2, 6)


@pytest.fixture
def cube16(F16):
    return from_expression(F16, "x^3")


@pytest.fixture
def cube32(F32):
    return from_expression(F32, "x^3")


@pytest.fixture
def binomial16(F16):
    return from_expression(F16, "x^3 + x^4")


@pytest.fixture
def binomial32(F32):
    return from_expression(F32, "x^3 + x^4")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def random_map(rng):
    def make(field) -> MapTable:
        return MapTable(field, rng.integers(0, field.q, size=field.q))

    return make
