import sys
from contextlib import contextmanager
from pathlib import Path

import pytest
from gmpy2 import mpq
from hypothesis import strategies as st

from frolicher.complex import CORPUS, load_model
from frolicher.field import GaussianRational

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE: dict = {}

_MODELS: dict = {}


def model(name):
    if name not in _MODELS:
        _MODELS[name] = load_model(name)
    return _MODELS[name]


@pytest.fixture(scope="session")
def models():
    return {name: model(name) for name in CORPUS}


@pytest.fixture(scope="session")
def small_models():
    """The n = 3 corpus; cheap enough for exhaustive per-bidegree sweeps."""
    return {name: model(name) for name in CORPUS if name != "iwasawa5"}


class Tally:
    """Counts property checks so a suite can demand a minimum number of them."""

    def __init__(self):
        self.count = 0

    def check(self, cond, msg=""):
        self.count += 1
        assert cond, msg


@pytest.fixture
def tally():
    return Tally()


# entries in {0, ±1, ±i, ±1/2}
SMALL_SCALARS = [mpq(0), mpq(1), mpq(-1), GaussianRational(mpq(0), mpq(1)), GaussianRational(mpq(0), mpq(-1)),
                 mpq(1, 2), mpq(-1, 2)]
small_scalar = st.sampled_from(SMALL_SCALARS)


def small_matrix(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_scalar, min_size=c, max_size=c), min_size=r, max_size=r)))


@contextmanager
def _record(num, title):
    # a criterion passes only if every test contributing to it passes
    ok = False
    try:
        yield
        ok = True
    finally:
        prev = ACCEPTANCE.get(num, (True, title))[0]
        ACCEPTANCE[num] = (prev and ok, title)


@pytest.fixture
def criterion():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")
