from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE_LINES: list[str] = []

recips = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def domain_recips(draw, m_max=4, total_below=None):
    """Tuple of exact reciprocals 1/p_j, optionally with sum < ``total_below``."""
    m = draw(st.integers(1, m_max))
    rs = tuple(draw(recips) for _ in range(m))
    if total_below is not None and sum(rs) >= total_below:
        # shrink uniformly into the open region
        scale = Fraction(total_below) / (sum(rs) + 1) if sum(rs) else Fraction(0)
        rs = tuple(r * scale for r in rs)
    return rs


@st.composite
def target_pair(draw):
    """Reciprocals ``(a, b) = (1/u, 1/q)`` with ``u <= q``."""
    a = draw(recips)
    b = draw(st.fractions(min_value=0, max_value=a, max_denominator=12))
    return a, b


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
