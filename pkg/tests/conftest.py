import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


def rational_samples(min_size=1, max_size=8):
    return st.lists(rationals, min_size=min_size, max_size=max_size)


def random_rationals(rng, n, lo=-9, hi=9, den=5):
    return [Fraction(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(LINES):
            terminalreporter.write_line(LINES[number])
