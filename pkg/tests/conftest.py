from __future__ import annotations

import random

import pytest

from freespace_lab import kernels
from freespace_lab.metric import random_space, square_space

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def square():
    return square_space()


@pytest.fixture
def rng():
    return random.Random(12345)


def make_spaces(seed: int, count: int, lo: int, hi: int, mode=None):
    rng = random.Random(seed)
    return [random_space(rng, rng.randint(lo, hi), mode) for _ in range(count)]


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]
