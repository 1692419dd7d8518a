"""Shared fixtures and the acceptance summary printed at the end of a run."""
import numpy as np
import pytest
from hypothesis import settings

from georho.model import validate

settings.register_profile("georho", max_examples=60, deadline=None)
settings.load_profile("georho")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ads():
    return validate(-1.0, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
