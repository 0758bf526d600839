from pathlib import Path

import numpy as np
import pytest

from parrondo_lab import sweep

GOLDEN = Path(__file__).parent / "golden"
DATA = Path(__file__).parent / "data"

_FIGURES: dict[str, sweep.SweepResult] = {}


def figure(name: str) -> sweep.SweepResult:
    """Full-resolution preset sweep, computed once per session."""
    if name not in _FIGURES:
        _FIGURES[name] = sweep.run_sweep(sweep.figure_preset(name))
    return _FIGURES[name]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def data_dir():
    return DATA


# (number, title, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  [{number:2d}] {title}: {detail}")
