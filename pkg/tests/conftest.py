import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def record_criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion; a test that dies first records FAIL."""
    number = request.node.name.split("_")[2]
    done = []

    def record(passed: bool, detail: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        request.config.acceptance_lines.append(line)
        done.append(line)

    yield record
    if not done:
        request.config.acceptance_lines.append(f"criterion {number}: FAIL  did not complete")


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)
