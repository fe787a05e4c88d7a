import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from netpredict.corpus import FilteredMatrix  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def as_filtered(values):
    return FilteredMatrix.from_array(np.asarray(values))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
