import os
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# keep the on-disk reduction cache out of the user's home during tests
os.environ.setdefault("DIFFCOH_CACHE", tempfile.mkdtemp(prefix="diffcoh-test-cache-"))

from hypothesis import HealthCheck, settings  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _no_leaked_faults():
    from diffcoh.steenrod import clear_table_overrides

    yield
    clear_table_overrides()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
