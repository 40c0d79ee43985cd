import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from factorial_squarefree import factorization  # noqa: E402

# acceptance criteria report here; printed in the terminal summary
CRITERIA: dict[str, tuple[bool, str]] = {}

RECONSTRUCTIONS = {"checked": 0, "failed": 0}


@pytest.fixture(autouse=True, scope="session")
def _count_reconstructions():
    """Tally every Factorization built in this process; the constructor itself rejects bad ones."""
    original = factorization.Factorization.__post_init__

    def counted(self):
        RECONSTRUCTIONS["checked"] += 1
        try:
            original(self)
        except ValueError:
            RECONSTRUCTIONS["failed"] += 1
            raise

    factorization.Factorization.__post_init__ = counted
    yield
    factorization.Factorization.__post_init__ = original


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        ok, detail = CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
