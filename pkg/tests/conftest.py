import sys
from pathlib import Path

import pytest

from cobweb.sequences import BUILTIN_CATALOG, parse_seq_spec

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(params=BUILTIN_CATALOG)
def builtin(request):
    return parse_seq_spec(request.param)


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, in criterion order
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance.py::test_ac" in rep.nodeid and rep.when == "call":
                name = rep.nodeid.split("::")[-1]
                lines.append((name, "PASS" if rep.passed else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
