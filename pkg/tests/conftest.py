import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import certlog  # noqa: E402

# every certificate built anywhere in the session is kept for criterion 10
certlog.install()

LAST = "test_criterion_10_certificate_soundness"


def pytest_collection_modifyitems(config, items):
    last = [it for it in items if it.name == LAST]
    items[:] = [it for it in items if it.name != LAST] + last


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
