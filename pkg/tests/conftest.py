import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

# criterion number -> (title, tolerance, outcome)
_ACCEPTANCE: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, tolerance): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title, tolerance = marker.args
    entry = _ACCEPTANCE.setdefault(number, [title, tolerance, "PASS", ""])
    if rep.failed:
        entry[2] = "FAIL"
        if call.excinfo is not None:
            entry[3] = str(call.excinfo.value).splitlines()[0][:160]
    elif rep.skipped and entry[2] == "PASS":
        entry[2] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, tolerance, status, note = _ACCEPTANCE[number]
        line = f"criterion {number:2d}: {status}  {title}  [tolerance: {tolerance}]"
        if note:
            line += f"  -- {note}"
        terminalreporter.write_line(line)
