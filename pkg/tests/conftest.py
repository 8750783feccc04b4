import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from support import ACCEPTANCE  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} - {detail}")
