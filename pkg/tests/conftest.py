import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, text = RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
