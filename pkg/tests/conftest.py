"""Collects acceptance results and prints one PASS/FAIL line per criterion."""
import pytest

_RESULTS: dict[int, tuple[str, bool, str]] = {}


class Recorder:
    def __call__(self, number: int, title: str, ok: bool, detail: str = "") -> None:
        _RESULTS[number] = (title, bool(ok), detail)
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" [{detail}]" if detail else "")
        print(line)
        assert ok, line


@pytest.fixture
def criterion():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, detail = _RESULTS[number]
        suffix = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}{suffix}")
