import pytest

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


class _Recorder:
    def __call__(self, number: int, title: str, passed: bool, detail: str = "") -> bool:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}"
        if detail and not passed:
            line += f"  [{detail}]"
        print(line)
        _ACCEPTANCE[number] = (title, bool(passed), detail)
        return bool(passed)


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome; returns the pass flag."""
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail and not ok:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
