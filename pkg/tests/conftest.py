import time

import pytest

_RESULTS: list[str] = []


class Criterion:
    """Times a block of checks and logs one PASS/FAIL line for it."""

    def __init__(self, label: str, limit: float):
        self.label = label
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        detail = f"{elapsed:.2f}s (limit {self.limit:g}s)"
        if exc_type is not None:
            first = str(exc).splitlines()[0] if str(exc) else ""
            detail += f" {exc_type.__name__}: {first}".rstrip()
        line = f"{'PASS' if ok else 'FAIL'} {self.label} [{detail}]"
        _RESULTS.append(line)
        print(line)
        if exc_type is None and not ok:
            raise AssertionError(f"{self.label} exceeded {self.limit}s")
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)
