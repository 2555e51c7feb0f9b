import time
from contextlib import contextmanager
from importlib import resources

import pytest

from realrank.tensor import load_tensor


def fixture_path(name):
    return resources.files("realrank") / "fixtures" / f"{name}.json"


@pytest.fixture(scope="session")
def array_4x4x3():
    return load_tensor(fixture_path("array_4x4x3"))


@pytest.fixture(scope="session")
def array_7x4x3():
    return load_tensor(fixture_path("array_7x4x3"))


@pytest.fixture(scope="session")
def indscal_4x3x3():
    return load_tensor(fixture_path("indscal_4x3x3"))


@pytest.fixture(scope="session")
def indscal_7x4x4():
    return load_tensor(fixture_path("indscal_7x4x4"))


ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


@pytest.fixture
def criterion(request):
    """Context manager that records one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE_LINES]

    @contextmanager
    def check(number, title):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as e:
            msg = str(e).splitlines()[0][:80] if str(e) else type(e).__name__
            lines.append(f"FAIL  criterion {number:>2}: {title} ({time.perf_counter() - t0:.1f}s) {msg}")
            print(lines[-1])
            raise
        lines.append(f"PASS  criterion {number:>2}: {title} ({time.perf_counter() - t0:.1f}s)")
        print(lines[-1])

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
