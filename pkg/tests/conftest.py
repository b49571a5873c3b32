import pytest

from fapkit.graph import Instance

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def make(n, edges, cost=1):
    """Instance from (u, v) or (u, v, c) tuples; bare pairs get ``cost``."""
    return Instance(n, tuple(e if len(e) == 3 else (e[0], e[1], cost) for e in edges))


def cycle(n, cost=1):
    return make(n, [(i, (i + 1) % n) for i in range(n)], cost)


def complete(n, cost=1):
    return make(n, [(u, v) for u in range(n) for v in range(u + 1, n)], cost)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return make(10, outer + spokes + inner)


@pytest.fixture
def c4():
    return cycle(4)


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def bowtie():
    # triangles 0-1-2 and 0-3-4 sharing vertex 0
    return make(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])


@pytest.fixture
def theta_223():
    # poles 0 and 1; paths 0-2-1, 0-3-1, 0-4-5-1
    return make(6, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1)])


def record_acceptance(name: str, ok: bool, detail: str = ""):
    ACCEPTANCE_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
