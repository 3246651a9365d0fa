import pytest

from hypertile import lattice, unfold, workbench

# The eight-cube L found among the hypercube unfoldings (canonical cells).
L_CELLS = frozenset([(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 0, 3),
                     (0, 1, 0), (1, 1, 0), (2, 1, 0), (3, 1, 0)])


@pytest.fixture(scope="session")
def unfoldings4():
    return workbench.unfoldings(4)


@pytest.fixture(scope="session")
def unfoldings3():
    return workbench.unfoldings(3)


@pytest.fixture(scope="session")
def free_polyominoes():
    return [frozenset(k) for n in range(1, 7) for k in lattice.polyforms(n)]


@pytest.fixture
def dali():
    return unfold.dali_cross()


@pytest.fixture
def L():
    return L_CELLS


# -- acceptance reporting: one line per criterion in the terminal summary ----

_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    status = "PASS" if call.excinfo is None else "FAIL"
    detail = getattr(item, "criterion_detail", "")
    _CRITERIA[n] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[n]
        line = f"criterion {n:2d} {status}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def note(request):
    """Attach a short detail string to the criterion line."""
    def _note(text):
        request.node.criterion_detail = text
    return _note
