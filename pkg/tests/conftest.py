import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csmds import validate_target  # noqa: E402
from csmds.datasets import find_mnist, load_mnist  # noqa: E402
from csmds.stress import compute_distance_matrix  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def euclidean_target(points):
    return validate_target(compute_distance_matrix(points))


@pytest.fixture
def random_target():
    """Target built from 3-D points drawn from a stream unrelated to the optimizer seeds."""
    def make(n=20, dim=3, seed=0, scale=3.0):
        pts = np.random.default_rng([seed, 97]).random((n, dim)) * scale
        return euclidean_target(pts)
    return make


@pytest.fixture(scope="session")
def mnist():
    found = find_mnist()
    if found is None:
        pytest.skip("no MNIST IDX files available")
    return load_mnist(*found)


# -- acceptance summary -------------------------------------------------------
# Tests marked ``acceptance(number, title)`` get one PASS/FAIL line in the
# terminal summary; details attached via ``record_property("detail", ...)``.

_acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _acceptance_results[number] = (status, title, detail)
    print(f"\n[criterion {number}] {status}: {title}{' | ' + detail if detail else ''}")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        status, title, detail = _acceptance_results[number]
        line = f"{status} [{number:>2}] {title}"
        if detail:
            line += f" | {detail}"
        terminalreporter.write_line(line)
