import numpy as np
import pytest

from parentsets.dataset import Dataset
from parentsets.synth import random_network_data


def lists_match(found, expected, tol=1e-9):
    """Same maximal parent sets per variable and scores within ``tol`` bits."""
    if found.keys() != expected.keys():
        return False
    for v, sets in expected.items():
        if found[v].keys() != sets.keys():
            return False
        if any(abs(found[v][s] - score) > tol for s, score in sets.items()):
            return False
    return True


def canonical_bytes(result):
    """Byte rendering of a result for cross-configuration equality checks."""
    return "\n".join(f"{v}|{','.join(p)}|{s:.9f}" for v, p, s in result.records()).encode()


@pytest.fixture
def coins():
    return Dataset.from_codes([[0, 0, 1, 1], [0, 1, 0, 1]], names=["a", "b"])


@pytest.fixture(scope="session")
def small_random():
    return [random_network_data(n, 150, seed=100 + n) for n in (4, 6, 8)]


def copy_dataset(m=64, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, size=m)
    noise = rng.integers(0, 3, size=m)
    return Dataset.from_codes([x, x.copy(), noise], names=["src", "copy", "noise"])


_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the outcome is taken from the test's own result."""
    def record(label, detail=""):
        request.node._criterion = (label, detail)
    yield record
    info = getattr(request.node, "_criterion", None)
    if info:
        rep = getattr(request.node, "rep_call", None)
        status = "PASS" if rep is not None and rep.passed else (
            "SKIP" if rep is not None and rep.skipped else "FAIL")
        _CRITERIA.append(f"{status}  {info[0]}  {info[1]}".rstrip())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
