import numpy as np
import pytest

from antilinear.core import AntiLinearOp

_CRITERIA = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_vector(rng, d):
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)


def random_op(rng, d):
    return AntiLinearOp(random_matrix(rng, d))


@pytest.fixture
def criterion(request):
    """Record pass/fail of one acceptance criterion for the summary."""
    name = request.node.get_closest_marker("criterion").args[0]
    _CRITERIA[name] = "FAIL"
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        _CRITERIA[name] = "PASS"


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split()[0].lstrip("AC"))):
        terminalreporter.write_line(f"[{_CRITERIA[name]}] {name}")
