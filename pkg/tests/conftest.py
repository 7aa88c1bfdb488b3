import numpy as np
import pytest

from dimcheck.dataset import Dataset


def make_blobs(n=500, pos_frac=0.2, seed=0, sep=3.0, spread=0.5, name="blobs"):
    """Two well separated Gaussian blobs; positives centred at (+sep, +sep)."""
    rng = np.random.default_rng(seed)
    n_pos = int(round(n * pos_frac))
    X = np.vstack([rng.normal([sep, sep], spread, (n_pos, 2)),
                   rng.normal([-sep, -sep], spread, (n - n_pos, 2))])
    y = np.r_[np.ones(n_pos, dtype=int), np.zeros(n - n_pos, dtype=int)]
    return Dataset(X, y, ("f0", "f1"), name)


@pytest.fixture
def blobs():
    return make_blobs()


@pytest.fixture
def xor():
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]] * 25, dtype=float)
    y = np.array([0, 0, 1, 1] * 25)
    return Dataset(X, y, ("a", "b"), "xor")


# one PASS/FAIL line per acceptance criterion, labelled by the test's docstring
_criteria: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if "test_acceptance.py" not in rep.nodeid:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        _criteria[rep.nodeid] = (status, doc)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for status, doc in _criteria.values():
        terminalreporter.write_line(f"{status}  {doc}")
