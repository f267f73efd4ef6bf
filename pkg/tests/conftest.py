import numpy as np
import pytest

from bsimplex.bivariate import BivParams
from bsimplex.montecarlo import SCENARIOS
from bsimplex.sampler import sample_matrix


def pytest_addoption(parser):
    parser.addoption("--longrun", action="store_true", default=False,
                     help="run the full-size Monte Carlo reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--longrun"):
        return
    skip = pytest.mark.skip(reason="needs --longrun")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(params=sorted(SCENARIOS), ids=sorted(SCENARIOS))
def scenario_theta(request):
    return BivParams.of(*SCENARIOS[request.param])


@pytest.fixture(scope="session")
def small_dataset():
    """50 pairs at a moderately dependent interior point."""
    th = BivParams.of(0.5, 0.5, 2.0, 2.0, 0.3)
    return th, sample_matrix(th, 50, 2024)


@pytest.fixture
def rng():
    return np.random.default_rng(8675309)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, part, passed, detail)`` for the end-of-run report."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(criterion, part, ok, detail):
        store.setdefault(criterion, []).append((part, bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, None)
    if not store:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(store, key=lambda c: int(c[2:])):
        parts = store[crit]
        ok = all(p[1] for p in parts)
        tr.write_line(f"{crit} {'PASS' if ok else 'FAIL'}")
        for part, pok, detail in parts:
            tr.write_line(f"    [{'pass' if pok else 'FAIL'}] {part}: {detail}")
