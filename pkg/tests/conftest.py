import pytest

from classmine.dataset import load_pima
from classmine.feature_select import best_first_select
from classmine.preprocess import apply_impute, apply_normalize, fit_impute, fit_normalize

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pima():
    return load_pima()


@pytest.fixture(scope="session")
def pima_prepared(pima):
    d = apply_impute(fit_impute(pima), pima)
    return apply_normalize(fit_normalize(d), d)


@pytest.fixture(scope="session")
def pima_reduced(pima_prepared):
    subset = best_first_select(pima_prepared)
    return pima_prepared.select(sorted(subset.members))
