import numpy as np
import pytest

from sigkern import SequenceDataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_dataset(rng):
    return SequenceDataset([rng.normal(size=(n, 2)) for n in (4, 6, 5)])


# -- acceptance reporting ---------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    _criteria[mark.args[0]] = (mark.args[1], rep.outcome, call.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, outcome, dur, detail = _criteria[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        extra = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {n}: {verdict} {title} ({dur:.1f}s){extra}")
