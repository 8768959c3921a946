import contextlib
import random

import pytest
from hypothesis import HealthCheck, settings

from laxcyl.corpus import generate_corpus

settings.register_profile("lab", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lab")

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(0)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def criterion(request):
    """Context manager recording PASS or FAIL for one acceptance criterion."""
    log = request.config.stash[_CRITERIA]

    @contextlib.contextmanager
    def run(number, title):
        info = {"detail": ""}
        try:
            yield info
        except BaseException:
            log[number] = ("FAIL", title, info["detail"])
            raise
        log[number] = ("PASS", title, info["detail"])

    return run


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_CRITERIA, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        status, title, detail = log[number]
        line = f"criterion {number}: {status}  {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
