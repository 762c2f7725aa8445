import zlib

import numpy as np
import pytest

from artnoise.harness.runner import warm_up


def pytest_configure(config):
    warm_up()


@pytest.fixture
def rng(request):
    # one stream per test, stable across runs and test ordering
    return np.random.default_rng([20130, zlib.crc32(request.node.nodeid.encode())])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
