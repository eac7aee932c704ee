import os

import pytest
from hypothesis import HealthCheck, settings

from siltkit.constructions import (
    build_anm, build_nakayama_selfinjective, build_preprojective, tilde_construction,
)
from siltkit.selfinjective import nakayama_automorphism

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


@pytest.fixture(scope="session")
def nak24():
    return build_nakayama_selfinjective(2, 4)


@pytest.fixture(scope="session")
def tilde24(nak24):
    return tilde_construction(nak24)


@pytest.fixture(scope="session")
def a35():
    return build_anm(3, 5)


@pytest.fixture(scope="session")
def a53():
    return build_anm(5, 3)


@pytest.fixture(scope="session")
def a32():
    return build_anm(3, 2)


@pytest.fixture(scope="session")
def pre_a2():
    return build_preprojective("A", 2)


@pytest.fixture(scope="session")
def pre_a3():
    return build_preprojective("A", 3)


@pytest.fixture(scope="session")
def nd():
    """Nakayama data per algebra, computed once per session."""
    cache = {}

    def get(A):
        key = id(A)
        if key not in cache:
            cache[key] = nakayama_automorphism(A)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
