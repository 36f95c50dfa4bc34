import random

import pytest
from hypothesis import HealthCheck, settings

from minquad.basecases import load_base
from minquad.embedding import Embedding

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")


@pytest.fixture
def cube() -> Embedding:
    return load_base("cube")


@pytest.fixture
def phi5() -> Embedding:
    return load_base("phi5")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261015)
