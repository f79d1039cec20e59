import json
import math
from pathlib import Path

import pytest
from hypothesis import settings

from sqnamr import device

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def oracle_values():
    return json.loads((DATA / "oracle_values.json").read_text())


@pytest.fixture(scope="session")
def reference_config():
    return device.reference_config()


@pytest.fixture(scope="session")
def reference_derived(reference_config):
    return device.derive(reference_config)


@pytest.fixture(scope="session")
def symmetric_config(reference_config):
    """Equal resonators, so delta_L = delta_R."""
    return reference_config.replace(omega_R=reference_config.omega_L)


class UnitSpreads:
    delta_L = delta_R = zeta_L = zeta_R = 1.0
    delta_X = zeta_P = math.sqrt(2.0)


@pytest.fixture(scope="session")
def unit_spreads():
    return UnitSpreads()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
