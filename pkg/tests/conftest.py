from pathlib import Path

import pytest
from hypothesis import settings

from metgen.adapters import builtin_registry

settings.register_profile("suite", max_examples=50, deadline=None)
settings.load_profile("suite")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
