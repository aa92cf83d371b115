from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from localner import default_config, default_taxonomy  # noqa: E402
from localner.pipeline import sample_paths  # noqa: E402


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture(scope="session")
def resources():
    """``(dictionaries, taxonomy, grammars)`` paths of the shipped sample data."""
    return sample_paths()
