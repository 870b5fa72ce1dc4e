"""
Pytest configuration and shared fixtures.
"""

import pytest
from dotenv import load_dotenv

from modules.config import reset_config
from modules.model_core import ModelParams, RestrictedParams
from modules.param_io import generate_params, generate_restricted
from modules.validation import BETHE_RULE

# Load environment variables from .env file at module import time
load_dotenv()

DWPF_ENV_VARS = [
    "LOG_LEVEL",
    "DWPF_THREADS",
    "DWPF_REPORT_DIR",
    "DWPF_RECORD_TIMINGS",
    "DWPF_TOL_ROUTES",
    "DWPF_TOL_RESTRICTED_LARGE",
    "DWPF_TOL_KOREPIN",
    "DWPF_TOL_SECOND_RECURSION",
    "DWPF_TOL_SYMMETRY",
    "DWPF_TOL_DEGREE",
    "DWPF_TOL_HOMOGENEOUS",
    "DWPF_TOL_TODA",
    "DWPF_TOL_TWIST",
    "DWPF_TOL_BETHE_RECURSION",
    "DWPF_TOL_PARTITION",
    "DWPF_TOL_SPECTRUM",
]


def pytest_configure(config):
    """Configure custom markers."""
    config.addinivalue_line("markers", "unit: Fast tests of a single function or class")
    config.addinivalue_line("markers", "integration: Tests that run whole suites or the CLI")


@pytest.fixture
def clean_env(monkeypatch):
    """Clears every DWPF setting and drops the cached global config."""
    for key in DWPF_ENV_VARS:
        monkeypatch.delenv(key, raising=False)
    reset_config()
    yield monkeypatch
    reset_config()


@pytest.fixture
def general_params():
    """Seeded general parameters (rapidities non-zero) for N = 1..4."""
    return {n: generate_params(7, n) for n in range(1, 5)}


@pytest.fixture
def bethe_params():
    """Seeded parameters that keep every operator denominator away from zero."""
    return {n: generate_params(11, n, BETHE_RULE) for n in range(1, 4)}


@pytest.fixture
def restricted_params():
    """Seeded restricted parameters for N = 1..6."""
    return {n: generate_restricted(3, n) for n in range(1, 7)}


@pytest.fixture
def small_params():
    """A hand-written 2 x 2 parameter set."""
    return ModelParams(
        (0.2 + 0.1j, -0.3 + 0.25j),
        (0.15 - 0.4j, 0.45 + 0.05j),
        (0.1 + 0.05j, -0.2 + 0.1j),
        (0.3 - 0.1j, -0.05 + 0.2j),
    )


@pytest.fixture
def small_restricted():
    """A hand-written 3 x 3 restricted parameter set."""
    return RestrictedParams(
        (0.2 + 0.1j, -0.3 + 0.25j, 0.05 - 0.5j),
        (0.4 - 0.3j, -0.45 - 0.1j, 0.1 + 0.55j),
    )


@pytest.fixture
def temp_data_dir(tmp_path):
    """Create a temporary data directory for testing."""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    return data_dir
