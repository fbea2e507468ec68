"""
Pytest configuration and shared fixtures for optocool tests.
"""
import sys
import os
import pytest

# Add the parent directory to sys.path to import optocool from a checkout
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

try:
    import numpy as np
    import optocool
except ImportError as e:
    pytest.skip(f"optocool module not available: {e}", allow_module_level=True)

from optocool.model import PhysicalParams


@pytest.fixture(scope="session")
def optocool_module():
    """Provide the optocool package to all tests."""
    return optocool


@pytest.fixture
def thread_configs():
    """Common thread configurations for parallel testing."""
    return [1, 2, 4, min(8, optocool.get_hardware_concurrency())]


@pytest.fixture(autouse=True)
def reset_thread_config():
    """Start every test from the environment default thread count."""
    optocool.reset_sweep_threads()
    yield
    optocool.reset_sweep_threads()


@pytest.fixture
def rng():
    """Seeded generator for fixed-size random samples."""
    return np.random.default_rng(20240601)


@pytest.fixture
def decoupled_params():
    """No optomechanical coupling: cavity in vacuum, mechanics thermal."""
    return PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.0, n_bar=1e3)


@pytest.fixture
def fig2_params():
    """Resolved sidebands, weak coupling (RWA regime)."""
    return PhysicalParams(kappa=0.01, gamma_m=1e-5, delta=-1.0, g=0.05, n_bar=1e3)


@pytest.fixture
def fig3_params():
    """Unresolved sidebands, where counter-rotating terms matter."""
    return PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.2, n_bar=1e3)


@pytest.fixture
def fig05_params():
    """Red-sideband squeezing of the hybrid modes."""
    return PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.2, n_bar=1e3)


@pytest.fixture
def blue_params():
    """Blue-detuned drive: parametric amplification, unstable."""
    return PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=1.0, g=0.2, n_bar=1e3)


@pytest.fixture
def write_config(tmp_path):
    """Write a YAML document to a temporary file and return its path."""
    def _write(text, name="run.yaml"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


STEADY_CONFIG = """\
effective:
  kappa: 0.5
  gamma_m: 1e-5
  delta: -1
  g: 0.2
  n_bar: 1000
command: steady
"""


@pytest.fixture
def steady_config_text():
    """Minimal effective-mode document used across config and CLI tests."""
    return STEADY_CONFIG
