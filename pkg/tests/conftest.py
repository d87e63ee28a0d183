"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from spinmemory.config import resolve_config
from spinmemory.params import PhysicalParams
from spinmemory.sweeps import matched_params


def make_params(**overrides):
    """Fig-2-flavoured configuration for unit tests, freely overridable."""
    kwargs = dict(gamma=2e7, kappa=2e9, gamma_m=5e6, gamma_f=5.0,
                  omega_rabi=1e8, delta_one_photon=-4e10, g_coupling=3.5e3,
                  n_meta=1.6e12, n_ground=1.6e18)
    kwargs.update(overrides)
    return PhysicalParams(**kwargs)


@pytest.fixture(scope="session")
def default_config():
    return resolve_config({})


@pytest.fixture(scope="session")
def fig2_params(default_config):
    """Full system at the matched point, Gamma = 0.1 gamma_m, no wall loss."""
    params, _ = matched_params(default_config, 0.1 * default_config["gamma_m"],
                               gamma_0=0.0)
    return params


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def announce(request):
    """Print one line through the capture machinery (acceptance reporting)."""
    cap = request.config.pluginmanager.getplugin("capturemanager")

    def _line(msg):
        if cap is None:
            print(msg)
        else:
            with cap.global_and_fixture_disabled():
                print(msg)
    return _line
