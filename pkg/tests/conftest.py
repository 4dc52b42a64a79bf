"""Shared fixtures: traced curves and the synthetic records built from them.

Tracing the default grid and synthesizing four 3 ms channels takes a few
seconds, so everything here is session-scoped.
"""
import numpy as np
import pytest

from lamb_toa.dispersion import ALUMINIUM, generation_fd_grid, trace_modes
from lamb_toa.signal import DEFAULT_DT, REFERENCE_LAYOUT, Waveform, synthesize_channels
from lamb_toa.signal.profiles import get_profile

RECORD_SAMPLES = 15000


@pytest.fixture(scope="session")
def curves():
    """S0 and A0 on the default 1 ... 5000 Hz·m grid."""
    return trace_modes(ALUMINIUM, ["S0", "A0"])


@pytest.fixture(scope="session")
def generation_curves():
    """S0 and A0 on the generation grid (0.02 ... 1000 Hz·m)."""
    return trace_modes(ALUMINIUM, ["S0", "A0"], generation_fd_grid(1000.0))


@pytest.fixture(scope="session")
def idealized_source():
    return get_profile("idealized").build(DEFAULT_DT, RECORD_SAMPLES, contact_time=10e-6, delay=0.0)


@pytest.fixture(scope="session")
def i1_channels(idealized_source, generation_curves):
    """Noise-free S1..S4 records of an idealized impact at I1 (S0 0.1, A0 1.0)."""
    return synthesize_channels(REFERENCE_LAYOUT, "I1", idealized_source, generation_curves)


def alternating_step(n, onset, low=1e-3, high=1.0, dt=DEFAULT_DT, name="step"):
    """+-low before `onset`, +-high from it on: a deterministic variance step."""
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    samples = np.where(np.arange(n) < onset, low, high) * sign
    return Waveform(samples, dt, 0.0, name)
