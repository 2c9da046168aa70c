import numpy as np
import pytest

from magnomech.params import apply_override
from magnomech.presets import baseline_params, microscopic_params


@pytest.fixture(scope="session")
def baseline():
    return baseline_params()


@pytest.fixture(scope="session")
def micro_baseline():
    return microscopic_params()


def with_overrides(p, **file_units):
    """Apply config-key overrides given as key=value (file units)."""
    for key, value in file_units.items():
        p = apply_override(p, key, value)
    return p


@pytest.fixture(scope="session")
def fig3c_template(baseline):
    """Triple-window coupling set, tunnelling left at zero."""
    return with_overrides(baseline, g1_hz=1.2e6, g2_hz=1.2e6,
                          G_np_hz=1.2e6, G_au_hz=0.0)


@pytest.fixture(scope="session")
def decoupled(baseline):
    """Bare principal cavity: every coupling switched off."""
    return with_overrides(baseline, g1_hz=0.0, g2_hz=0.0, f_hz=0.0,
                          G_au_hz=0.0, G_np_hz=0.0)


def delta_grid(p, n=2001, lo=0.0, hi=2.0):
    return np.linspace(lo * p.omega_p, hi * p.omega_p, n)
