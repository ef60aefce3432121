import pytest

from condsym.config import ProbeSettings
from condsym.eqcat import fast_diffusion, potential_fast_diffusion


@pytest.fixture
def settings():
    return ProbeSettings(probes=32)


@pytest.fixture
def fast():
    return fast_diffusion()


@pytest.fixture
def potential():
    return potential_fast_diffusion()
