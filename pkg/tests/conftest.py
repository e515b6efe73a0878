import pytest

from chrono_squid.spacetime import CubicProfile
from chrono_squid.squid_model import SquidParams


@pytest.fixture
def params():
    return SquidParams(critical_current=1.25e-6, cell_capacitance=90e-15, cell_length=10e-6)


@pytest.fixture
def cubic():
    return CubicProfile()
