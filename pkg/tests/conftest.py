# tests/conftest.py
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.collectors.scenario import validate_scenario

SATURATED_DISTURBER = {"payload_d_bytes": 50, "n": 10, "ci_d_us": 7500}


def make_scenario(**overrides):
    raw = {"ber": 1e-3, "payload_v_bytes": 50, "x": 1, "ci_v_us": 7500}
    raw.update(overrides)
    return validate_scenario(raw)


@pytest.fixture
def base_scenario():
    """BER 1e-3, 512-bit packets both ways, one transaction per event"""
    return make_scenario()


@pytest.fixture
def fig8_base():
    return make_scenario(ber=1e-5, x=2, **SATURATED_DISTURBER)


@pytest.fixture
def fig9_peak():
    return make_scenario(ber=5e-4, payload_v_bytes=125, **SATURATED_DISTURBER)


@pytest.fixture
def saturated_scenario():
    """m = 4 victim packets against 10 disturber packets in 7.5 ms, BER 1e-3"""
    return make_scenario(x=2, **SATURATED_DISTURBER)
