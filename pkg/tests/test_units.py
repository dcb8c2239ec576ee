import dataclasses
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpcdeph import (
    CONST,
    H_PLANCK,
    HBAR,
    UnknownUnitError,
    rate_from_si,
    rate_to_si,
    to_internal_energy,
)


def test_mev_to_uev():
    assert to_internal_energy(10, "meV") == 10000.0


def test_mv_bias_to_uev():
    assert to_internal_energy(1, "mV-bias") == 1000.0


def test_uev_identity():
    assert to_internal_energy(30, "ueV") == 30.0
    assert to_internal_energy(30, "μeV") == 30.0


def test_ev_to_uev():
    assert to_internal_energy(0.01, "eV") == 10000.0


def test_unknown_unit_rejected():
    with pytest.raises(UnknownUnitError):
        to_internal_energy(1.0, "GHz")


def test_rate_to_si():
    assert rate_to_si(0.0) == 0.0
    assert rate_to_si(0.01139) == pytest.approx(1.139e7)
    # D = T e V_d / h with T = 1/2, e V_d = 1000 ueV, h = 4.135667697 ueV ns
    assert rate_to_si(120.9) == pytest.approx(1.209e11)


def test_planck_consistency():
    assert abs(H_PLANCK - 2.0 * math.pi * HBAR) <= 1e-12 * H_PLANCK


def test_constant_values_match_codata():
    assert HBAR == pytest.approx(0.6582119569, rel=1e-9)
    assert H_PLANCK == pytest.approx(4.135667696, rel=1e-9)
    assert CONST.coulomb_nm == pytest.approx(1.43996454e6, rel=1e-8)


def test_constants_immutable():
    with pytest.raises(dataclasses.FrozenInstanceError):
        CONST.hbar = 1.0


@given(st.floats(min_value=1e-6, max_value=1e6))
def test_rate_round_trip(rate):
    assert rate_from_si(rate_to_si(rate)) == pytest.approx(rate, rel=1e-12)
    assert rate_to_si(rate_from_si(rate)) == pytest.approx(rate, rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=1e5))
def test_energy_frequency_round_trip(energy):
    # hbar times the angular frequency of an energy E recovers E
    assert HBAR * (energy / HBAR) == pytest.approx(energy, rel=1e-14)
