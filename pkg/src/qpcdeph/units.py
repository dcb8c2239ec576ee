"""Physical constants and the internal unit system.

Internal units are micro-electronvolt (ueV) for energy, nanosecond (ns)
for time and nanometre (nm) for length.  In this system hbar is of order
one and the experimentally relevant magnitudes (detunings of tens of ueV,
hopping rates of ~100/ns, dephasing times of hundreds of ns) all stay
within a few orders of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnknownUnitError

# 2019 SI definitions: h (J s) and e (C) are exact, so h and hbar in
# ueV ns are exact decimals; eps0 is the CODATA 2018 measured value.
_H_JS = 6.62607015e-34
_E_C = 1.602176634e-19
_EPS0_F_PER_M = 8.8541878128e-12


@dataclass(frozen=True)
class Constants:
    """Fundamental constants expressed in internal units."""

    hbar: float = _H_JS / _E_C / (2.0 * math.pi) * 1e15  # ueV ns
    h_planck: float = _H_JS / _E_C * 1e15  # ueV ns
    coulomb_nm: float = _E_C / (4.0 * math.pi * _EPS0_F_PER_M) * 1e15  # e^2/(4 pi eps0), ueV nm


CONST = Constants()

HBAR = CONST.hbar
H_PLANCK = CONST.h_planck
COULOMB_NM = CONST.coulomb_nm

# Accepted energy unit tags and their scale to ueV.  A drain bias of
# x mV gives each transported electron the energy e * x mV = 1000 x ueV,
# so "mV-bias" scales exactly like meV.
_ENERGY_SCALE = {
    "ueV": 1.0,
    "μeV": 1.0,  # Greek-mu spelling of ueV
    "meV": 1e3,
    "eV": 1e6,
    "mV-bias": 1e3,
}


def to_internal_energy(value: float, unit: str) -> float:
    """Convert an energy (or a drain bias in mV) to ueV."""
    try:
        scale = _ENERGY_SCALE[unit]
    except KeyError:
        known = ", ".join(sorted(set(_ENERGY_SCALE) - {"μeV"}))
        raise UnknownUnitError(f"unknown energy unit {unit!r} (known: {known})") from None
    return value * scale


def rate_to_si(rate_per_ns: float) -> float:
    """Convert a rate from 1/ns to 1/s."""
    return rate_per_ns * 1e9


def rate_from_si(rate_per_s: float) -> float:
    """Convert a rate from 1/s to 1/ns."""
    return rate_per_s * 1e-9
