"""Detector physics: transmissions, hopping rates and the dephasing rate.

The charge detector is a quantum point contact (QPC) a distance ``a``
from the right dot.  Its barrier is modelled as a delta potential, which
transmits an electron at energy E with probability 1/(1 + g E_F/E) for a
single dimensionless barrier strength g.  Moving the double-dot charge
from (1,1) to (0,2) adds the Coulomb energy e^2/(4 pi eps_r eps0 a) to
the barrier, lowering the transmission at the Fermi energy by

    dT = [e^2/(4 pi eps_r eps0 a)] * T (1 - T) / E_F.

Detector electrons hop across the QPC at D = T e V_d / h when the dots
are in |(1,1)S> and at D' = T' e V_d / h (T' = T - dT) when they are in
|(0,2)S>; the which-path information carried by those electrons damps
the dot coherence at

    Gamma_d = (sqrt(D) - sqrt(D'))^2 / 2,

which for dT << T reduces to e V_d (dT)^2 / (16 pi hbar T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PerturbationError
from .units import COULOMB_NM, H_PLANCK, HBAR

# gamma_d of a TunnelingRates must equal (sqrt(D)-sqrt(D'))^2/2 this tightly.
GAMMA_CONSISTENCY_RTOL = 1e-12

# dT/T beyond which the quadratic expansion of Gamma_d is flagged.
EXPANSION_VALIDITY_LIMIT = 0.2


@dataclass(frozen=True)
class QpcConfig:
    """Physical description of the detector.

    transmission      QPC transmission at the Fermi energy for |(1,1)S>
    fermi_energy      E_F in ueV
    bias_energy       e V_d in ueV (drain voltage times electron charge)
    distance          QPC position relative to the right dot, nm
    rel_permittivity  relative permittivity of the host material
    """

    transmission: float
    fermi_energy: float
    bias_energy: float
    distance: float
    rel_permittivity: float

    def __post_init__(self):
        if not 0.0 < self.transmission < 1.0:
            raise ValueError(f"transmission must be in (0, 1), got {self.transmission}")
        if not self.fermi_energy > 0.0:
            raise ValueError(f"fermi_energy must be positive, got {self.fermi_energy}")
        if self.bias_energy < 0.0:
            raise ValueError(f"bias_energy must be non-negative, got {self.bias_energy}")
        if not self.distance > 0.0:
            raise ValueError(f"distance must be positive, got {self.distance}")
        if self.rel_permittivity < 1.0:
            raise ValueError(f"rel_permittivity must be >= 1, got {self.rel_permittivity}")


@dataclass(frozen=True)
class TunnelingRates:
    """Detector hopping rates and the dephasing rate they imply, in 1/ns."""

    d_rate: float
    d_prime_rate: float
    gamma_d: float

    def __post_init__(self):
        if not self.d_rate >= self.d_prime_rate >= 0.0:
            raise ValueError(
                f"require d_rate >= d_prime_rate >= 0, got {self.d_rate}, {self.d_prime_rate}"
            )
        expected = 0.5 * (math.sqrt(self.d_rate) - math.sqrt(self.d_prime_rate)) ** 2
        scale = max(expected, 1e-300)
        if abs(self.gamma_d - expected) > GAMMA_CONSISTENCY_RTOL * scale:
            raise ValueError(
                f"gamma_d={self.gamma_d} inconsistent with hopping rates "
                f"(expected {expected})"
            )

    @classmethod
    def from_hoppings(cls, d_rate: float, d_prime_rate: float) -> "TunnelingRates":
        gamma = 0.5 * (math.sqrt(d_rate) - math.sqrt(d_prime_rate)) ** 2
        return cls(d_rate=d_rate, d_prime_rate=d_prime_rate, gamma_d=gamma)


@dataclass(frozen=True)
class ExpandedGammaD:
    """Quadratic-in-dT approximation of the dephasing rate, 1/ns.

    ``within_validity`` is False when dT/T exceeded the trust limit of
    the expansion and the value should only be used as a rough estimate.
    """

    value: float
    within_validity: bool

    def __float__(self) -> float:
        return self.value


def delta_barrier_transmission(barrier_strength: float, energy_ratio: float) -> float:
    """Transmission of a delta barrier of dimensionless strength g.

    ``energy_ratio`` is E/E_F; g is hbar^2 b^2 / (2 m* E_F) for a barrier
    potential (hbar^2 b / m*) delta(x).  Strictly increasing in E.
    """
    if barrier_strength < 0.0:
        raise ValueError(f"barrier_strength must be >= 0, got {barrier_strength}")
    if not energy_ratio > 0.0:
        raise ValueError(f"energy_ratio must be positive, got {energy_ratio}")
    return 1.0 / (1.0 + barrier_strength / energy_ratio)


def coulomb_shift(distance: float, rel_permittivity: float) -> float:
    """Barrier energy shift e^2/(4 pi eps_r eps0 a) in ueV for a in nm."""
    if not distance > 0.0:
        raise ValueError(f"distance must be positive, got {distance}")
    if rel_permittivity < 1.0:
        raise ValueError(f"rel_permittivity must be >= 1, got {rel_permittivity}")
    return COULOMB_NM / (rel_permittivity * distance)


def transmission_shift(
    transmission: float, fermi_energy: float, distance: float, rel_permittivity: float
) -> float:
    """Linear-response transmission drop dT caused by the extra dot charge.

    Unlike :func:`transmission_change` this accepts the boundary values
    T = 0 and T = 1 (where the shift vanishes identically).
    """
    if not 0.0 <= transmission <= 1.0:
        raise ValueError(f"transmission must be in [0, 1], got {transmission}")
    shift = coulomb_shift(distance, rel_permittivity)
    return shift * transmission * (1.0 - transmission) / fermi_energy


def transmission_change(cfg: QpcConfig) -> float:
    """dT = T - T' for a valid detector configuration.

    Rejects configurations where the linear-response formula would push
    the shifted transmission T' = T - dT to zero or below.
    """
    delta = transmission_shift(
        cfg.transmission, cfg.fermi_energy, cfg.distance, cfg.rel_permittivity
    )
    if delta >= cfg.transmission:
        raise PerturbationError(
            f"transmission shift dT={delta} reaches T={cfg.transmission}; "
            "the linear-response estimate is outside its validity range"
        )
    return delta


def shifted_transmission(cfg: QpcConfig) -> float:
    """T' = T - dT, the transmission with the extra electron on the right dot."""
    return cfg.transmission - transmission_change(cfg)


def rates(cfg: QpcConfig) -> TunnelingRates:
    """Hopping rates D, D' and dephasing rate Gamma_d for a detector config."""
    t_prime = shifted_transmission(cfg)
    d_rate = cfg.transmission * cfg.bias_energy / H_PLANCK
    d_prime = t_prime * cfg.bias_energy / H_PLANCK
    return TunnelingRates.from_hoppings(d_rate, d_prime)


def gamma_d_expanded(cfg: QpcConfig) -> ExpandedGammaD:
    """Dephasing rate from the quadratic expansion e V_d dT^2/(16 pi hbar T).

    Approximates ``rates(cfg).gamma_d`` to relative order dT/T; the exact
    form is the one to use in computations, this one exists as a
    cross-check.
    """
    delta = transmission_change(cfg)
    value = cfg.bias_energy * delta**2 / (16.0 * math.pi * HBAR * cfg.transmission)
    return ExpandedGammaD(
        value=value,
        within_validity=delta / cfg.transmission < EXPANSION_VALIDITY_LIMIT,
    )
