import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qpcdeph import (
    PerturbationError,
    QpcConfig,
    TunnelingRates,
    coulomb_shift,
    delta_barrier_transmission,
    gamma_d_expanded,
    rate_to_si,
    rates,
    shifted_transmission,
    transmission_change,
    transmission_shift,
)


def square_barrier_transmission(strength, energy):
    """Transfer-matrix transmission of a thin square barrier (hbar = m = 1).

    Width w -> 0 at fixed area V0*w = alpha reproduces a delta barrier;
    with E_F = 1 the dimensionless strength is g = alpha^2/2.
    """
    w = 1e-6
    alpha = math.sqrt(2.0 * strength)
    v0 = alpha / w
    q = math.sqrt(2.0 * (v0 - energy))
    return 1.0 / (1.0 + v0**2 * math.sinh(q * w) ** 2 / (4.0 * energy * (v0 - energy)))


def test_no_barrier_is_transparent():
    for x in (0.3, 1.0, 7.5):
        assert delta_barrier_transmission(0.0, x) == 1.0


def test_half_transmission_at_unit_strength():
    assert delta_barrier_transmission(1.0, 1.0) == 0.5


def test_transmission_above_fermi_energy():
    # 1/(1 + 1/2) = 2/3, cross-checked against a plane-wave scattering solver
    assert delta_barrier_transmission(1.0, 2.0) == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert delta_barrier_transmission(1.0, 2.0) == pytest.approx(
        square_barrier_transmission(1.0, 2.0), rel=1e-5
    )


@pytest.mark.parametrize("g", [0.2, 1.0, 3.0])
@pytest.mark.parametrize("x", [0.5, 1.0, 4.0])
def test_delta_barrier_matches_scattering_solver(g, x):
    assert delta_barrier_transmission(g, x) == pytest.approx(
        square_barrier_transmission(g, x), rel=1e-5
    )


@given(
    st.floats(min_value=1e-3, max_value=50.0),
    st.floats(min_value=1e-3, max_value=50.0),
    st.floats(min_value=1e-3, max_value=50.0),
)
def test_delta_barrier_increases_with_energy(g, x1, dx):
    assert delta_barrier_transmission(g, x1 + dx) > delta_barrier_transmission(g, x1)


def test_delta_barrier_rejects_bad_input():
    with pytest.raises(ValueError):
        delta_barrier_transmission(1.0, 0.0)
    with pytest.raises(ValueError):
        delta_barrier_transmission(1.0, -2.0)
    with pytest.raises(ValueError):
        delta_barrier_transmission(-0.5, 1.0)


def test_coulomb_shift_reference_value():
    # 1.43996454e6 / (13 * 200) by hand
    assert coulomb_shift(200.0, 13.0) == pytest.approx(553.832518, rel=1e-8)


def test_coulomb_shift_scalings():
    base = coulomb_shift(200.0, 13.0)
    assert coulomb_shift(400.0, 13.0) == pytest.approx(base / 2.0, rel=1e-15)
    assert coulomb_shift(200.0, 26.0) == pytest.approx(base / 2.0, rel=1e-15)


def test_coulomb_shift_rejects_bad_distance():
    with pytest.raises(ValueError):
        coulomb_shift(0.0, 13.0)
    with pytest.raises(ValueError):
        coulomb_shift(-10.0, 13.0)


def test_qpc_config_validation():
    good = dict(
        transmission=0.5, fermi_energy=1e4, bias_energy=1e3, distance=200.0, rel_permittivity=13.0
    )
    QpcConfig(**good)
    for key, bad in [
        ("transmission", 0.0),
        ("transmission", 1.0),
        ("fermi_energy", 0.0),
        ("bias_energy", -1.0),
        ("distance", 0.0),
        ("rel_permittivity", 0.5),
    ]:
        with pytest.raises(ValueError):
            QpcConfig(**{**good, key: bad})


def test_transmission_change_paper_value(paper_qpc):
    ratio = transmission_change(paper_qpc) / paper_qpc.transmission
    assert 0.0272 <= ratio <= 0.0282


def test_transmission_shift_vanishes_at_boundaries():
    assert transmission_shift(1.0, 1e4, 200.0, 13.0) == 0.0
    assert transmission_shift(0.0, 1e4, 200.0, 13.0) == 0.0


def test_transmission_change_scales_inversely_with_distance(paper_qpc):
    import dataclasses

    far = dataclasses.replace(paper_qpc, distance=2.0 * paper_qpc.distance)
    assert transmission_change(far) == pytest.approx(transmission_change(paper_qpc) / 2.0, rel=1e-15)


@given(
    st.floats(min_value=50.0, max_value=5000.0),
    st.floats(min_value=1.0, max_value=100.0),
    st.floats(min_value=1.0, max_value=30.0),
)
def test_transmission_change_monotone(a, da, eps_r):
    assume(transmission_shift(0.5, 1e4, a, eps_r) < 0.5)
    base = dict(transmission=0.5, fermi_energy=1e4, bias_energy=1e3, rel_permittivity=eps_r)
    near = transmission_change(QpcConfig(distance=a, **base))
    far = transmission_change(QpcConfig(distance=a + da, **base))
    assert far < near
    thicker = dict(base, rel_permittivity=eps_r + 1.0)
    assert transmission_change(QpcConfig(distance=a, **thicker)) < near


def test_transmission_change_rejects_nonperturbative_shift():
    cfg = QpcConfig(
        transmission=0.1, fermi_energy=400.0, bias_energy=1e3, distance=200.0, rel_permittivity=13.0
    )
    with pytest.raises(PerturbationError):
        transmission_change(cfg)


def test_rates_paper_numbers(paper_qpc, paper_rates):
    # D = T e V_d / h = 0.5 * 1000 / 4.135667696923859 by hand
    assert paper_rates.d_rate == pytest.approx(120.8994621042459, rel=1e-12)
    assert rate_to_si(paper_rates.d_rate) == pytest.approx(1.209e11, rel=1e-4)
    gamma_si = rate_to_si(paper_rates.gamma_d)
    assert abs(gamma_si - 1.139e7) / 1.139e7 < 0.05
    assert 1.08e7 <= gamma_si <= 1.20e7
    assert paper_rates.d_rate > paper_rates.d_prime_rate > 0.0
    assert shifted_transmission(paper_qpc) == pytest.approx(
        paper_qpc.transmission - transmission_change(paper_qpc), rel=1e-15
    )


def test_rates_zero_shift_gives_zero_gamma():
    cfg = QpcConfig(
        transmission=0.5,
        fermi_energy=1e4,
        bias_energy=1e3,
        distance=math.inf,
        rel_permittivity=13.0,
    )
    r = rates(cfg)
    assert r.gamma_d == 0.0
    assert r.d_rate == r.d_prime_rate


def test_gamma_doubles_with_bias(paper_qpc, paper_rates):
    import dataclasses

    doubled = rates(dataclasses.replace(paper_qpc, bias_energy=2.0 * paper_qpc.bias_energy))
    assert doubled.gamma_d == pytest.approx(2.0 * paper_rates.gamma_d, rel=1e-14)


def test_gamma_distance_scaling(paper_qpc, paper_rates):
    import dataclasses

    far = rates(dataclasses.replace(paper_qpc, distance=2.0 * paper_qpc.distance))
    assert 0.24 <= far.gamma_d / paper_rates.gamma_d <= 0.26


def test_tunneling_rates_validation():
    with pytest.raises(ValueError):
        TunnelingRates(d_rate=1.0, d_prime_rate=2.0, gamma_d=0.0)
    with pytest.raises(ValueError):
        TunnelingRates(d_rate=-1.0, d_prime_rate=-2.0, gamma_d=0.0)
    with pytest.raises(ValueError):
        TunnelingRates(d_rate=4.0, d_prime_rate=1.0, gamma_d=0.3)
    r = TunnelingRates.from_hoppings(4.0, 1.0)
    assert r.gamma_d == pytest.approx(0.5, rel=1e-15)


def test_expansion_close_to_exact(paper_qpc, paper_rates):
    approx = gamma_d_expanded(paper_qpc)
    assert approx.within_validity
    assert abs(approx.value - paper_rates.gamma_d) / paper_rates.gamma_d < 0.03


def test_expansion_zero_shift():
    cfg = QpcConfig(
        transmission=0.5,
        fermi_energy=1e4,
        bias_energy=1e3,
        distance=math.inf,
        rel_permittivity=13.0,
    )
    assert gamma_d_expanded(cfg).value == 0.0


def test_expansion_quadratic_in_shift(paper_qpc):
    import dataclasses

    # halving the distance doubles dT, so the expanded rate quadruples
    near = gamma_d_expanded(dataclasses.replace(paper_qpc, distance=paper_qpc.distance / 2.0))
    assert near.value == pytest.approx(4.0 * gamma_d_expanded(paper_qpc).value, rel=1e-13)


def test_expansion_flags_large_shift():
    cfg = QpcConfig(
        transmission=0.5, fermi_energy=1e4, bias_energy=1e3, distance=300.0, rel_permittivity=1.0
    )
    approx = gamma_d_expanded(cfg)
    assert transmission_change(cfg) / cfg.transmission >= 0.2
    assert not approx.within_validity


@given(
    st.floats(min_value=0.05, max_value=0.95),
    st.floats(min_value=1e3, max_value=1e5),
    st.floats(min_value=50.0, max_value=2000.0),
    st.floats(min_value=1.0, max_value=30.0),
)
def test_expansion_error_bounded_by_shift_ratio(t, e_f, a, eps_r):
    assume(transmission_shift(t, e_f, a, eps_r) < 0.1 * t)
    cfg = QpcConfig(
        transmission=t, fermi_energy=e_f, bias_energy=1e3, distance=a, rel_permittivity=eps_r
    )
    ratio = transmission_change(cfg) / t
    exact = rates(cfg).gamma_d
    approx = gamma_d_expanded(cfg).value
    assert abs(approx - exact) <= ratio * exact


def test_gamma_nonnegative_and_zero_iff_equal_transmissions(paper_rates):
    assert paper_rates.gamma_d > 0.0
    same = TunnelingRates.from_hoppings(3.0, 3.0)
    assert same.gamma_d == 0.0
