import math

import pytest
from hypothesis import given, settings, strategies as st

from nucrates import (CONSTANTS, Bare, Cutoff, Depleted, DomainError, ReactionSystem,
                      ResonanceData, ResonancePrefactor, Screened, nonresonant_rate,
                      rate_breakdown, reduced_mass, resonant_probability, sommerfeld_z)
from nucrates.rates import kT, resonance_integral_params
from nucrates.selftest import direct_sigma_v

AMU = CONSTANTS["amu"]
# 30-digit evaluation of 2 pi (mu/2kT)**0.5 e**2/hbar from the constants table
Z_PP = 19.022561030625152307
# energy-space integrals at 30 digits, T = 1.5e7 K, unit charges and masses
TOY_SIGMA_V = 3.197465936228543e-22      # S(0) = 1 keV barn
TOY_RESONANCE = 86292617362.027161531    # E_r = kT, Gamma0 = 0.1 kT, Gamma1 = 0


def toy(T=1.5e7, s=(1.0, 0.0, 0.0), **kw):
    return ReactionSystem(1, 1, 1.0, 1.0, T, s, **kw)


@pytest.mark.parametrize("mi,mj,mu", [(1, 1, 0.5), (2, 2, 1.0), (1, 3, 0.75)])
def test_reduced_mass(mi, mj, mu):
    assert reduced_mass(ReactionSystem(1, 1, mi, mj, 1e7)) == pytest.approx(mu * AMU, rel=1e-15)


def test_barrier_strength():
    assert sommerfeld_z(toy(1.57e7)) == pytest.approx(Z_PP, rel=1e-13)
    assert sommerfeld_z(toy(2e7)) / sommerfeld_z(toy(1e7)) == pytest.approx(2 ** -0.5, rel=1e-15)
    two = ReactionSystem(2, 1, 1.0, 1.0, 1e7)
    assert sommerfeld_z(two) == pytest.approx(2 * sommerfeld_z(toy(1e7)), rel=1e-15)


def test_constants_are_read_only():
    with pytest.raises(TypeError):
        CONSTANTS["k_B"] = 1.0


def test_zero_cross_section():
    assert nonresonant_rate(toy(s=(0.0, 0.0, 0.0))) == 0.0


def test_toy_rate_golden():
    b = rate_breakdown(toy())
    assert b.sigma_v == pytest.approx(TOY_SIGMA_V, rel=1e-9)
    assert b.rate == b.sigma_v


def test_identical_particles_halve_the_rate():
    b = rate_breakdown(toy(ni=3.0, nj=3.0, same_species=True))
    assert b.rate_distinct == pytest.approx(9 * TOY_SIGMA_V, rel=1e-9)
    assert b.rate == b.rate_distinct / 2


@pytest.mark.parametrize("T", [1e6, 5e6, 1.5e7, 5e7, 1e8])
def test_reduced_variables_match_energy_integral(T):
    system = toy(T, (1.0, 0.3, 0.02))
    assert rate_breakdown(system).sigma_v == pytest.approx(direct_sigma_v(system), rel=1e-8)


@pytest.mark.parametrize("T", [1e6, 1.5e7, 1e8])
def test_mode_limits(T):
    system = toy(T, (1.0, 0.3, 0.02))
    bare = nonresonant_rate(system)
    assert nonresonant_rate(system, Screened(1e-12)) == pytest.approx(bare, rel=1e-6)
    assert nonresonant_rate(system, Screened(0.0)) == bare
    assert nonresonant_rate(system, Cutoff(50.0)) == pytest.approx(bare, rel=1e-8)


def test_modes_order_rates():
    system = toy(s=(1.0, 0.3, 0.02))
    bare = nonresonant_rate(system)
    assert nonresonant_rate(system, Screened(1.0)) > bare
    assert nonresonant_rate(system, Cutoff(2.0)) < bare
    assert nonresonant_rate(system, Depleted(0.1, 1.0)) < bare


def test_rate_rises_with_temperature():
    rates = [nonresonant_rate(toy(T)) for T in (1e6, 3e6, 1e7, 3e7, 1e8)]
    assert rates == sorted(rates)


@settings(max_examples=15, deadline=None)
@given(zi=st.integers(1, 6), zj=st.integers(1, 6), mi=st.floats(0.5, 16), mj=st.floats(0.5, 16),
       ni=st.floats(0, 1e3), nj=st.floats(0, 1e3), T=st.floats(3e6, 3e8),
       mode=st.sampled_from([Bare(), Cutoff(5.0), Depleted(0.05, 1.0), Screened(0.5)]))
def test_swap_symmetry_and_positivity(zi, zj, mi, mj, ni, nj, T, mode):
    s = ReactionSystem(zi, zj, mi, mj, T, (1.0, 0.1, 0.01), ni, nj)
    r = nonresonant_rate(s, mode)
    assert r >= 0
    assert nonresonant_rate(s.swapped(), mode) == pytest.approx(r, rel=1e-12, abs=1e-300)


def test_invalid_systems():
    with pytest.raises(DomainError):
        ReactionSystem(1, 1, 0.0, 1.0, 1e7)
    with pytest.raises(DomainError):
        ReactionSystem(1, 1, 1.0, 1.0, -5.0)
    with pytest.raises(DomainError):
        ResonanceData(1.0, 0.0, 0.0)


def test_resonance_parameter_collapse():
    system = toy()
    energy = kT(system) / CONSTANTS["keV"]
    res = ResonanceData(2.0, 0.4, 0.0)
    assert (res.stretch, res.b, res.g) == (1.0, 2.0, 0.2)
    p = resonance_integral_params(system, res)
    assert p.a == 1.0 and p.z == sommerfeld_z(system)
    assert p.resonance.c == pytest.approx(2.0 / energy) and p.resonance.g == pytest.approx(0.2 / energy)


def test_toy_resonance_golden():
    system = toy()
    energy = kT(system) / CONSTANTS["keV"]
    value = resonant_probability(system, ResonanceData(energy, 0.1 * energy, 0.0))
    assert value == pytest.approx(TOY_RESONANCE, rel=1e-9)


def test_resonance_prefactor_is_multiplicative():
    system = toy()
    energy = kT(system) / CONSTANTS["keV"]
    base = resonant_probability(system, ResonanceData(energy, 0.1 * energy, 0.05))
    for field in ("R0", "w", "Gamma_kl", "D"):
        scaled = ResonanceData(energy, 0.1 * energy, 0.05, ResonancePrefactor(**{field: 3.0}))
        assert resonant_probability(system, scaled) == pytest.approx(3 * base, rel=1e-14)
