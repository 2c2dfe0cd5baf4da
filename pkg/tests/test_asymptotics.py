import math

import pytest
from hypothesis import given, strategies as st

from nucrates import (Depletion, IntegralParams, Method, OutOfRegime, Resonance,
                      asymptotic_eval, g3003_asymptotic, hyper_1f0, oracle_eval,
                      select_method)
from nucrates.asymptotics import RegimeThresholds

# 30-digit split Gauss-Legendre reference: nu=0 a=1 z=8 c=1 g=2
I5_Z8 = 0.00022684722035379171652


def P(nu=0.0, a=1.0, z=1.0, rho=0.5, **kw):
    return IntegralParams(nu, a, z, rho, **kw)


def test_g_asymptotic_closed_form():
    x = 1000.0
    lead = 2 * math.pi / math.sqrt(3) * math.exp(-30) * x ** (1 / 6)
    assert g3003_asymptotic(x, 0.0) == pytest.approx(lead, rel=1e-13)
    assert g3003_asymptotic(x, 1.0) == pytest.approx(lead * x ** (1 / 3), rel=1e-13)


def test_g_asymptotic_against_quadrature():
    # G(x | 0, 1/2, 1) = sqrt(pi) int_0^inf e**(-y - 2 sqrt(x/y)) dy
    x = 125.0
    g = math.sqrt(math.pi) * oracle_eval("I1", P(z=2 * math.sqrt(x))).value
    assert g3003_asymptotic(x, 0.0) / g == pytest.approx(1.0, abs=0.15)


def test_plain_integral_form():
    expected = 2 * math.sqrt(math.pi / 3) * 100 ** (1 / 6) * math.exp(-3 * 100 ** (1 / 3))
    r = asymptotic_eval("I1", P(z=20.0))
    assert r.value == pytest.approx(expected, rel=1e-13)
    assert r.method is Method.ASYMPTOTIC
    assert r.abs_error == pytest.approx(r.value * 100 ** (-1 / 3))


def test_ratio_to_quadrature_approaches_one_monotonically():
    ratios = [asymptotic_eval("I1", P(z=z)).value / oracle_eval("I1", P(z=z)).value
              for z in (20, 50, 100, 200)]
    gaps = [abs(1 - r) for r in ratios]
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] < 0.01


def test_general_resonance_example():
    p = P(z=8.0, resonance=Resonance(1, 2, 1))
    y0 = 4 ** (2 / 3)
    gamma2 = 0.25 * (1 - y0) ** 2
    assert gamma2 < 1
    r = asymptotic_eval("I7", p)
    expected = g3003_asymptotic(16.0, 0.0) / math.sqrt(math.pi) / 4 / (1 + gamma2)
    assert r.value == pytest.approx(expected, rel=1e-13)
    assert r.value == pytest.approx(I5_Z8, rel=0.25)


def test_general_resonance_at_other_decay_rates():
    errs = []
    for z in (20, 50, 100):
        p = P(nu=0.5, a=2.0, z=z, resonance=Resonance(3, 20, 2), depletion=Depletion(0.001, 1))
        errs.append(abs(asymptotic_eval("I7", p).value / oracle_eval("I7", p).value - 1))
    assert errs == sorted(errs, reverse=True) and errs[-1] < 0.02


def test_cutoff_endpoint_form():
    d, z = 1.0, 100.0
    w = z * z / (4 * d)
    expected = d * math.exp(-d) / math.sqrt(w) * math.exp(-2 * math.sqrt(w))
    assert asymptotic_eval("I2", P(z=z, cutoff_d=d)).value == pytest.approx(expected, rel=1e-13)


def test_out_of_regime():
    with pytest.raises(OutOfRegime):
        asymptotic_eval("I1", P(a=2.0, z=50.0))
    with pytest.raises(OutOfRegime):
        asymptotic_eval("I4", P(z=20.0, screening_t=10.0))
    with pytest.raises(OutOfRegime):
        asymptotic_eval("I7", P(z=50.0, resonance=Resonance(1, 2, 2)))
    with pytest.raises(OutOfRegime):
        asymptotic_eval("I2", P(z=20.0, cutoff_d=10.0))
    with pytest.raises(OutOfRegime):
        asymptotic_eval("I1", P(z=50.0, rho=0.3))


def test_depletion_factor_vanishes_with_b():
    plain = asymptotic_eval("I1", P(nu=0.5, z=40.0)).value
    weak = asymptotic_eval("I3", P(nu=0.5, z=40.0, depletion=Depletion(1e-15, 2))).value
    assert weak == pytest.approx(plain, rel=1e-13)


@given(z=st.floats(5, 300), c=st.floats(0.1, 40), g=st.floats(0.1, 60), nu=st.floats(0, 3))
def test_general_resonance_reduces_to_simple_one(z, c, g, nu):
    y0 = (z / 2) ** (2 / 3)
    eta = (1 - y0 / c) ** 2
    gamma2 = eta * c * c / (g * g)
    if gamma2 >= 1:
        return
    assert hyper_1f0(1.0, -gamma2) == pytest.approx(1 / (1 + eta * c * c / (g * g)), rel=1e-12)
    i5 = asymptotic_eval("I5", P(nu=nu, z=z, resonance=Resonance(c, g))).value
    i7 = asymptotic_eval("I7", P(nu=nu, z=z, resonance=Resonance(c, g, 1))).value
    assert i7 == pytest.approx(i5, rel=1e-12)


def test_method_selection_examples():
    assert select_method("I1", P(nu=0.25)).method is Method.SERIES
    assert select_method("I1", P(z=100.0)).method is Method.ASYMPTOTIC
    assert select_method("I1", P(rho=0.3)).method is Method.QUADRATURE
    c = select_method("I1", P(nu=1.0))
    assert c.method is Method.QUADRATURE and c.reason == "degenerate nu"
    assert c.regime_metric == 0.25


def test_method_selection_special_cases():
    assert select_method("I4", P(nu=2.0, screening_t=1.0)).method is Method.SERIES
    assert select_method("I4", P(nu=0.5, screening_t=1.0)).method is Method.QUADRATURE
    assert select_method("I5", P(nu=0.25, z=30.0, resonance=Resonance(1, 2))).method \
        is Method.QUADRATURE
    # cut-off regime is measured by z**2/4d, here 320 although a z**2/4 = 1600
    assert select_method("I2", P(nu=0.25, z=80.0, cutoff_d=5.0)).method is Method.SERIES
    assert select_method("I2", P(nu=0.25, z=100.0, cutoff_d=1.0)).method is Method.ASYMPTOTIC
    never = RegimeThresholds(asymptotic_metric=math.inf)
    assert select_method("I1", P(z=100.0), never).method is Method.QUADRATURE


@given(nu=st.floats(-0.9, 3), z=st.floats(0, 200), rho=st.sampled_from([0.5, 0.3]))
def test_selection_is_pure(nu, z, rho):
    p = P(nu=nu, z=z, rho=rho)
    assert select_method("I1", p) == select_method("I1", p)
    assert select_method("I1", p).regime_metric >= 0
