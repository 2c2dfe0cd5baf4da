import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from nucrates import (DegenerateNu, IntegralParams, Method, SeriesControl, check_degenerate,
                      i2_dispatch, i2_finite_series, i2_infinite_series, oracle_eval)

# 30-digit split Gauss-Legendre references
I1_025_1_1 = 0.30854240049368543651          # int_0^inf y**0.25 e**(-y - 1/sqrt y)
CUT_03_1_1_D2 = 0.28351830842259228978       # int_0^2 v**-0.7 e**(-v - 1/sqrt v)


def test_degeneracy_rule():
    assert check_degenerate(1.0, 1e-6).degenerate
    assert not check_degenerate(0.75, 1e-6).degenerate
    # |2 nu - 1| = 8e-7 < 2e-6: the comparison is made on 2 nu
    rep = check_degenerate(0.5000004, 1e-6)
    assert rep.degenerate and rep.nearest_half_integer == 0.5
    assert rep.distance == pytest.approx(4e-7, rel=1e-6)


def test_infinite_series_examples():
    assert i2_infinite_series(0.25, 1.0, 1e-12).value == pytest.approx(math.gamma(1.25), abs=1e-9)
    r = i2_infinite_series(0.25, 1.0, 1.0)
    assert r.method is Method.SERIES and r.converged
    assert r.value == pytest.approx(I1_025_1_1, rel=1e-8)
    with pytest.raises(DegenerateNu):
        i2_infinite_series(1.0, 1.0, 1.0)


def test_finite_series_examples():
    ref = float(mpmath.gammainc(0.3, 0, 1))
    assert i2_finite_series(0.3, 1.0, 1e-30, 1.0).value == pytest.approx(ref, abs=1e-8)
    assert i2_finite_series(0.3, 1.0, 1.0, 2.0).value == pytest.approx(CUT_03_1_1_D2, rel=1e-7)
    with pytest.raises(DegenerateNu):
        i2_finite_series(0.5, 1.0, 1.0, 1.0)


def test_dispatch_routing():
    assert i2_dispatch(1.0, 1.0, 1.0, 0.5).method is Method.QUADRATURE
    assert i2_dispatch(0.25, 1.0, 1.0, 0.5).method is Method.SERIES
    r = i2_dispatch(0.25, 1.0, 1.0, 0.7)
    assert r.method is Method.QUADRATURE and any("rho" in w for w in r.warnings)
    assert i2_dispatch(0.25, 1.0, 1.0, 0.5, d=3.0).method is Method.SERIES


def test_dispatch_zero_barrier_matches_closed_form():
    r = i2_dispatch(0.25, 2.0, 0.0, 0.5)
    assert r.value == pytest.approx(math.gamma(1.25) / 2 ** 1.25, rel=1e-12)
    assert not r.warnings
    r = i2_dispatch(0.25, 2.0, 0.0, 0.5, d=1.5)
    assert r.value == pytest.approx(float(mpmath.gammainc(1.25, 0, 3.0)) / 2 ** 1.25, rel=1e-12)


@pytest.mark.parametrize("nu", [1.1, 1.25, 1.75, 2.3, 3.2])
@pytest.mark.parametrize("a", [1.0, 2.0])
@pytest.mark.parametrize("z", [0.5, 1.0, 2.0])
def test_large_cutoff_reaches_infinite_limit(nu, a, z):
    finite = i2_finite_series(nu, a, z, 40.0).value
    assert finite == pytest.approx(i2_infinite_series(nu - 1.0, a, z).value, rel=1e-6)


@pytest.mark.parametrize("nu", [0.3, 1.3, 2.2])
@pytest.mark.parametrize("z,d", [(0.5, 0.5), (1.0, 1.0), (2.0, 5.0), (5.0, 20.0)])
def test_double_series_settles(nu, z, d):
    ctl = SeriesControl(rel_tol=1e-15, max_terms=128)
    a = i2_finite_series(nu, 1.0, z, d, ctl).value
    b = i2_finite_series(nu, 1.0, z, d, SeriesControl(rel_tol=1e-15, max_terms=256)).value
    assert abs(a - b) <= 1e-15 * abs(a)


@pytest.mark.parametrize("base", [0.25, -0.5])
def test_continuous_up_to_degeneracy_guard(base):
    for k in range(1, 7):
        nu = base + 10.0 ** -k
        if check_degenerate(nu + 1.0).degenerate:
            with pytest.raises(DegenerateNu):
                i2_infinite_series(nu, 1.0, 1.0)
            continue
        ref = oracle_eval("I1", IntegralParams(nu, 1.0, 1.0, 0.5)).value
        assert i2_infinite_series(nu, 1.0, 1.0).value == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("z", [20.0, 60.0])
def test_heavy_cancellation_regime(z):
    ref = oracle_eval("I1", IntegralParams(0.3, 1.0, z, 0.5)).value
    assert i2_infinite_series(0.3, 1.0, z).value == pytest.approx(ref, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(nu=st.floats(-0.95, 4).filter(lambda v: not check_degenerate(v + 1).degenerate),
       a=st.floats(0.3, 3), z=st.floats(0.05, 12))
def test_infinite_series_matches_quadrature(nu, a, z):
    ref = oracle_eval("I1", IntegralParams(nu, a, z, 0.5)).value
    assert i2_infinite_series(nu, a, z).value == pytest.approx(ref, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(nu=st.floats(0.05, 4).filter(lambda v: not check_degenerate(v).degenerate),
       z=st.floats(0.05, 4), d=st.floats(0.1, 8))
def test_finite_series_matches_quadrature(nu, z, d):
    ref = oracle_eval("I2", IntegralParams(nu - 1.0, 1.0, z, 0.5, cutoff_d=d)).value
    assert i2_finite_series(nu, 1.0, z, d).value == pytest.approx(ref, rel=1e-7)
