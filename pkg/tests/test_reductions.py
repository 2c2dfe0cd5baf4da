
import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from nucrates import (CancellationError, Depletion, IntegralParams, Method, NonConvergence,
                      Resonance, evaluate, i2_dispatch, i3_eval, i4_eval, i5_eval, i7_eval,
                      oracle_eval, resonant_window)
from nucrates.reductions import resonant_series

# 30-digit split Gauss-Legendre references
I3_B0001 = 0.30716898464454153856    # nu=0.25 a=1 z=1 b=0.001 delta=2
I4_T1 = 0.54215019788659677894       # nu=1 a=1 z=1 t=1
I4_T5 = 0.66275075021260651423       # nu=0 a=1 z=1 t=5
I5_NARROW = 0.0685227066126260385    # nu=0 a=1 z=0.9 c=1 g=2
I7_POW2 = 0.01528964075541394145     # same with pow=2
I6_NARROW = 0.067689585912500224823  # same with pow=1 b=0.01 delta=1
# int_0^inf e**-y/(1+y**2) dy = Ci(1) sin 1 + (pi/2 - Si(1)) cos 1
LORENTZ_AT_ORIGIN = 0.62144962423581335764


def P(nu, a, z, **kw):
    return IntegralParams(nu, a, z, 0.5, **kw)


# depleted tail ------------------------------------------------------------

def test_vanishing_depletion_gives_plain_integral():
    i1 = i2_dispatch(0.25, 1.0, 1.0, 0.5).value
    assert i3_eval(P(0.25, 1, 1, depletion=Depletion(1e-12, 2))).value == pytest.approx(i1, abs=1e-8)


def test_weak_depletion():
    r = i3_eval(P(0.25, 1, 1, depletion=Depletion(0.001, 2)))
    assert r.method is Method.SERIES
    assert r.value == pytest.approx(I3_B0001, abs=1e-7)


def test_strong_depletion_trips_cancellation_guard():
    with pytest.raises(CancellationError):
        i3_eval(P(0.25, 1, 1, depletion=Depletion(50, 1)))
    # the top-level evaluator retries by quadrature
    p = P(0.25, 1, 1, depletion=Depletion(50, 1))
    r = evaluate("I3", p)
    assert r.method is Method.QUADRATURE
    assert r.value == oracle_eval("I3", p).value


def test_depletion_monotone_in_b():
    values = [i2_dispatch(0.25, 1.0, 1.0, 0.5).value]
    values += [i3_eval(P(0.25, 1, 1, depletion=Depletion(b, 1))).value for b in (0.01, 0.1)]
    assert values == sorted(values, reverse=True)


def test_super_linear_depletion_is_asymptotic():
    # inner integrals grow like Gamma(2m): summed to the smallest term
    p = P(0.25, 1, 1, depletion=Depletion(0.01, 2))
    r = i3_eval(p)
    assert any("smallest term" in w for w in r.warnings)
    assert r.value == pytest.approx(oracle_eval("I3", p).value, rel=1e-7)


# screening ----------------------------------------------------------------

def test_shift_to_zero():
    i1 = oracle_eval("I1", P(0, 1, 1)).value
    assert i4_eval(P(0, 1, 1, screening_t=1e-8)).value == pytest.approx(i1, rel=1e-6)


def test_unit_shift_is_two_terms():
    r = i4_eval(P(1, 1, 1, screening_t=1.0))
    assert r.terms_used == 2
    assert r.value == pytest.approx(I4_T1, abs=1e-7)


def test_large_shift():
    assert i4_eval(P(0, 1, 1, screening_t=5.0)).value == pytest.approx(I4_T5, abs=1e-7)


@pytest.mark.parametrize("nu", [0, 1, 2, 3, 5])
def test_integer_nu_uses_nu_plus_one_terms(nu):
    p = P(nu, 1.3, 2.0, screening_t=0.7)
    r = i4_eval(p)
    assert r.terms_used == nu + 1
    assert r.value == pytest.approx(oracle_eval("I4", p).value, rel=1e-9)


def test_fractional_nu_screening_does_not_converge():
    p = P(0.5, 1, 1, screening_t=1.0)
    with pytest.raises(NonConvergence) as info:
        i4_eval(p)
    assert info.value.partial is not None
    assert evaluate("I4", p).value == pytest.approx(oracle_eval("I4", p).value, rel=1e-12)


# resonance window ---------------------------------------------------------

def test_window_examples():
    w = resonant_window(1, 2, 1, 5)
    assert w.ok
    assert w.z_high == pytest.approx(2 * 3 ** 1.5)
    assert "10.3923" in w.detail and "= 8" in w.detail
    assert not resonant_window(5, 1, 1, 1).ok
    w = resonant_window(1, 0.5, 1, 0.1)
    assert not w.ok and w.z_low == pytest.approx(2 * 0.5 ** 1.5)


@given(c=st.floats(0.01, 10), g1=st.floats(0.01, 10), g2=st.floats(0.01, 10),
       a=st.floats(0.1, 5), z=st.floats(0, 50))
def test_wider_resonance_never_shrinks_window(c, g1, g2, a, z):
    lo, hi = sorted((g1, g2))
    narrow, wide = resonant_window(c, lo, a, z), resonant_window(c, hi, a, z)
    assert wide.z_low <= narrow.z_low and wide.z_high >= narrow.z_high
    assert wide.c_bound >= narrow.c_bound
    if narrow.ok:
        assert wide.ok


# resonant series ----------------------------------------------------------

def test_outside_window_falls_back():
    r = i5_eval(P(0, 1, 30, resonance=Resonance(1, 2)))
    assert r.method is Method.QUADRATURE
    assert any("window" in w for w in r.warnings)


def test_narrow_resonance_series_diverges():
    # in the window, but the m-series is asymptotic with smallest term ~exp(-a|g|)
    p = P(0, 1, 0.9, resonance=Resonance(1, 2))
    assert resonant_window(1, 2, 1, 0.9).ok
    with pytest.raises(NonConvergence) as info:
        i5_eval(p)
    assert info.value.partial.value == pytest.approx(I5_NARROW, rel=0.1)
    r = evaluate("I5", p)
    assert r.method is Method.QUADRATURE
    assert r.value == pytest.approx(I5_NARROW, rel=1e-10)


def test_wide_resonance_series_converges():
    p = P(0.25, 1, 0.9, resonance=Resonance(1, 20))
    r = i5_eval(p)
    assert r.method is Method.SERIES
    assert r.value == pytest.approx(oracle_eval("I5", p).value, rel=1e-7)


def test_resonance_centred_at_origin():
    # with c = 0 only the k = 2m ladder survives and it diverges like (2m)!
    with pytest.raises(NonConvergence):
        resonant_series(0.0, 1.0, 1e-12, 0.5, 0.0, 1.0)
    near = oracle_eval("I5", P(0, 1, 1e-12, resonance=Resonance(1e-9, 1)))
    assert near.value == pytest.approx(LORENTZ_AT_ORIGIN, abs=1e-6)
    closed = mpmath.ci(1) * mpmath.sin(1) + (mpmath.pi / 2 - mpmath.si(1)) * mpmath.cos(1)
    assert float(closed) == pytest.approx(LORENTZ_AT_ORIGIN, rel=1e-15)


def test_general_power_one_matches_simple_resonance_exactly():
    p5 = P(0.25, 1, 0.9, resonance=Resonance(1, 20))
    p7 = P(0.25, 1, 0.9, resonance=Resonance(1, 20, 1))
    assert i7_eval(p7) == i5_eval(p5)


def test_general_power_narrow_cases_fall_back():
    p = P(0, 1, 0.9, resonance=Resonance(1, 2, 2))
    with pytest.raises(NonConvergence):
        i7_eval(p)
    assert evaluate("I7", p).value == pytest.approx(I7_POW2, rel=1e-10)
    p6 = P(0, 1, 0.9, resonance=Resonance(1, 2), depletion=Depletion(0.01, 1))
    with pytest.raises(NonConvergence):
        i7_eval(p6)
    assert evaluate("I6", p6).value == pytest.approx(I6_NARROW, rel=1e-10)
    assert evaluate("I7", p6).value == evaluate("I6", p6).value


@pytest.mark.parametrize("pw,b", [(1.0, 0.01), (1.5, None), (2.0, 0.02), (3.0, None)])
def test_general_power_wide_cases(pw, b):
    dep = Depletion(b, 1) if b else None
    p = P(0.25, 1, 2, resonance=Resonance(1.5, 30, pw), depletion=dep)
    r = i7_eval(p)
    assert r.method is Method.SERIES
    assert r.value == pytest.approx(oracle_eval("I7", p).value, rel=1e-6)


@settings(max_examples=12, deadline=None)
@given(c=st.floats(0.2, 5), g=st.floats(20, 40), z=st.floats(0.1, 4))
def test_converged_resonant_series_matches_quadrature(c, g, z):
    p = P(0.25, 1, z, resonance=Resonance(c, g))
    assume(resonant_window(c, g, 1, z).ok)
    try:
        r = i5_eval(p)
    except NonConvergence:
        return
    assert r.value == pytest.approx(oracle_eval("I5", p).value, rel=1e-5)
