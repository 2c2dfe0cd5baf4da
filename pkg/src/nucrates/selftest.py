"""End-to-end acceptance checks, shared by the ``selftest`` command and the test suite.

Every check returns a :class:`CheckResult`; none of them raise on a failed
comparison, so a whole matrix can be printed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special as sp

from .asymptotics import asymptotic_eval
from .errors import NucratesError
from .model import Depletion, IntegralKind, IntegralParams, Method, Resonance
from .quadrature import QuadratureControl, oracle_eval
from .rates import (CONSTANTS, Bare, Cutoff, ReactionSystem, Screened, kT,
                    rate_breakdown, reduced_mass, sommerfeld_z)
from .reductions import i3_eval, i4_eval, i5_eval, i7_eval
from .series import i2_finite_series, i2_infinite_series
from .special import gamma_multiplication_log, hyper_1f0, log_gamma, pochhammer

__all__ = [
    "CRITERIA",
    "CheckResult",
    "OUT_OF_WINDOW",
    "REDUCTION_GRID",
    "direct_sigma_v",
    "run_all",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = math.inf

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.seconds:.2f}s, budget {self.budget:g}s): {self.detail}"


def _timed(name: str, budget: float, body) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = body()
    except NucratesError as exc:
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if passed and elapsed > budget:
        passed, detail = False, f"{detail}; over time budget"
    return CheckResult(name, passed, detail, elapsed, budget)


def _rel(x: float, ref: float) -> float:
    return abs(x - ref) / abs(ref)


def _worst(items) -> tuple[float, str]:
    return max(items, key=lambda item: math.inf if math.isnan(item[0]) else item[0])


# 1 ------------------------------------------------------------------------

def check_analytic_anchors() -> CheckResult:
    def body():
        errs = []
        for nu in (0.0, 0.25, 1.0, 2.2):
            for a in (0.5, 1.0, 2.0):
                exact = math.gamma(nu + 1) / a ** (nu + 1)
                got = oracle_eval("I1", IntegralParams(nu, a, 0.0, 0.5)).value
                errs.append((_rel(got, exact), f"I1 nu={nu} a={a}"))
                for d in (0.5, 1.0, 5.0):
                    exact = sp.gammainc(nu + 1, a * d) * math.gamma(nu + 1) / a ** (nu + 1)
                    got = oracle_eval("I2", IntegralParams(nu, a, 0.0, 0.5, cutoff_d=d)).value
                    errs.append((_rel(got, exact), f"I2 nu={nu} a={a} d={d}"))
        worst, where = _worst(errs)
        return worst < 1e-10, f"{len(errs)} points, worst rel err {worst:.2e} at {where}"
    return _timed("1 analytic anchors", 1.0, body)


# 2 ------------------------------------------------------------------------

SERIES_GRID = [(nu, a, z) for nu in (0.1, 0.25, 0.75, 1.3, 2.2)
               for a in (0.5, 1.0, 2.0) for z in (0.5, 1.0, 2.0, 5.0, 10.0)]


def check_infinite_series() -> CheckResult:
    def body():
        errs = []
        for nu, a, z in SERIES_GRID:
            s = i2_infinite_series(nu, a, z).value
            o = oracle_eval("I1", IntegralParams(nu, a, z, 0.5)).value
            errs.append((_rel(s, o), f"nu={nu} a={a} z={z}"))
        worst, where = _worst(errs)
        return worst < 1e-7, f"{len(errs)} points, worst rel err {worst:.2e} at {where}"
    return _timed("2 infinite-limit series vs quadrature", 10.0, body)


# 3 ------------------------------------------------------------------------

def check_finite_series() -> CheckResult:
    def body():
        errs = []
        for nu in (0.3, 1.3, 2.2):
            for z in (0.5, 1.0, 2.0):
                for d in (0.5, 1.0, 5.0):
                    s = i2_finite_series(nu, 1.0, z, d).value
                    # the finite series integrates v**(nu-1)
                    o = oracle_eval("I2", IntegralParams(nu - 1.0, 1.0, z, 0.5, cutoff_d=d)).value
                    errs.append((_rel(s, o), f"nu={nu} z={z} d={d}"))
        worst, where = _worst(errs)
        return worst < 1e-6, f"{len(errs)} points, worst rel err {worst:.2e} at {where}"
    return _timed("3 finite-limit series vs quadrature", 10.0, body)


# 4 ------------------------------------------------------------------------

def _p(nu, a, z, **kw) -> IntegralParams:
    return IntegralParams(nu, a, z, 0.5, **kw)


REDUCTION_GRID = [
    ("I3", _p(0.25, 1, 1, depletion=Depletion(1e-12, 2))),
    ("I3", _p(0.25, 1, 1, depletion=Depletion(0.001, 2))),
    ("I3", _p(0.25, 1, 1, depletion=Depletion(0.01, 2))),
    ("I3", _p(0.25, 1, 1, depletion=Depletion(0.1, 1))),
    ("I3", _p(0.25, 1, 2, depletion=Depletion(0.01, 1))),
    ("I4", _p(0, 1, 1, screening_t=1e-8)),
    ("I4", _p(1, 1, 1, screening_t=1.0)),
    ("I4", _p(0, 1, 1, screening_t=5.0)),
    ("I4", _p(2, 1, 3, screening_t=2.0)),
    ("I4", _p(1, 2, 0.5, screening_t=0.3)),
    ("I5", _p(0, 1, 0.9, resonance=Resonance(1, 2))),
    ("I5", _p(0, 1, 0.9, resonance=Resonance(1, 20))),
    ("I5", _p(0.25, 1, 0.9, resonance=Resonance(1, 20))),
    ("I5", _p(0.25, 1, 5, resonance=Resonance(3, 25))),
    ("I5", _p(0.25, 1, 2, resonance=Resonance(1, 20))),
    ("I7", _p(0, 1, 0.9, resonance=Resonance(1, 2, 2))),
    ("I7", _p(0, 1, 0.9, resonance=Resonance(1, 2, 1), depletion=Depletion(0.01, 1))),
    ("I7", _p(0.25, 1, 2, resonance=Resonance(1, 20, 1), depletion=Depletion(0.01, 1))),
    ("I7", _p(0.25, 2, 2, resonance=Resonance(1, 12, 1.5), depletion=Depletion(0.01, 1))),
    ("I7", _p(0.25, 1, 0.9, resonance=Resonance(1, 20, 1))),
]

OUT_OF_WINDOW = [
    ("I5", _p(0, 1, 30, resonance=Resonance(1, 2))),
    ("I5", _p(0.25, 1, 1, resonance=Resonance(5, 1))),
    ("I5", _p(0, 1, 0.1, resonance=Resonance(1, 0.5))),
    ("I7", _p(0, 1, 30, resonance=Resonance(1, 2, 2))),
    ("I7", _p(0.25, 1, 1, resonance=Resonance(5, 1, 1), depletion=Depletion(0.01, 1))),
]

_REDUCERS = {"I3": i3_eval, "I4": i4_eval, "I5": i5_eval, "I7": i7_eval}
FINE_ORACLE = QuadratureControl(rel_tol=1e-14, max_depth=60)


def _describe(kind: str, p: IntegralParams) -> str:
    extra = {k: v for k, v in p.as_dict().items() if v is not None and k not in ("rho",)}
    return kind + " " + " ".join(f"{k}={v:g}" for k, v in extra.items())


def reduction_rows():
    """(label, relative error or None, failure note) per grid point."""
    rows = []
    for kind, p in REDUCTION_GRID:
        label = _describe(kind, p)
        ref = oracle_eval(kind, p).value
        try:
            res = _REDUCERS[kind](p)
        except NucratesError as exc:
            partial = getattr(exc, "partial", None)
            err = _rel(partial.value, ref) if partial is not None else None
            rows.append((label, err, f"{type(exc).__name__}"))
            continue
        if res.method is not Method.SERIES:
            rows.append((label, _rel(res.value, ref), f"method={res.method.value}"))
            continue
        rows.append((label, _rel(res.value, ref), ""))
    return rows


def check_reductions() -> CheckResult:
    def body():
        bad = []
        worst = 0.0
        for label, err, note in reduction_rows():
            if note or err is None or not err < 1e-5:
                shown = "n/a" if err is None else f"{err:.2e}"
                bad.append(f"[{label}: rel err {shown} {note}]".replace(" ]", "]"))
            else:
                worst = max(worst, err)
        fallback = []
        for kind, p in OUT_OF_WINDOW:
            res = _REDUCERS[kind](p)
            ref = oracle_eval(kind, p, FINE_ORACLE).value
            err = _rel(res.value, ref)
            if res.method is not Method.QUADRATURE or not err < 1e-8:
                fallback.append(f"[{_describe(kind, p)}: {res.method.value} rel err {err:.2e}]")
        n_ok = len(REDUCTION_GRID) - len(bad)
        detail = (f"{n_ok}/{len(REDUCTION_GRID)} in-window points within 1e-5 "
                  f"(worst passing {worst:.2e}); "
                  f"{len(OUT_OF_WINDOW) - len(fallback)}/{len(OUT_OF_WINDOW)} fallbacks ok")
        if bad:
            detail += "; failing: " + " ".join(bad)
        if fallback:
            detail += "; fallback failures: " + " ".join(fallback)
        return not bad and not fallback, detail
    return _timed("4 reduction formulae", 30.0, body)


# 5 ------------------------------------------------------------------------

ASYMPTOTIC_CASES = [
    ("I1", {}),
    ("I2", {"cutoff_d": 1.0}),
    ("I3", {"depletion": Depletion(0.001, 1)}),
    ("I4", {"screening_t": 1.0}),
    ("I5", {"resonance": Resonance(1, 100)}),
]
ASYMPTOTIC_Z = (20.0, 50.0, 100.0, 200.0)


def asymptotic_errors(kind: str, extra: dict) -> list[float]:
    out = []
    for z in ASYMPTOTIC_Z:
        p = IntegralParams(0.0, 1.0, z, 0.5, **extra)
        out.append(_rel(asymptotic_eval(kind, p).value, oracle_eval(kind, p).value))
    return out


def check_asymptotics() -> CheckResult:
    def body():
        notes = []
        ok = True
        for kind, extra in ASYMPTOTIC_CASES:
            errs = asymptotic_errors(kind, extra)
            mono = all(b < a for a, b in zip(errs, errs[1:]))
            good = mono and errs[-1] < 0.05
            ok &= good
            notes.append(f"{kind} " + "/".join(f"{e:.2e}" for e in errs) + ("" if good else " FAIL"))
        ident = 0.0
        for z, c, g in ((8.0, 1.0, 2.0), (30.0, 5.0, 4.0), (60.0, 10.0, 20.0), (45.0, 2.0, 50.0)):
            p5 = IntegralParams(0.0, 1.0, z, 0.5, resonance=Resonance(c, g))
            p7 = IntegralParams(0.0, 1.0, z, 0.5, resonance=Resonance(c, g, 1.0))
            ident = max(ident, _rel(asymptotic_eval("I7", p7).value, asymptotic_eval("I5", p5).value))
            y0 = (z / 2.0) ** (2.0 / 3.0)
            eta = (1.0 - y0 / c) ** 2
            gamma2 = c * c / (g * g) * eta
            ident = max(ident, _rel(hyper_1f0(1.0, -gamma2), 1.0 / (1.0 + eta * c * c / (g * g))))
        ok &= ident < 1e-12
        notes.append(f"I7/I5 identity max rel dev {ident:.1e}")
        return ok, "; ".join(notes)
    return _timed("5 large-argument forms", 10.0, body)


# 6 ------------------------------------------------------------------------

def check_gamma_identities(seed: int = 20260415) -> CheckResult:
    def body():
        rng = np.random.default_rng(seed)
        worst_dup = 0.0
        worst_mult = 0.0
        worst_poch = 0.0
        for x in rng.uniform(0.1, 20.0, 50):
            rhs = (-0.5 * math.log(2 * math.pi) + (2 * x - 0.5) * math.log(2)
                   + log_gamma(x)[0] + log_gamma(x + 0.5)[0])
            worst_dup = max(worst_dup, abs(log_gamma(2 * x)[0] - rhs))
            worst_mult = max(worst_mult, abs(log_gamma(3 * x)[0] - gamma_multiplication_log(x, 3)))
        for a, m, n in zip(rng.uniform(-5.0, 10.0, 50), rng.integers(0, 21, 50),
                           rng.integers(0, 21, 50)):
            lhs = pochhammer(a, int(m + n))
            rhs = pochhammer(a, int(m)) * pochhammer(a + m, int(n))
            scale = max(abs(lhs), abs(rhs), 1e-300)
            worst_poch = max(worst_poch, abs(lhs - rhs) / scale)
        ok = worst_dup < 1e-10 and worst_mult < 1e-10 and worst_poch < 1e-10
        return ok, (f"duplication {worst_dup:.1e}, triplication {worst_mult:.1e}, "
                    f"Pochhammer split {worst_poch:.1e} over 50 points each")
    return _timed("6 gamma and Pochhammer identities", 1.0, body)


# 7 ------------------------------------------------------------------------

TOY_TEMPERATURES = (1e6, 5e6, 1.5e7, 5e7, 1e8)


def direct_sigma_v(system: ReactionSystem) -> float:
    """Maxwellian average integrated in energy, without the ``y = E/kT`` reduction."""
    kt = kT(system)
    mu = reduced_mass(system)
    gamow = sommerfeld_z(system) * math.sqrt(kt)
    keV, barn = CONSTANTS["keV"], CONSTANTS["barn"]
    s0, s1, s2 = system.s_coeffs
    s0, s1, s2 = s0 * keV * barn, s1 * barn, s2 * barn / keV

    def f(E):
        return (s0 + s1 * E + 0.5 * s2 * E * E) * math.exp(-E / kt - gamow / math.sqrt(E))

    peak = (0.5 * gamow * kt) ** (2.0 / 3.0)
    edges = [0.0, peak / 4, peak / 2, peak, 2 * peak, 4 * peak, 10 * peak, 40 * peak + 200 * kt]
    total = math.fsum(integrate.quad(f, lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
                      for lo, hi in zip(edges, edges[1:]))
    total += integrate.quad(f, edges[-1], math.inf, epsabs=0, epsrel=1e-13)[0]
    return math.sqrt(8.0 / (math.pi * mu)) * kt ** -1.5 * total


def check_physical_pinning() -> CheckResult:
    def body():
        worst = 0.0
        worst_limit = 0.0
        for T in TOY_TEMPERATURES:
            for s in ((1.0, 0.0, 0.0), (1.0, 0.3, 0.02)):
                system = ReactionSystem(1, 1, 1.0, 1.0, T, s)
                bare = rate_breakdown(system, Bare())
                worst = max(worst, _rel(bare.sigma_v, direct_sigma_v(system)))
            screened = rate_breakdown(system, Screened(1e-12)).sigma_v
            cut = rate_breakdown(system, Cutoff(50.0)).sigma_v
            worst_limit = max(worst_limit, _rel(screened, bare.sigma_v), _rel(cut, bare.sigma_v))
        ok = worst < 1e-8 and worst_limit < 1e-6
        return ok, (f"reduced vs energy-space rel err {worst:.1e} over {len(TOY_TEMPERATURES)} "
                    f"temperatures; screened/cut-off limits {worst_limit:.1e}")
    return _timed("7 physical pinning", 10.0, body)


CRITERIA = (check_analytic_anchors, check_infinite_series, check_finite_series,
            check_reductions, check_asymptotics, check_gamma_identities,
            check_physical_pinning)


def run_all() -> list[CheckResult]:
    return [check() for check in CRITERIA]
