"""Residue-series evaluation of the cut-off and complete kernel integrals at rho = 1/2.

For ``rho = 1/2`` the complete integral is a Meijer G-function,

    int_0^inf y**nu e**(-a y - z/sqrt(y)) dy
        = a**-(nu+1) / sqrt(pi) * G^{3,0}_{0,3}(a z**2/4 | 0, 1/2, nu+1),

and closing the Mellin-Barnes contour to the left gives one 0F2 series per
gamma factor. The three series cancel heavily once ``a z**2/4`` grows
(individual terms reach ``exp(3 x**(1/3))`` while the sum is
``exp(-3 x**(1/3))``), so they are summed in multiprecision arithmetic with
the working precision raised until the cancellation is covered.

The cut-off integral ``int_0^d v**(nu-1) e**(-a v - z/sqrt(v)) dv`` is the
sum of a single 0F2 term from the pole at ``s = -(nu+m)`` and a double series
from the poles of ``Gamma(2s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath

from .errors import DegenerateNu, DomainError, NonConvergence
from .model import EvalResult, IntegralKind, IntegralParams, Method
from .quadrature import QuadratureControl, oracle_eval
from .special import SeriesControl, log_gamma, lower_incomplete_gamma

__all__ = [
    "DEGENERACY_THRESHOLD",
    "DegeneracyReport",
    "check_degenerate",
    "i2_dispatch",
    "i2_finite_series",
    "i2_infinite_series",
]

DEGENERACY_THRESHOLD = 1e-4
_GUARD_DIGITS = 22
_MAX_PRECISION_ROUNDS = 6


@dataclass(frozen=True)
class DegeneracyReport:
    degenerate: bool
    nearest_half_integer: float
    distance: float


def check_degenerate(nu: float, threshold: float = DEGENERACY_THRESHOLD) -> DegeneracyReport:
    """Flag exponents where two pole ladders of the residue sum collide.

    Degenerate iff ``min_lambda |2 nu - lambda| < 2 threshold``, i.e. ``nu``
    lies within ``threshold`` of an integer or half-integer.
    """
    lam = round(2.0 * nu)
    nearest = lam / 2.0
    return DegeneracyReport(abs(2.0 * nu - lam) < 2.0 * threshold, nearest, abs(nu - nearest))


def _sum_0f2(ctx, b1, b2, x, tiny, max_terms):
    """Multiprecision 0F2 sum; returns (sum, terms, largest |term|, converged)."""
    term = ctx.one
    total = ctx.one
    biggest = ctx.one
    # past every sign change of (b+n) the term ratio decays monotonically
    settle = max(0.0, -float(b1), -float(b2)) + 1
    small = 0
    n = 0
    while n < max_terms:
        term = term * x / ((b1 + n) * (b2 + n) * (n + 1))
        n += 1
        total += term
        mag = abs(term)
        if mag > biggest:
            biggest = mag
        if n > settle and mag <= tiny * biggest:
            small += 1
            if small == 3:
                return total, n, biggest, True
        else:
            small = 0
        if term == 0:
            return total, n, biggest, True
    return total, n, biggest, False


def _infinite_residues(ctx, mu, x, tiny, max_terms):
    """The three 0F2 residue series of G^{3,0}_{0,3}(x | 0, 1/2, mu)."""
    half = ctx.mpf(1) / 2
    parts = [
        (ctx.gamma(half) * ctx.gamma(mu), half, 1 - mu, ctx.one),
        (ctx.gamma(-half) * ctx.gamma(mu - half), 3 * half, 3 * half - mu, ctx.sqrt(x)),
        (ctx.gamma(-mu) * ctx.gamma(half - mu), 1 + mu, half + mu, ctx.power(x, mu)),
    ]
    total = ctx.zero
    largest = ctx.zero
    terms = 0
    ok = True
    for pref, b1, b2, xpow in parts:
        if xpow == 0:
            continue
        s, n, big, conv = _sum_0f2(ctx, b1, b2, -x, tiny, max_terms)
        weight = abs(pref * xpow)
        total += pref * xpow * s
        largest = max(largest, weight * big)
        terms += n
        ok = ok and conv
    return total, largest, terms, ok


def _precision_loop(evaluate, start_dps: int, rel_tol: float):
    """Raise the working precision until cancellation leaves guard digits.

    ``evaluate(ctx, tiny)`` returns ``(value, largest_contribution, terms, ok)``.
    Returns ``(value, rel_rounding, terms, ok, dps)`` with ``value`` an mpf.
    """
    dps = start_dps
    for _ in range(_MAX_PRECISION_ROUNDS):
        ctx = mpmath.MPContext()
        ctx.dps = dps
        tiny = min(rel_tol, ctx.mpf(10) ** (-dps))
        value, largest, terms, ok = evaluate(ctx, tiny)
        if value == 0:
            loss = dps
        else:
            loss = max(0.0, float(ctx.log10(largest / abs(value)))) if largest else 0.0
        if dps - loss >= _GUARD_DIGITS:
            return value, 10.0 ** (loss - dps) * max(terms, 1), terms, ok, dps
        dps = int(loss) + _GUARD_DIGITS + 10
    return value, 10.0 ** (loss - dps) * max(terms, 1), terms, ok, dps


def i2_infinite_series(nu: float, a: float, z: float,
                       ctl: SeriesControl = SeriesControl()) -> EvalResult:
    """``int_0^inf y**nu e**(-a y - z/sqrt(y)) dy`` from its three 0F2 residue series.

    Requires ``nu + 1 > 0`` and ``nu + 1`` away from integers and
    half-integers (otherwise the residues are double poles and
    :class:`DegenerateNu` is raised).
    """
    mu = nu + 1.0
    if not a > 0 or z < 0:
        raise DomainError("need a > 0 and z >= 0")
    if mu <= 0:
        raise DomainError(f"residue series needs nu + 1 > 0, got nu={nu}")
    if check_degenerate(mu).degenerate:
        raise DegenerateNu(f"nu + 1 = {mu} is (near) an integer or half-integer")
    x = a * z * z / 4.0
    start = 30 + int(2.7 * x ** (1.0 / 3.0))

    def run(ctx, tiny):
        return _infinite_residues(ctx, ctx.mpf(mu), ctx.mpf(a) * ctx.mpf(z) ** 2 / 4,
                                  tiny, ctl.max_terms)

    value, rel_round, terms, ok, dps = _precision_loop(run, start, ctl.rel_tol)
    ctx = mpmath.MPContext()
    ctx.dps = dps
    scaled = value * ctx.power(ctx.mpf(a), -ctx.mpf(mu)) / ctx.sqrt(ctx.pi)
    out = float(scaled)
    err = abs(out) * (rel_round + 2.2e-16)
    if not ok:
        partial = EvalResult(out, err, Method.SERIES, terms, False,
                             (f"0F2 residue series hit max_terms={ctl.max_terms}",))
        raise NonConvergence("residue series did not converge", partial=partial)
    if out < 0:
        raise NonConvergence(f"residue sum lost all precision (value {out})")
    return EvalResult(out, err, Method.SERIES, terms, True)


def _finite_terms(ctx, nu, a, z, d, tiny, max_terms):
    nu = ctx.mpf(nu)
    a = ctx.mpf(a)
    z = ctx.mpf(z)
    d = ctx.mpf(d)
    # pole of 1/(nu+m+s) at s = -(nu+m), summed over m
    if z > 0:
        f, n0, big0, ok0 = _sum_0f2(ctx, nu + ctx.mpf(1) / 2, nu + 1, -a * z * z / 4,
                                    tiny, max_terms)
        pref = 2 * ctx.power(z, 2 * nu) * ctx.gamma(-2 * nu)
        closed = pref * f
        largest = abs(pref) * big0
    else:
        closed, largest, n0, ok0 = ctx.zero, ctx.zero, 0, True

    # poles of Gamma(2s) at s = -k/2: even k from Gamma(s), odd k from Gamma(s+1/2)
    w = z / ctx.sqrt(d)
    dnu = ctx.power(d, nu)
    rows, cols = 16, 16
    while True:
        am = [ctx.one]
        for m in range(1, rows):
            am.append(am[-1] * (-a * d) / m)
        wk = [ctx.one]
        for k in range(1, cols):
            wk.append(wk[-1] * (-w) / k)
        total = ctx.zero
        big = ctx.zero
        last_row = ctx.zero
        last_col = ctx.zero
        for m in range(rows):
            for k in range(cols):
                if wk[k] == 0:
                    break
                t = am[m] * wk[k] / (nu + m - ctx.mpf(k) / 2)
                total += t
                mag = abs(t)
                if mag > big:
                    big = mag
                if m == rows - 1:
                    last_row += mag
                if k == cols - 1:
                    last_col += mag
        grow_rows = last_row > tiny * big and rows < max_terms
        grow_cols = last_col > tiny * big and cols < max_terms
        if not (grow_rows or grow_cols):
            break
        rows = rows * 2 if grow_rows else rows
        cols = cols * 2 if grow_cols else cols
    border = last_row + last_col
    ok = ok0 and border <= tiny * big
    value = closed + dnu * total
    largest = max(largest, abs(dnu) * big)
    return value, largest, n0 + rows * cols, ok


def i2_finite_series(nu: float, a: float, z: float, d: float,
                     ctl: SeriesControl = SeriesControl()) -> EvalResult:
    """``int_0^d v**(nu-1) e**(-a v - z/sqrt(v)) dv`` as 0F2 term plus double series.

    Note the ``v**(nu-1)`` convention: ``nu`` here is one more than the
    kernel exponent. Needs ``nu > 0`` away from integers and half-integers.
    The double series is truncated on a rectangle whose sides double
    independently until its last row and last column are negligible.
    """
    if not (a > 0 and d > 0) or z < 0:
        raise DomainError("need a > 0, d > 0, z >= 0")
    if nu <= 0:
        raise DomainError(f"cut-off series needs nu > 0, got {nu}")
    if check_degenerate(nu).degenerate:
        raise DegenerateNu(f"nu = {nu} is (near) an integer or half-integer")
    w = z / math.sqrt(d)
    start = 30 + int((a * d + w) / 2.3)

    def run(ctx, tiny):
        return _finite_terms(ctx, nu, a, z, d, tiny, ctl.max_terms)

    value, rel_round, terms, ok, _ = _precision_loop(run, start, ctl.rel_tol)
    out = float(value)
    err = abs(out) * (rel_round + 2.2e-16)
    if not ok:
        partial = EvalResult(out, err, Method.SERIES, terms, False,
                             ("double series truncation did not settle",))
        raise NonConvergence("cut-off series did not converge", partial=partial)
    if out < 0:
        raise NonConvergence(f"cut-off series lost all precision (value {out})")
    return EvalResult(out, err, Method.SERIES, terms, True)


def _analytic_z0(nu: float, a: float, d: Optional[float]) -> float:
    mu = nu + 1.0
    if d is None:
        return math.exp(log_gamma(mu)[0] - mu * math.log(a))
    return lower_incomplete_gamma(mu, a * d) * a ** (-mu)


def i2_dispatch(nu: float, a: float, z: float, rho: float, d: Optional[float] = None,
                ctl: SeriesControl = SeriesControl(),
                qctl: QuadratureControl = QuadratureControl()) -> EvalResult:
    """``int_0^d y**nu e**(-a y - z y**-rho) dy`` by series where possible.

    Routes to the residue series when ``rho == 1/2`` and the exponent is not
    degenerate, to the quadrature oracle otherwise. ``d=None`` means an
    infinite upper limit.
    """
    kind = IntegralKind.I1 if d is None else IntegralKind.I2
    params = IntegralParams(nu, a, z, rho, cutoff_d=d)
    reason = None
    if rho != 0.5:
        reason = f"rho={rho}: series implemented for rho=1/2 only"
    elif nu + 1.0 <= 0:
        reason = f"nu={nu}: series needs nu > -1"
    elif check_degenerate(nu + 1.0).degenerate:
        reason = "degenerate nu"
    if reason is not None:
        return oracle_eval(kind, params, qctl).with_warning(reason)

    if d is None:
        res = i2_infinite_series(nu, a, z, ctl)
    else:
        res = i2_finite_series(nu + 1.0, a, z, d, ctl)
    if z == 0:
        exact = _analytic_z0(nu, a, d)
        if abs(res.value - exact) > 1e-10 * exact:
            res = res.with_warning(f"z=0 series disagrees with closed form {exact!r}")
    return res
