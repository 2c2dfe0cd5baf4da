"""Reduction of the depleted, screened and resonant integrals to the kernel integral.

Each modifier is expanded in a power series so that the integral becomes a
weighted sum of complete kernel integrals ``J(nu') = int_0^inf y**nu'
e**(-a y - z y**-rho) dy`` evaluated by :func:`nucrates.series.i2_dispatch`:

* depleted tail:  ``sum_m (-b)**m/m! J(nu + delta m)``
* screened:       ``e**(a t) sum_m (-nu)_m/m! t**m int_t^inf u**(nu-m) ...``
* resonant:       ``sum_m (-1)**m (p)_m/m! g**-2(m+p) sum_k C(2m,k) (-1)**k c**(2m-k) J(nu+k)``

The depleted and resonant expansions are alternating and, once the inner
integrals grow like ``Gamma(nu + delta m)``, only asymptotic: they are
summed to their smallest term, which bounds the truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CancellationError, NonConvergence
from .model import (Depletion, EvalResult, IntegralKind, IntegralParams, Method,
                    validate)
from .quadrature import QuadratureControl, oracle_eval, quad_log
from .series import i2_dispatch
from .special import SeriesControl

__all__ = [
    "ACCEPT_TOL",
    "CANCELLATION_RATIO",
    "ConvergenceWindow",
    "MAX_RESONANT_M",
    "REDUCTION_CONTROL",
    "i3_eval",
    "i4_eval",
    "i5_eval",
    "i7_eval",
    "resonant_series",
    "resonant_window",
]

REDUCTION_CONTROL = SeriesControl(rel_tol=1e-10, max_terms=200)
# accepted relative error when an asymptotic series is cut at its smallest term
ACCEPT_TOL = 1e-7
CANCELLATION_RATIO = 1e-3
MAX_RESONANT_M = 60


@dataclass(frozen=True)
class ConvergenceWindow:
    ok: bool
    z_low: float
    z_high: float
    c_bound: float
    detail: str


def resonant_window(c: float, g: float, a: float, z: float) -> ConvergenceWindow:
    """Region where the small- and large-argument resonant ratios stay below one.

    ``1/a - |g| < c < 1/a + |g|`` and ``2a[c-|g|]**1.5 < z < 2a[c+|g|]**1.5``,
    with ``[c-|g|]`` read as zero when ``c < |g|``. The lower bound on ``c``
    is additionally clipped at zero.
    """
    g = abs(g)
    c_lo = max(1.0 / a - g, 0.0)
    c_hi = 1.0 / a + g
    z_low = 2.0 * a * max(c - g, 0.0) ** 1.5
    z_high = 2.0 * a * (c + g) ** 1.5
    c_ok = c_lo < c < c_hi
    z_ok = z_low < z < z_high
    detail = (f"c in ({c_lo:.6g}, {c_hi:.6g}): {'ok' if c_ok else 'violated'}; "
              f"z in ({z_low:.6g}, {z_high:.6g}): {'ok' if z_ok else 'violated'}")
    if a == 1.0 and g >= 2.0:
        detail += f"; combined small-argument bound z < 2(2+|g|) = {2.0 * (2.0 + g):.6g}"
    return ConvergenceWindow(c_ok and z_ok, z_low, z_high, c_hi, detail)


class _KernelCache:
    """Per-evaluation memo of complete kernel integrals keyed by exponent."""

    def __init__(self, a: float, z: float, rho: float):
        self.a, self.z, self.rho = a, z, rho
        self.store: dict[float, EvalResult] = {}

    def __call__(self, nu: float) -> EvalResult:
        hit = self.store.get(nu)
        if hit is None:
            hit = i2_dispatch(nu, self.a, self.z, self.rho)
            self.store[nu] = hit
        return hit

    @property
    def n_quadrature(self) -> int:
        return sum(r.method is Method.QUADRATURE for r in self.store.values())


def _alternating_sum(term: Callable[[int], tuple[float, float]], upper_bound: float,
                     rel_tol: float, max_terms: int, label: str,
                     accept_tol: float = ACCEPT_TOL) -> EvalResult:
    """Sum a series whose true value lies in ``(0, upper_bound]``.

    Stops after three consecutive terms below ``rel_tol*|sum|``. If the
    magnitudes instead start growing (asymptotic series) the sum is
    truncated at its smallest term and accepted if half that term is below
    ``accept_tol*|sum|``. Raises :class:`CancellationError` when a
    term exceeds ``upper_bound / CANCELLATION_RATIO``: the answer would then
    be below ``CANCELLATION_RATIO`` times the largest term.
    """
    terms: list[float] = []
    inner_err = 0.0
    total = 0.0
    small = 0
    rising = 0
    for m in range(max_terms):
        t, e = term(m)
        terms.append(t)
        inner_err += e
        total += t
        if abs(t) * CANCELLATION_RATIO > upper_bound:
            raise CancellationError(
                f"{label}: term {m} is {abs(t):.3e}, above {1 / CANCELLATION_RATIO:g}x the "
                f"bound {upper_bound:.3e} on the sum")
        if t == 0.0 and m > 0 and terms[-2] == 0.0:
            small = 3
        elif abs(t) < rel_tol * abs(total):
            small += 1
        else:
            small = 0
        if small >= 3:
            return EvalResult(math.fsum(terms), abs(t) + inner_err, Method.SERIES,
                              len(terms), True)
        rising = rising + 1 if m > 0 and abs(t) > abs(terms[-2]) else 0
        if rising >= 3:
            break

    mags = [abs(t) for t in terms]
    k = int(np.argmin(mags))
    value = math.fsum(terms[:k]) + 0.5 * terms[k]
    err = 0.5 * mags[k] + inner_err
    tag = "diverges" if rising >= 3 else f"hit {max_terms} terms"
    if err <= accept_tol * abs(value) and value > 0:
        return EvalResult(value, err, Method.SERIES, k + 1, True,
                          (f"{label}: asymptotic series truncated at smallest term m={k}",))
    partial = EvalResult(max(value, 0.0), err, Method.SERIES, k + 1, False,
                         (f"{label}: series {tag}; smallest term m={k} leaves "
                          f"relative error {err / abs(value) if value else math.inf:.2e}",))
    raise NonConvergence(partial.warnings[0], partial=partial)


def _depleted(nu: float, b: float, delta: float, kernel: _KernelCache,
              ctl: SeriesControl, accept_tol: float = ACCEPT_TOL) -> EvalResult:
    coef = [1.0]

    def term(m: int):
        if m > 0:
            coef.append(coef[-1] * (-b) / m)
        r = kernel(nu + delta * m)
        return coef[m] * r.value, abs(coef[m]) * r.abs_error

    first = kernel(nu)
    return _alternating_sum(term, first.value + first.abs_error, ctl.rel_tol,
                            ctl.max_terms, "depletion series", accept_tol)


def _tag_inner(res: EvalResult, kernel: _KernelCache) -> EvalResult:
    n = kernel.n_quadrature
    if n:
        res = res.with_warning(f"{n} inner kernel integrals by quadrature (degenerate exponent)")
    return res


def i3_eval(params: IntegralParams, ctl: SeriesControl = REDUCTION_CONTROL,
            accept_tol: float = ACCEPT_TOL) -> EvalResult:
    """Depleted-tail integral as ``sum_m (-b)**m/m! J(nu + delta m)``."""
    validate(IntegralKind.I3, params)
    kernel = _KernelCache(params.a, params.z, params.rho)
    dep = params.depletion
    return _tag_inner(_depleted(params.nu, dep.b, dep.delta, kernel, ctl, accept_tol), kernel)


def i4_eval(params: IntegralParams, ctl: SeriesControl = REDUCTION_CONTROL,
            qctl: QuadratureControl = QuadratureControl()) -> EvalResult:
    """Screened integral via the binomial expansion of ``(u - t)**nu``.

    ``e**(a t) sum_m (-nu)_m/m! t**m T_m`` with ``T_m = int_t^inf u**(nu-m)
    e**(-a u - z u**-rho) du``. The ``T_m`` are incomplete from below and
    their exponents run negative, outside the residue series, so they are
    integrated numerically. For a nonnegative integer ``nu`` the sum has
    exactly ``nu + 1`` terms; otherwise the terms decay only like
    ``m**-(nu+2)`` and the sum usually exhausts ``max_terms``.
    """
    validate(IntegralKind.I4, params)
    nu, a, z, rho, t = params.nu, params.a, params.z, params.rho, params.screening_t
    finite = nu >= 0 and nu == math.floor(nu)
    n_max = int(nu) + 1 if finite else ctl.max_terms
    scale = max(1.0 / a, t)
    parts: list[float] = []
    errs: list[float] = []
    coef = 1.0
    small = 0
    total = 0.0
    for m in range(n_max):
        if m > 0:
            coef *= (m - 1 - nu) / m
        logf = lambda u, m=m: (nu - m) * np.log(u) - a * u - z * u ** (-rho)  # noqa: E731
        J, err, lmax, _ = quad_log(logf, t, math.inf, qctl, scale=scale)
        w = coef * t ** m
        shift = math.exp(a * t + lmax)
        parts.append(w * J * shift)
        errs.append(abs(w) * err * shift)
        total += parts[-1]
        if not finite:
            small = small + 1 if abs(parts[-1]) < ctl.rel_tol * abs(total) else 0
            if small == 3:
                break
    value = math.fsum(parts)
    err = math.fsum(errs) + (abs(parts[-1]) if not finite else 0.0)
    if not finite and small < 3:
        partial = EvalResult(max(value, 0.0), err, Method.SERIES, len(parts), False,
                             (f"screening series not converged after {len(parts)} terms",))
        raise NonConvergence(partial.warnings[0], partial=partial)
    return EvalResult(value, err, Method.SERIES, len(parts), True)


def resonant_series(nu: float, a: float, z: float, rho: float, c: float, g: float,
                    pow: float = 1.0, depletion: Optional[Depletion] = None,
                    ctl: SeriesControl = REDUCTION_CONTROL,
                    accept_tol: float = ACCEPT_TOL) -> EvalResult:
    """Raw resonant expansion, no window check; accepts ``c = 0``.

    ``sum_m (-1)**m (pow)_m/m! (g**2)**-(m+pow) sum_{k<=2m} C(2m,k) (-1)**k
    c**(2m-k) D(nu+k)`` where ``D`` is the kernel integral, or its depleted
    sum when ``depletion`` is given.
    """
    kernel = _KernelCache(a, z, rho)
    inner: dict[int, EvalResult] = {}

    def moment(k: int) -> EvalResult:
        if k not in inner:
            if depletion is None:
                inner[k] = kernel(nu + k)
            else:
                inner[k] = _depleted(nu + k, depletion.b, depletion.delta, kernel, ctl,
                                     accept_tol)
        return inner[k]

    g2 = g * g
    coef = [g2 ** (-pow)]

    def term(m: int):
        if m > 0:
            coef.append(coef[-1] * -(pow + m - 1) / (m * g2))
        parts = []
        errs = []
        for k in range(2 * m + 1):
            w = math.comb(2 * m, k) * (-1.0) ** k * c ** (2 * m - k)
            if w == 0.0:
                continue
            r = moment(k)
            parts.append(w * r.value)
            errs.append(abs(w) * r.abs_error)
        s = math.fsum(parts)
        # rounding in the binomial sum scales with its largest part
        rounding = 4e-16 * max((abs(p) for p in parts), default=0.0) * (2 * m + 1)
        return coef[m] * s, abs(coef[m]) * (math.fsum(errs) + rounding)

    first = moment(0)
    bound = (first.value + first.abs_error) * g2 ** (-pow)
    res = _alternating_sum(term, bound, ctl.rel_tol, min(ctl.max_terms, MAX_RESONANT_M),
                           "resonance series", accept_tol)
    return _tag_inner(res, kernel)


def _resonant_eval(kind: IntegralKind, params: IntegralParams, ctl: SeriesControl,
                   accept_tol: float) -> EvalResult:
    validate(kind, params)
    r = params.resonance
    if params.rho != 0.5:
        return oracle_eval(kind, params).with_warning(
            f"rho={params.rho}: resonant series implemented for rho=1/2 only")
    win = resonant_window(r.c, r.g, params.a, params.z)
    if not win.ok:
        return oracle_eval(kind, params).with_warning(f"outside convergence window: {win.detail}")
    depletion = params.depletion if kind is not IntegralKind.I5 else None
    return resonant_series(params.nu, params.a, params.z, params.rho, r.c, r.g, r.pow,
                           depletion, ctl, accept_tol)


def i5_eval(params: IntegralParams, ctl: SeriesControl = REDUCTION_CONTROL,
            accept_tol: float = ACCEPT_TOL) -> EvalResult:
    """Resonant integral; series inside the convergence window, quadrature outside.

    Inside the window the series can still fail to reach ``accept_tol``
    (it is asymptotic, with smallest term roughly ``exp(-a|g|)``); that
    raises :class:`NonConvergence` carrying the truncated estimate.
    """
    return _resonant_eval(IntegralKind.I5, params, ctl, accept_tol)


def i7_eval(params: IntegralParams, ctl: SeriesControl = REDUCTION_CONTROL,
            accept_tol: float = ACCEPT_TOL) -> EvalResult:
    """Generalised resonant integral with any power and optional depleted tail."""
    return _resonant_eval(IntegralKind.I7, params, ctl, accept_tol)
