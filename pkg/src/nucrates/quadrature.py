"""Brute-force evaluation of the reaction integrals by adaptive quadrature.

This is the ground truth every analytic route is checked against, so it
depends on nothing but the raw integrand. The integrand is handled in log
space and normalised by its maximum before exponentiation; the domain is
split at every interior maximum (the Gamow peak and any resonance) and the
infinite tail is mapped onto a finite interval.

Two rules are provided: a globally adaptive Gauss-Kronrod (10/21 point)
scheme, used by :func:`oracle_eval`, and a double-exponential
(tanh-sinh / exp-sinh) scheme used as an independent cross-check.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NonConvergence
from .model import EvalResult, IntegralKind, IntegralParams, Method, validate

__all__ = [
    "QuadratureControl",
    "integrand",
    "log_integrand",
    "oracle_eval",
    "oracle_eval_de",
    "quad_log",
]

# QUADPACK qk21 abscissae and weights
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980304048, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(21)
_GAUSS[1:10:2] = _WG
_GAUSS[11:20:2] = _WG[::-1]

# the integrand is treated as zero where it is this far below its maximum
_NEGLIGIBLE_LOG = 46.0


@dataclass(frozen=True)
class QuadratureControl:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-300
    max_depth: int = 40
    max_intervals: int = 5000

    def __post_init__(self):
        if self.rel_tol < 1e-14:
            raise ValueError(f"rel_tol must be >= 1e-14, got {self.rel_tol}")
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if not 1 <= self.max_depth <= 60:
            raise ValueError(f"max_depth must lie in [1, 60], got {self.max_depth}")


def log_integrand(kind, params: IntegralParams, y) -> np.ndarray:
    """Logarithm of the integrand of ``kind`` at ``y`` (vectorised).

    Modifiers not used by ``kind`` are ignored, so an I1 evaluation of a
    parameter set that also carries a resonance is the plain kernel.
    """
    kind = IntegralKind.parse(kind)
    y = np.asarray(y, dtype=float)
    p = params
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = -p.a * y
        if p.nu != 0:
            out = out + p.nu * np.log(y)
        if p.z != 0:
            shifted = y + p.screening_t if kind is IntegralKind.I4 else y
            out = out - p.z * shifted ** (-p.rho)
        if kind in (IntegralKind.I3, IntegralKind.I6) or (
            kind is IntegralKind.I7 and p.depletion is not None
        ):
            out = out - p.depletion.b * y ** p.depletion.delta
        if kind in (IntegralKind.I5, IntegralKind.I6, IntegralKind.I7):
            r = p.resonance
            out = out - r.pow * np.log((r.c - y) ** 2 + r.g * r.g)
    return out


def integrand(kind, params: IntegralParams, y: float) -> float:
    """Pointwise integrand value; the ``y -> 0`` limit is returned at ``y = 0``."""
    kind = IntegralKind.parse(kind)
    if y < 0:
        raise ValueError("y must be nonnegative")
    if y == 0:
        barrier_vanishes = params.z > 0 and kind is not IntegralKind.I4
        if barrier_vanishes or params.nu > 0:
            return 0.0
        if params.nu < 0:
            return math.inf
        return float(np.exp(log_integrand(kind, params, 0.0)))
    return float(np.exp(log_integrand(kind, params, y)))


class _Piece:
    """One integration segment, possibly a mapped semi-infinite tail."""

    __slots__ = ("fn",)

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray]):
        self.fn = fn


def _gk21(fn, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = fn(mid + half * _NODES)
    k = half * float(np.dot(_KRONROD, vals))
    g = half * float(np.dot(_GAUSS, vals))
    return k, abs(k - g)


def _safe(logf: Callable, shift: float) -> Callable[[np.ndarray], np.ndarray]:
    def fn(y: np.ndarray) -> np.ndarray:
        v = np.exp(logf(y) - shift)
        return np.where(np.isfinite(v), v, 0.0)

    return fn


@dataclass
class _Layout:
    lmax: float
    peak: float
    breaks: list
    tail_start: Optional[float]
    tail_scale: float


def _survey(logf: Callable, lo: float, hi: float, scale: float,
            hints: Iterable[float]) -> _Layout:
    """Locate the maximum of ``logf`` and choose split points."""
    span = (hi - lo) if math.isfinite(hi) else 1e3 * scale + 200.0 * scale
    grid = np.unique(np.concatenate([
        lo + np.geomspace(1e-12 * span, span, 500),
        lo + np.linspace(0.0, span, 300)[1:],
        [h for h in hints if lo < h < lo + span],
    ]))
    vals = logf(grid)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    i = int(np.argmax(vals))
    # refine the global maximum between its grid neighbours
    left = grid[i - 1] if i > 0 else lo
    right = grid[i + 1] if i + 1 < len(grid) else grid[i]
    peak, lmax = grid[i], float(vals[i])
    if right > left:
        res = minimize_scalar(lambda t: -float(logf(np.array([t]))[0]),
                              bounds=(left, right), method="bounded",
                              options={"xatol": 1e-12 * max(1.0, abs(peak))})
        if res.success and -res.fun >= lmax:
            peak, lmax = float(res.x), float(-res.fun)
    if not math.isfinite(lmax):
        lmax = 0.0

    # width from the curvature of the log-integrand at the peak
    h = 1e-4 * max(peak - lo, 1e-8 * scale)
    width = scale
    if peak - h > lo:
        trio = logf(np.array([peak - h, peak, peak + h]))
        curv = (trio[0] - 2.0 * trio[1] + trio[2]) / (h * h)
        if np.isfinite(curv) and curv < 0:
            width = 1.0 / math.sqrt(-curv)

    breaks = {peak}
    for k in (-6.0, -2.0, 2.0, 6.0):
        breaks.add(peak + k * width)
    # secondary local maxima that matter (resonance spikes)
    inner = vals[1:-1]
    local = (inner >= vals[:-2]) & (inner >= vals[2:]) & (inner > lmax - _NEGLIGIBLE_LOG)
    breaks.update(grid[1:-1][local].tolist())
    breaks.update(hints)

    tail_start = None
    if not math.isfinite(hi):
        beyond = (grid > max(breaks)) & (vals < lmax - _NEGLIGIBLE_LOG)
        tail_start = float(grid[beyond][0]) if beyond.any() else float(grid[-1])
        breaks.add(tail_start)
        upper = tail_start
    else:
        upper = hi
    pts = sorted(b for b in breaks if lo < b < upper)
    return _Layout(lmax, peak, [lo] + pts + [upper], tail_start, max(width, 1e-300))


def quad_log(logf: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
             ctl: QuadratureControl = QuadratureControl(), *, scale: float = 1.0,
             hints: Iterable[float] = ()) -> tuple[float, float, float, int]:
    """Integrate ``exp(logf)`` over ``[lo, hi]`` (``hi`` may be ``inf``).

    Returns ``(J, err, lmax, n_intervals)`` with the integral equal to
    ``exp(lmax) * J``; keeping the scale separate avoids underflow for deep
    Gamow suppression.
    """
    hints = [float(h) for h in hints]
    lay = _survey(logf, lo, hi, scale, hints)
    fn = _safe(logf, lay.lmax)

    pieces: list[_Piece] = [_Piece(fn)]
    heap: list = []
    total = 0.0
    total_err = 0.0

    def push(piece_id: int, a: float, b: float, depth: int):
        nonlocal total, total_err
        val, err = _gk21(pieces[piece_id].fn, a, b)
        total += val
        total_err += err
        heapq.heappush(heap, (-err, a, b, depth, piece_id, val))

    br = lay.breaks
    for a, b in zip(br[:-1], br[1:]):
        if b > a:
            push(0, a, b, 0)
    if lay.tail_start is not None:
        t0, s = lay.tail_start, max(lay.tail_scale, (lay.tail_start - lay.peak) / 20.0, 1e-12)

        def tail(u: np.ndarray, t0=t0, s=s) -> np.ndarray:
            return fn(t0 + s * (1.0 - u) / u) * s / (u * u)

        pieces.append(_Piece(tail))
        push(1, 0.0, 1.0, 0)

    abs_floor = ctl.abs_tol * math.exp(-lay.lmax) if lay.lmax < 700 else 0.0
    parked: list = []
    n_eval = len(heap)
    while heap:
        if total_err <= max(abs_floor, ctl.rel_tol * abs(total)):
            break
        if n_eval >= ctl.max_intervals:
            break
        neg_err, a, b, depth, pid, val = heapq.heappop(heap)
        if depth >= ctl.max_depth:
            parked.append((neg_err, a, b, depth, pid, val))
            continue
        total -= val
        total_err += neg_err
        mid = 0.5 * (a + b)
        push(pid, a, mid, depth + 1)
        push(pid, mid, b, depth + 1)
        n_eval += 2
    # re-sum to shed drift from the running updates
    items = heap + parked
    total = math.fsum(it[5] for it in items)
    total_err = math.fsum(-it[0] for it in items)
    if total_err > max(abs_floor, ctl.rel_tol * abs(total)):
        raise NonConvergence(
            f"quadrature residual {total_err:.3e} above tolerance after {n_eval} intervals",
            partial=(total, total_err, lay.lmax, n_eval),
        )
    return total, total_err, lay.lmax, n_eval


def _scale_hint(params: IntegralParams) -> float:
    a = params.a
    guess = max(1.0 / a, (abs(params.nu) + 1.0) / a)
    if params.z > 0:
        guess = max(guess, (params.rho * params.z / a) ** (1.0 / (1.0 + params.rho)))
    if params.resonance is not None:
        guess = max(guess, abs(params.resonance.c))
    return guess


def _hints(kind: IntegralKind, params: IntegralParams) -> list[float]:
    if kind in (IntegralKind.I5, IntegralKind.I6, IntegralKind.I7):
        c, g = params.resonance.c, abs(params.resonance.g)
        return [c, c - g, c + g, c - 5 * g, c + 5 * g]
    return []


def _to_result(kind, J, err, lmax, n, warnings=()) -> EvalResult:
    scale = math.exp(lmax)
    return EvalResult(J * scale, err * scale, Method.QUADRATURE, n, True, tuple(warnings))


def oracle_eval(kind, params: IntegralParams,
                ctl: QuadratureControl = QuadratureControl()) -> EvalResult:
    """Integrate the raw integrand of ``kind`` numerically."""
    kind = IntegralKind.parse(kind)
    validate(kind, params)
    logf = lambda y: log_integrand(kind, params, y)  # noqa: E731
    hi = params.cutoff_d if kind is IntegralKind.I2 else math.inf
    try:
        J, err, lmax, n = quad_log(logf, 0.0, hi, ctl, scale=_scale_hint(params),
                                   hints=_hints(kind, params))
    except NonConvergence as exc:
        J, err, lmax, n = exc.partial
        partial = EvalResult(J * math.exp(lmax), err * math.exp(lmax), Method.QUADRATURE,
                             n, False, (str(exc),))
        raise NonConvergence(str(exc), partial=partial) from None
    return _to_result(kind, J, err, lmax, n)


# ---------------------------------------------------------------------------
# double-exponential cross-check

def _tanh_sinh(fn, a: float, b: float, rel_tol: float, max_level: int = 12):
    """Tanh-sinh rule on a finite interval, halving the step until stable."""
    width = b - a
    prev = None
    total = 0.0
    tmax = 3.5
    h = 0.5
    for level in range(max_level):
        if level == 0:
            t = np.arange(-tmax, tmax + h / 2, h)
        else:
            t = np.arange(-tmax + h, tmax, 2 * h)
        u = 0.5 * math.pi * np.sinh(t)
        with np.errstate(over="ignore"):
            e_pos = np.exp(-2.0 * np.abs(u))
        frac = e_pos / (1.0 + e_pos)
        x = np.where(t >= 0, b - width * frac, a + width * frac)
        w = width * 0.5 * math.pi * np.cosh(t) * frac / (1.0 + e_pos)
        w = 2.0 * w
        ok = (x > a) & (x < b)
        s = float(np.sum(np.where(ok, w * fn(np.where(ok, x, 0.5 * (a + b))), 0.0)))
        if level == 0:
            total = s * h
        else:
            total = 0.5 * total + s * h
        if prev is not None and abs(total - prev) <= rel_tol * abs(total):
            return total, abs(total - prev)
        prev = total
        h *= 0.5
    return total, abs(total - prev)


def _exp_sinh(fn, a: float, s: float, rel_tol: float, max_level: int = 12):
    """Exp-sinh rule for ``[a, inf)`` with ``y = a + s*exp(pi/2 sinh t)``."""
    prev = None
    total = 0.0
    h = 0.5
    tlo, thi = -4.5, 4.0
    for level in range(max_level):
        if level == 0:
            t = np.arange(tlo, thi + h / 2, h)
        else:
            t = np.arange(tlo + h, thi, 2 * h)
        u = 0.5 * math.pi * np.sinh(t)
        with np.errstate(over="ignore"):
            g = s * np.exp(u)
            w = g * 0.5 * math.pi * np.cosh(t)
            vals = fn(a + g)
        s_level = float(np.sum(np.where(np.isfinite(w * vals), w * vals, 0.0)))
        total = s_level * h if level == 0 else 0.5 * total + s_level * h
        if prev is not None and abs(total - prev) <= rel_tol * abs(total):
            return total, abs(total - prev)
        prev = total
        h *= 0.5
    return total, abs(total - prev)


def oracle_eval_de(kind, params: IntegralParams, rel_tol: float = 1e-13) -> EvalResult:
    """Same integral by double-exponential rules on the same split points."""
    kind = IntegralKind.parse(kind)
    validate(kind, params)
    logf = lambda y: log_integrand(kind, params, y)  # noqa: E731
    hi = params.cutoff_d if kind is IntegralKind.I2 else math.inf
    lay = _survey(logf, 0.0, hi, _scale_hint(params), _hints(kind, params))
    fn = _safe(logf, lay.lmax)
    parts = []
    for a, b in zip(lay.breaks[:-1], lay.breaks[1:]):
        if b > a:
            parts.append(_tanh_sinh(fn, a, b, rel_tol))
    if lay.tail_start is not None:
        parts.append(_exp_sinh(fn, lay.tail_start, max(lay.tail_scale, 1e-3), rel_tol))
    J = math.fsum(p[0] for p in parts)
    err = math.fsum(p[1] for p in parts)
    return _to_result(kind, J, err, lay.lmax, len(parts))
