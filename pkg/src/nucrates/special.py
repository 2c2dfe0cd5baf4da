"""Scalar special functions used by the residue series.

Everything here works on Python floats. The series engine re-implements the
hypergeometric recurrences in multiprecision arithmetic; the float versions
below are the reference surface and are used wherever cancellation is mild.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateParam, DivergenceError, PoleError
from .model import EvalResult, Method

__all__ = [
    "SeriesControl",
    "gamma_multiplication_log",
    "hyper_0f2",
    "hyper_1f0",
    "log_gamma",
    "lower_incomplete_gamma",
    "pochhammer",
]

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rule for power series: ``|term| < rel_tol*|sum|`` three times."""

    rel_tol: float = 1e-15
    max_terms: int = 500

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 16:
            raise ValueError(f"max_terms must be >= 16, got {self.max_terms}")


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _lanczos_log_gamma(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Lanczos approximation (g=7, 9 terms) for ``x >= 1/2``, reflection below.

    >>> log_gamma(1.0)
    (0.0, 1)
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x == 1.0 or x == 2.0:
        return 0.0, 1
    if x >= 0.5:
        return _lanczos_log_gamma(x), 1
    # Gamma(x) Gamma(1-x) = pi / sin(pi x); reduce the sine argument first
    n = math.floor(x)
    s = math.sin(math.pi * (x - n))
    if n % 2:
        s = -s
    value = math.log(math.pi) - math.log(abs(s)) - _lanczos_log_gamma(1.0 - x)
    return value, (1 if s > 0 else -1)


def gamma_multiplication_log(x: float, m: int) -> float:
    """``log Gamma(m*x)`` assembled from ``Gamma(x), Gamma(x+1/m), ...``.

    Uses the Gauss multiplication formula; only meaningful where every
    factor is positive, i.e. ``x > 0``.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    total = 0.5 * (1 - m) * math.log(2.0 * math.pi) + (m * x - 0.5) * math.log(m)
    for k in range(m):
        total += log_gamma(x + k / m)[0]
    return total


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``, ``(a)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1.0
    if _is_nonpositive_integer(a) and n > -a:
        return 0.0
    if n <= 64:
        out = 1.0
        for k in range(n):
            out *= a + k
        if math.isfinite(out):
            return out
    # long products: go through log-gamma to avoid intermediate overflow
    lg_hi, s_hi = log_gamma(a + n)
    lg_lo, s_lo = log_gamma(a)
    return s_hi * s_lo * math.exp(lg_hi - lg_lo)


def hyper_0f2(b1: float, b2: float, x: float, ctl: SeriesControl = SeriesControl()) -> EvalResult:
    """Sum ``0F2(; b1, b2; x) = sum_n x**n / ((b1)_n (b2)_n n!)``.

    Terms are generated by their ratio. For ``x < 0`` and positive
    parameters the tail alternates, so the first omitted term bounds the
    truncation error; that bound plus a rounding estimate is returned as
    ``abs_error``.
    """
    if _is_nonpositive_integer(b1) or _is_nonpositive_integer(b2):
        raise DegenerateParam(f"0F2 parameters must not be nonpositive integers: {b1}, {b2}")
    term = 1.0
    total = 1.0
    biggest = 1.0
    small = 0
    n = 0
    while n < ctl.max_terms:
        term *= x / ((b1 + n) * (b2 + n) * (n + 1))
        n += 1
        total += term
        biggest = max(biggest, abs(term))
        if abs(term) < ctl.rel_tol * abs(total):
            small += 1
            if small == 3:
                break
        else:
            small = 0
    converged = small == 3 or term == 0.0
    err = abs(term) + 4.0 * n * 2.2e-16 * biggest
    warnings = () if converged else (f"0F2 not converged after {n} terms",)
    return EvalResult(total, err, Method.SERIES, n + 1, converged, warnings)


def hyper_1f0(d: float, x: float) -> float:
    """``1F0(d;; x) = (1 - x)**(-d)`` inside the unit disc."""
    if not abs(x) < 1.0:
        raise DivergenceError(f"1F0 diverges for |x| >= 1 (x={x})")
    return (1.0 - x) ** (-d)


def lower_incomplete_gamma(s: float, x: float) -> float:
    """``gamma(s, x) = int_0^x t**(s-1) e**(-t) dt`` for ``s > 0, x >= 0``."""
    if s <= 0:
        raise ValueError("s must be positive")
    if x <= 0:
        return 0.0
    # x**s e**-x sum_n x**n / (s (s+1) ... (s+n)), all terms positive
    term = 1.0 / s
    total = term
    n = 0
    while term > 1e-17 * total:
        n += 1
        term *= x / (s + n)
        total += term
        if n > 100000:
            break
    return math.exp(s * math.log(x) - x + math.log(total))
