"""Single entry point routing an integral to quadrature, series or asymptotics."""

from __future__ import annotations

from .asymptotics import (DEFAULT_THRESHOLDS, RegimeThresholds, _series_blocker,
                          asymptotic_eval, select_method)
from .errors import CancellationError, DegenerateNu, NonConvergence, OutOfRegime
from .model import EvalResult, IntegralKind, IntegralParams, Method, validate
from .quadrature import QuadratureControl, oracle_eval
from .reductions import i3_eval, i4_eval, resonant_series
from .series import i2_finite_series, i2_infinite_series

__all__ = ["evaluate", "series_eval"]


def series_eval(kind, params: IntegralParams,
                thresholds: RegimeThresholds = DEFAULT_THRESHOLDS) -> EvalResult:
    """Series route only; raises instead of falling back.

    :class:`OutOfRegime` when no series applies to these parameters, and
    whatever the series itself raises (:class:`NonConvergence`,
    :class:`CancellationError`, :class:`DegenerateNu`).
    """
    kind = IntegralKind.parse(kind)
    validate(kind, params)
    blocker = _series_blocker(kind, params, thresholds)
    if blocker is not None:
        if blocker == "degenerate nu":
            raise DegenerateNu(f"degenerate nu: {params.nu} is within "
                               f"{thresholds.degeneracy:g} of a half-integer")
        raise OutOfRegime(blocker)
    nu, a, z = params.nu, params.a, params.z
    if kind is IntegralKind.I1:
        return i2_infinite_series(nu, a, z)
    if kind is IntegralKind.I2:
        return i2_finite_series(nu + 1.0, a, z, params.cutoff_d)
    if kind is IntegralKind.I3:
        return i3_eval(params)
    if kind is IntegralKind.I4:
        return i4_eval(params)
    r = params.resonance
    depletion = None if kind is IntegralKind.I5 else params.depletion
    return resonant_series(nu, a, z, params.rho, r.c, r.g, r.pow, depletion)


def evaluate(kind, params: IntegralParams, method="auto",
             thresholds: RegimeThresholds = DEFAULT_THRESHOLDS,
             qctl: QuadratureControl = QuadratureControl()) -> EvalResult:
    """Evaluate one integral.

    ``method="auto"`` asks :func:`select_method` and falls back to quadrature
    (with a warning) when the chosen series fails to converge. An explicit
    method is honoured or raises.
    """
    kind = IntegralKind.parse(kind)
    validate(kind, params)
    if method == "auto":
        choice = select_method(kind, params, thresholds)
        chosen = choice.method
    else:
        chosen = Method(method)
    if chosen is Method.QUADRATURE:
        res = oracle_eval(kind, params, qctl)
        return res.with_warning(choice.reason) if method == "auto" else res
    if chosen is Method.ASYMPTOTIC:
        return asymptotic_eval(kind, params)
    if method != "auto":
        return series_eval(kind, params, thresholds)
    try:
        return series_eval(kind, params, thresholds)
    except (NonConvergence, CancellationError, DegenerateNu) as exc:
        note = f"series failed ({type(exc).__name__}: {exc}); fell back to quadrature"
        return oracle_eval(kind, params, qctl).with_warning(note)
