"""Leading-order large-argument forms and the method selector.

For large ``x = a z**2/4`` the kernel integrand has a sharp maximum at
``y0 = (z/(2a))**(2/3)`` and Laplace's method gives

    G^{3,0}_{0,3}(x | 0, 1/2, nu+1) ~ (2 pi/sqrt 3) e**(-3 x**(1/3)) x**((2nu+1)/6).

The other integrals multiply this by their modifier evaluated at ``y0``.
The cut-off integral is the exception: once ``y0 > d`` it is dominated by
the endpoint ``y = d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, OutOfRegime
from .model import EvalResult, IntegralKind, IntegralParams, Method, validate
from .reductions import resonant_window
from .series import DEGENERACY_THRESHOLD, check_degenerate
from .special import hyper_1f0

__all__ = [
    "DEFAULT_THRESHOLDS",
    "MethodChoice",
    "RegimeThresholds",
    "asymptotic_eval",
    "asymptotic_precondition",
    "g3003_asymptotic",
    "select_method",
]

_LOG_G_CONST = math.log(2.0 * math.pi / math.sqrt(3.0))


@dataclass(frozen=True)
class RegimeThresholds:
    asymptotic_metric: float = 400.0
    degeneracy: float = DEGENERACY_THRESHOLD


DEFAULT_THRESHOLDS = RegimeThresholds()


@dataclass(frozen=True)
class MethodChoice:
    method: Method
    reason: str
    regime_metric: float

    def __post_init__(self):
        if not self.regime_metric >= 0:
            raise ValueError("regime_metric must be nonnegative")


def g3003_asymptotic(x: float, nu: float) -> float:
    """Leading term of ``G^{3,0}_{0,3}(x | 0, 1/2, nu+1)`` for large ``x``."""
    if not x > 0:
        raise ValueError("x must be positive")
    return math.exp(_LOG_G_CONST - 3.0 * x ** (1.0 / 3.0) + (2.0 * nu + 1.0) / 6.0 * math.log(x))


def _peak(a: float, z: float) -> float:
    return (z / (2.0 * a)) ** (2.0 / 3.0)


def asymptotic_precondition(kind, params: IntegralParams) -> str | None:
    """Why the closed form does not apply, or ``None`` when it does."""
    kind = IntegralKind.parse(kind)
    if params.rho != 0.5:
        return f"rho={params.rho}: large-argument forms need rho=1/2"
    if params.z <= 0:
        return "z=0: no barrier, large-argument forms do not apply"
    if kind is not IntegralKind.I7 and params.a != 1.0:
        return f"a={params.a}: large-argument form of {kind.value} is given for a=1 only"
    y0 = _peak(params.a, params.z)
    if kind is IntegralKind.I2 and not y0 > params.cutoff_d:
        return f"peak {y0:.6g} does not exceed cut-off d={params.cutoff_d}"
    if kind is IntegralKind.I4 and not y0 > params.screening_t:
        return f"negative bracket: peak {y0:.6g} <= t={params.screening_t}"
    if kind in (IntegralKind.I6, IntegralKind.I7):
        r = params.resonance
        gamma2 = (r.c - y0) ** 2 / (r.g * r.g)
        if gamma2 >= 1.0:
            return f"|gamma|={math.sqrt(gamma2):.6g} >= 1"
    return None


def asymptotic_eval(kind, params: IntegralParams) -> EvalResult:
    """Closed-form large-argument estimate; ``abs_error`` is ``value * x**(-1/3)``."""
    kind = IntegralKind.parse(kind)
    validate(kind, params)
    why = asymptotic_precondition(kind, params)
    if why is not None:
        raise OutOfRegime(why)
    nu, a, z = params.nu, params.a, params.z
    x = a * z * z / 4.0
    y0 = _peak(a, z)
    base = a ** (-(nu + 1.0)) / math.sqrt(math.pi) * g3003_asymptotic(x, nu)

    if kind is IntegralKind.I1:
        value = base
    elif kind is IntegralKind.I2:
        d = params.cutoff_d
        w = z * z / (4.0 * d)
        value = d ** (nu + 1.0) * math.exp(-d) / math.sqrt(w) * math.exp(-2.0 * math.sqrt(w))
    elif kind is IntegralKind.I3:
        dep = params.depletion
        value = base * math.exp(-dep.b * y0 ** dep.delta)
    elif kind is IntegralKind.I4:
        t = params.screening_t
        value = (g3003_asymptotic(x, 0.0) / math.sqrt(math.pi) * math.exp(t)
                 * (y0 - t) ** nu)
    elif kind is IntegralKind.I5:
        r = params.resonance
        eta = (1.0 - y0 / r.c) ** 2
        value = base / (r.g * r.g) / (1.0 + eta * r.c * r.c / (r.g * r.g))
    else:
        r = params.resonance
        gamma2 = (r.c - y0) ** 2 / (r.g * r.g)
        try:
            lorentz = hyper_1f0(r.pow, -gamma2)
        except DivergenceError as exc:
            raise OutOfRegime(str(exc)) from exc
        value = base * abs(r.g) ** (-2.0 * r.pow) * lorentz
        if params.depletion is not None:
            value *= math.exp(-params.depletion.b * y0 ** params.depletion.delta)
    return EvalResult(value, value * x ** (-1.0 / 3.0), Method.ASYMPTOTIC, 1, True,
                      ("leading-order asymptotic estimate",))


def _series_blocker(kind: IntegralKind, params: IntegralParams, th: RegimeThresholds):
    if params.rho != 0.5:
        return f"rho={params.rho}: series needs rho=1/2"
    nu = params.nu
    if kind is IntegralKind.I4:
        if nu >= 0 and nu == math.floor(nu):
            return None
        return "screening series is finite only for integer nu >= 0"
    if nu + 1.0 <= 0:
        return f"nu={nu}: series needs nu > -1"
    if check_degenerate(nu + 1.0, th.degeneracy).degenerate:
        return "degenerate nu"
    if params.z == 0 and kind in (IntegralKind.I1, IntegralKind.I2):
        return None
    if kind in (IntegralKind.I5, IntegralKind.I6, IntegralKind.I7):
        r = params.resonance
        win = resonant_window(r.c, r.g, params.a, params.z)
        if not win.ok:
            return f"outside convergence window: {win.detail}"
    return None


def select_method(kind, params: IntegralParams,
                  thresholds: RegimeThresholds = DEFAULT_THRESHOLDS) -> MethodChoice:
    """Choose series, asymptotic or quadrature from the regime metric ``a z**2/4``."""
    kind = IntegralKind.parse(kind)
    metric = params.a * params.z * params.z / 4.0
    high = thresholds.asymptotic_metric
    if kind is IntegralKind.I2:
        # endpoint regime: measured by z**2/(4d), not by the peak argument
        large = params.z * params.z / (4.0 * params.cutoff_d) > high
    else:
        large = metric > high
    if large:
        why = asymptotic_precondition(kind, params)
        if why is None:
            return MethodChoice(Method.ASYMPTOTIC, f"metric {metric:.6g} above {high:g}", metric)
    else:
        why = f"metric {metric:.6g} not above {high:g}"
    blocker = _series_blocker(kind, params, thresholds)
    if blocker is None:
        return MethodChoice(Method.SERIES, "series applicable; " + why, metric)
    return MethodChoice(Method.QUADRATURE, blocker, metric)
