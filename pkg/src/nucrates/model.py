"""Parameter and result records for the reaction probability integrals.

All seven integrals share the kernel ``y**nu * exp(-a*y - z*y**(-rho))`` on
``(0, inf)``; the kinds differ by the optional modifiers:

======  ==========================================================
I1      plain kernel
I2      upper limit ``cutoff_d``
I3      extra factor ``exp(-b*y**delta)`` (depleted tail)
I4      barrier argument shifted, ``exp(-z*(y+t)**(-rho))``
I5      divided by ``(c-y)**2 + g**2``
I6      I5 with a depleted tail
I7      divided by ``((c-y)**2 + g**2)**pow``, depletion optional
======  ==========================================================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError, MissingField

__all__ = [
    "Depletion",
    "EvalResult",
    "IntegralKind",
    "IntegralParams",
    "Method",
    "Resonance",
    "validate",
]


class IntegralKind(str, enum.Enum):
    I1 = "I1"
    I2 = "I2"
    I3 = "I3"
    I4 = "I4"
    I5 = "I5"
    I6 = "I6"
    I7 = "I7"

    @classmethod
    def parse(cls, value) -> "IntegralKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown integral kind {value!r}") from None


class Method(str, enum.Enum):
    QUADRATURE = "quadrature"
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class Depletion:
    """Tail depletion factor ``exp(-b * y**delta)``."""

    b: float
    delta: float


@dataclass(frozen=True)
class Resonance:
    """Breit-Wigner denominator ``((c - y)**2 + g**2)**pow``."""

    c: float
    g: float
    pow: float = 1.0


@dataclass(frozen=True)
class IntegralParams:
    nu: float
    a: float
    z: float
    rho: float
    cutoff_d: Optional[float] = None
    depletion: Optional[Depletion] = None
    screening_t: Optional[float] = None
    resonance: Optional[Resonance] = None

    def replace(self, **changes) -> "IntegralParams":
        from dataclasses import replace

        return replace(self, **changes)

    def as_dict(self) -> dict:
        out = {"nu": self.nu, "a": self.a, "z": self.z, "rho": self.rho}
        if self.cutoff_d is not None:
            out["d"] = self.cutoff_d
        if self.depletion is not None:
            out["b"] = self.depletion.b
            out["delta"] = self.depletion.delta
        if self.screening_t is not None:
            out["t"] = self.screening_t
        if self.resonance is not None:
            out["c"] = self.resonance.c
            out["g"] = self.resonance.g
            out["pow"] = self.resonance.pow
        return out


@dataclass(frozen=True)
class EvalResult:
    """Value of an integral (or series) with its error budget.

    ``value`` is nonnegative for every integral result; a bare
    hypergeometric sum may be negative.
    """

    value: float
    abs_error: float
    method: Method
    terms_used: int = 0
    converged: bool = True
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.converged and not self.warnings:
            object.__setattr__(self, "warnings", ("not converged",))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        object.__setattr__(self, "method", Method(self.method))
        if not self.abs_error >= 0.0:
            object.__setattr__(self, "abs_error", abs(self.abs_error))

    @property
    def rel_error(self) -> float:
        return self.abs_error / abs(self.value) if self.value else math.inf

    def with_warning(self, message: str) -> "EvalResult":
        from dataclasses import replace

        return replace(self, warnings=self.warnings + (message,))

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error": self.abs_error,
            "method": self.method.value,
            "terms_used": self.terms_used,
            "converged": self.converged,
            "warnings": list(self.warnings),
        }


_REQUIRED = {
    IntegralKind.I1: (),
    IntegralKind.I2: ("cutoff_d",),
    IntegralKind.I3: ("depletion",),
    IntegralKind.I4: ("screening_t",),
    IntegralKind.I5: ("resonance",),
    IntegralKind.I6: ("resonance", "depletion"),
    IntegralKind.I7: ("resonance",),
}


def _finite(name: str, value) -> None:
    if value is None or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite real, got {value!r}")


def validate(kind, params: IntegralParams) -> IntegralParams:
    """Check ``params`` against the requirements of ``kind``.

    Returns ``params`` unchanged on success. Fields a kind does not use are
    tolerated and ignored by the evaluators.
    """
    kind = IntegralKind.parse(kind)
    for name in ("nu", "a", "z", "rho"):
        _finite(name, getattr(params, name))
    if params.a <= 0:
        raise DomainError(f"a must be > 0, got {params.a}")
    if params.z < 0:
        raise DomainError(f"z must be >= 0, got {params.z}")
    if params.rho <= 0:
        raise DomainError(f"rho must be > 0, got {params.rho}")

    for name in _REQUIRED[kind]:
        if getattr(params, name) is None:
            raise MissingField(f"{kind.value} requires {name}")

    if params.cutoff_d is not None and params.screening_t is not None:
        raise DomainError("cutoff_d and screening_t are mutually exclusive")
    if params.cutoff_d is not None:
        _finite("d", params.cutoff_d)
        if params.cutoff_d <= 0:
            raise DomainError(f"d must be > 0, got {params.cutoff_d}")
    if params.depletion is not None:
        _finite("b", params.depletion.b)
        _finite("delta", params.depletion.delta)
        if params.depletion.b <= 0:
            raise DomainError(f"b must be > 0, got {params.depletion.b}")
        if params.depletion.delta <= 0:
            raise DomainError(f"delta must be > 0, got {params.depletion.delta}")
    if params.screening_t is not None:
        _finite("t", params.screening_t)
        if params.screening_t <= 0:
            raise DomainError(f"t must be > 0, got {params.screening_t}")
    res = params.resonance
    if res is not None:
        for name in ("c", "g", "pow"):
            _finite(name, getattr(res, name))
        if res.c <= 0:
            raise DomainError(f"c must be > 0, got {res.c}")
        if res.g == 0:
            raise DomainError("g must be nonzero")
        if res.pow <= 0:
            raise DomainError(f"pow must be > 0, got {res.pow}")
        if kind in (IntegralKind.I5, IntegralKind.I6) and res.pow != 1:
            raise DomainError(f"{kind.value} requires pow=1, got {res.pow}")
    # the barrier no longer suppresses y -> 0 when z = 0 or when it is shifted
    if params.nu <= -1 and (params.z == 0 or kind is IntegralKind.I4):
        raise DomainError("integral diverges at y=0 for nu <= -1 without a barrier")
    return params
