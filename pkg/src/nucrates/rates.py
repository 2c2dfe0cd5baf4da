"""Nuclear fusion rates from charges, masses, temperature and S-factor data.

Gaussian CGS units throughout. S-factor coefficients are given in keV barn
(``S(0)``), barn (``S'(0)``) and barn/keV (``S''(0)``); resonance energies
and screening energies in keV.

With ``y = E/kT`` the Maxwellian average of ``sigma(E) = S(E)/E
exp(-z (kT/E)**0.5)`` becomes

    <sigma v> = (8/(pi mu))**0.5 (kT)**-1.5 sum_nu S^(nu)(0)/nu! (kT)**(nu+1) N_nu(z)

where ``N_nu`` is the kernel integral at ``a = 1, rho = 1/2`` (or its
cut-off, depleted or screened variant).
"""

from __future__ import annotations

import math
import types
from dataclasses import dataclass, field
from typing import Optional, Union

from .asymptotics import RegimeThresholds
from .errors import DomainError
from .evaluate import evaluate
from .model import (Depletion, EvalResult, IntegralKind, IntegralParams, Resonance,
                    validate)

__all__ = [
    "CONSTANTS",
    "CONSTANTS_VERSION",
    "Bare",
    "Cutoff",
    "Depleted",
    "RateBreakdown",
    "ReactionSystem",
    "ResonanceData",
    "ResonancePrefactor",
    "Screened",
    "kT",
    "nonresonant_rate",
    "rate_breakdown",
    "reduced_mass",
    "resonance_integral_params",
    "resonant_probability",
    "sommerfeld_z",
]

CONSTANTS_VERSION = "CODATA-2018/cgs-gaussian/v1"
CONSTANTS = types.MappingProxyType({
    "k_B": 1.380649e-16,            # erg/K
    "h": 6.62607015e-27,            # erg s
    "hbar": 6.62607015e-27 / (2.0 * math.pi),
    "e": 4.803204712570263e-10,     # esu
    "amu": 1.66053906660e-24,       # g
    "keV": 1.602176634e-9,          # erg
    "barn": 1e-24,                  # cm**2
})

# rates never take the leading-order shortcut
_PRECISE = RegimeThresholds(asymptotic_metric=math.inf)


@dataclass(frozen=True)
class ReactionSystem:
    zi: int
    zj: int
    mi: float
    mj: float
    T: float
    s_coeffs: tuple = (1.0, 0.0, 0.0)
    ni: float = 1.0
    nj: float = 1.0
    same_species: bool = False

    def __post_init__(self):
        if int(self.zi) != self.zi or int(self.zj) != self.zj or self.zi < 1 or self.zj < 1:
            raise DomainError("charge numbers zi, zj must be positive integers")
        if not (self.mi > 0 and self.mj > 0):
            raise DomainError("masses mi, mj must be positive")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise DomainError("temperature T must be positive")
        if len(self.s_coeffs) != 3 or not all(math.isfinite(s) for s in self.s_coeffs):
            raise DomainError("s_coeffs must be three finite numbers")
        if not (self.ni >= 0 and self.nj >= 0):
            raise DomainError("densities ni, nj must be nonnegative")
        object.__setattr__(self, "s_coeffs", tuple(float(s) for s in self.s_coeffs))

    def swapped(self) -> "ReactionSystem":
        return ReactionSystem(self.zj, self.zi, self.mj, self.mi, self.T, self.s_coeffs,
                              self.nj, self.ni, self.same_species)


@dataclass(frozen=True)
class ResonancePrefactor:
    """Opaque multiplicative constants of the Breit-Wigner rate."""
    R0: float = 1.0
    w: float = 1.0
    Gamma_kl: float = 1.0
    D: float = 1.0

    @property
    def product(self) -> float:
        return self.R0 * self.w * self.Gamma_kl * self.D


@dataclass(frozen=True)
class ResonanceData:
    """Breit-Wigner parameters; ``E_r`` and ``Gamma0`` in keV, ``Gamma1`` dimensionless."""
    E_r: float
    Gamma0: float
    Gamma1: float = 0.0
    prefactor_consts: ResonancePrefactor = field(default_factory=ResonancePrefactor)

    def __post_init__(self):
        if not self.E_r > 0:
            raise DomainError("E_r must be positive")
        if self.g == 0:
            raise DomainError("resonance width g = (Gamma0 + E_r Gamma1)/2 must be nonzero")

    @property
    def stretch(self) -> float:
        return 1.0 + (0.5 * self.Gamma1) ** 2

    @property
    def b(self) -> float:
        return self.E_r - 0.25 * self.Gamma0 * self.Gamma1

    @property
    def g(self) -> float:
        return 0.5 * (self.Gamma0 + self.E_r * self.Gamma1)


@dataclass(frozen=True)
class Bare:
    pass


@dataclass(frozen=True)
class Cutoff:
    d: float  # upper limit in units of kT


@dataclass(frozen=True)
class Depleted:
    b: float
    delta: float


@dataclass(frozen=True)
class Screened:
    U_e: float  # keV


Mode = Union[Bare, Cutoff, Depleted, Screened]


def kT(system: ReactionSystem) -> float:
    return CONSTANTS["k_B"] * system.T


def reduced_mass(system: ReactionSystem) -> float:
    """Reduced mass in grams."""
    return system.mi * system.mj / (system.mi + system.mj) * CONSTANTS["amu"]


def sommerfeld_z(system: ReactionSystem) -> float:
    """Barrier strength ``z = 2 pi (mu/2kT)**0.5 zi zj e**2 / hbar``."""
    mu = reduced_mass(system)
    return (2.0 * math.pi * math.sqrt(mu / (2.0 * kT(system)))
            * system.zi * system.zj * CONSTANTS["e"] ** 2 / CONSTANTS["hbar"])


def _kernel(system: ReactionSystem, mode: Mode, nu: int) -> tuple[IntegralKind, IntegralParams]:
    z = sommerfeld_z(system)
    if isinstance(mode, Screened) and mode.U_e == 0:
        mode = Bare()
    if isinstance(mode, Bare):
        return IntegralKind.I1, IntegralParams(nu, 1.0, z, 0.5)
    if isinstance(mode, Cutoff):
        return IntegralKind.I2, IntegralParams(nu, 1.0, z, 0.5, cutoff_d=mode.d)
    if isinstance(mode, Depleted):
        return IntegralKind.I3, IntegralParams(nu, 1.0, z, 0.5,
                                               depletion=Depletion(mode.b, mode.delta))
    if isinstance(mode, Screened):
        t = mode.U_e * CONSTANTS["keV"] / kT(system)
        return IntegralKind.I4, IntegralParams(nu, 1.0, z, 0.5, screening_t=t)
    raise DomainError(f"unknown rate mode {mode!r}")


@dataclass(frozen=True)
class RateBreakdown:
    T: float
    z: float
    N: tuple            # N_0, N_1, N_2
    sigma_v: float      # cm**3/s
    rate: float         # with the identical-particle factor when same_species
    rate_distinct: float  # without it

    def as_dict(self) -> dict:
        return {"T": self.T, "z": self.z, "N0": self.N[0], "N1": self.N[1], "N2": self.N[2],
                "sigma_v": self.sigma_v, "rate": self.rate, "rate_distinct": self.rate_distinct}


def rate_breakdown(system: ReactionSystem, mode: Mode = Bare()) -> RateBreakdown:
    """Kernel integrals, ``<sigma v>`` and the rate at one temperature."""
    energy = kT(system)
    mu = reduced_mass(system)
    units = (CONSTANTS["keV"] * CONSTANTS["barn"], CONSTANTS["barn"],
             CONSTANTS["barn"] / CONSTANTS["keV"])
    N = []
    total = 0.0
    for nu in range(3):
        kind, params = _kernel(system, mode, nu)
        res: EvalResult = evaluate(kind, params, thresholds=_PRECISE)
        N.append(res.value)
        s = system.s_coeffs[nu] * units[nu]
        total += s / math.factorial(nu) * energy ** (nu + 1) * res.value
    sigma_v = math.sqrt(8.0 / (math.pi * mu)) * energy ** -1.5 * total
    distinct = system.ni * system.nj * sigma_v
    rate = distinct / 2.0 if system.same_species else distinct
    return RateBreakdown(system.T, sommerfeld_z(system), tuple(N), sigma_v, rate, distinct)


def nonresonant_rate(system: ReactionSystem, mode: Mode = Bare()) -> float:
    """Reaction rate per cm**3 per s."""
    return rate_breakdown(system, mode).rate


def resonance_integral_params(system: ReactionSystem, res: ResonanceData) -> IntegralParams:
    """Dimensionless resonant integral for energies measured in ``kT``.

    ``int e**(-aE - qE**-0.5)/((b-E)**2+g**2) dE = I5(nu=0, a', z', c, g')/kT``
    with ``a' = 1/stretch``, ``z' = z stretch**0.5``, ``c = b/kT``, ``g' = g/kT``.
    """
    energy = kT(system) / CONSTANTS["keV"]
    if not res.b > 0:
        raise DomainError(f"resonance centre b = E_r - Gamma0 Gamma1/4 = {res.b} must be positive")
    params = IntegralParams(0.0, 1.0 / res.stretch, sommerfeld_z(system) * math.sqrt(res.stretch),
                            0.5, resonance=Resonance(res.b / energy, res.g / energy))
    return validate(IntegralKind.I5, params)


def resonant_probability(system: ReactionSystem, res: ResonanceData,
                         method="auto") -> float:
    """Breit-Wigner ``<sigma v>``, scaled by the opaque prefactor constants."""
    energy = kT(system)
    mu = reduced_mass(system)
    params = resonance_integral_params(system, res)
    ivalue = evaluate(IntegralKind.I5, params, method).value / energy
    pre = ((2.0 * math.pi) ** 2.5 * system.zi * system.zj * CONSTANTS["e"] ** 2
           * res.prefactor_consts.product / (math.sqrt(mu) * energy ** 1.5))
    return pre / res.stretch * ivalue
