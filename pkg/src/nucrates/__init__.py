"""Gamow-peak integrals by quadrature, residue series and asymptotics, and the fusion rates built on them."""

from .asymptotics import (MethodChoice, RegimeThresholds, asymptotic_eval, g3003_asymptotic,
                          select_method)
from .errors import (CancellationError, DegenerateNu, DegenerateParam, DivergenceError,
                     DomainError, MissingField, NonConvergence, NucratesError, OutOfRegime,
                     PoleError)
from .evaluate import evaluate, series_eval
from .model import (Depletion, EvalResult, IntegralKind, IntegralParams, Method, Resonance,
                    validate)
from .quadrature import QuadratureControl, integrand, oracle_eval
from .rates import (CONSTANTS, CONSTANTS_VERSION, Bare, Cutoff, Depleted, ReactionSystem,
                    ResonanceData, ResonancePrefactor, Screened, nonresonant_rate,
                    rate_breakdown, reduced_mass, resonant_probability, sommerfeld_z)
from .reductions import ConvergenceWindow, i3_eval, i4_eval, i5_eval, i7_eval, resonant_window
from .series import (DegeneracyReport, check_degenerate, i2_dispatch, i2_finite_series,
                     i2_infinite_series)
from .special import (SeriesControl, hyper_0f2, hyper_1f0, log_gamma, pochhammer)

__version__ = "0.1.0"
