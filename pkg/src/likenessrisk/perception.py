"""The perceptual privacy criterion.

Geometric nearest-neighbor distances are scaled by the average observer
discriminability ``d_bar_prime`` into just-noticeable-difference (JND) units
and compared against a likeness threshold ``c``: a generator's output is at
risk of being confused with a real entity when

    d_bar_prime * <r_1(N)> < c,

i.e. when the expected distance to the nearest of N entities falls below the
threshold once expressed in perceptual units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .nnstats import approximation_ratio, log_gamma, nn_mean_exact

__all__ = [
    "DEFAULT_DIMENSION",
    "DIMENSION_RANGE",
    "PerceptualParams",
    "RiskAssessment",
    "risk_verdict",
    "confusion_probability",
    "critical_population",
]

#: Default face-space dimensionality; empirical estimates put it between
#: 7 and 12, so analyses should be checked across that whole range.
DEFAULT_DIMENSION = 10
DIMENSION_RANGE = (7, 12)


@dataclass(frozen=True)
class PerceptualParams:
    """Observer discriminability and likeness threshold, in JND units.

    ``d_bar_prime`` converts feature-space distance to JNDs of identity;
    ``c`` is the perceptual distance below which two instances count as
    confusable. Defaults fold the observer into the unit of the space
    (d_bar_prime = 1) and use the natural 1-JND likeness standard.
    """

    d_bar_prime: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.d_bar_prime) and self.d_bar_prime >= 0.0):
            raise ValueError(f"d_bar_prime must be a finite non-negative real, got {self.d_bar_prime!r}")
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"c must be a finite positive real, got {self.c!r}")


@dataclass(frozen=True)
class RiskAssessment:
    """Verdict of the privacy criterion plus derived quantities.

    ``critical_population`` is None when d_bar_prime = 0: an undiscriminating
    observer is confused at any population size, so no finite threshold
    exists.
    """

    mean_nn_distance: float
    mean_nn_jnd: float
    threshold_jnd: float
    at_risk: bool
    confusion_probability: float
    critical_population: float | None

    def to_dict(self) -> dict:
        return {
            "mean_nn_distance": self.mean_nn_distance,
            "mean_nn_jnd": self.mean_nn_jnd,
            "threshold_jnd": self.threshold_jnd,
            "at_risk": self.at_risk,
            "confusion_probability": self.confusion_probability,
            "critical_population": self.critical_population,
        }


def _check_population(N) -> float:
    N = float(N)
    if not math.isfinite(N) or N < 0.0:
        raise ValueError(f"population N must be a finite non-negative real, got {N!r}")
    return N


def confusion_probability(params: PerceptualParams, N: float, D: int) -> float:
    """Probability that at least one of N entities lies within the threshold.

    Models entities as uniform in the unit volume: each falls inside the
    confusion ball of radius c/d_bar_prime with probability equal to the ball
    volume V, giving 1 - (1 - V)^N, evaluated in log space so tiny V and huge
    N do not underflow. Boundary effects are ignored (valid for V << 1);
    the result is clamped to 1 once the ball covers the whole space.
    """
    N = _check_population(N)
    if D != int(D) or int(D) < 1:
        raise ValueError(f"dimensionality D must be a positive integer, got {D!r}")
    D = int(D)
    if N == 0.0:
        return 0.0
    if params.d_bar_prime == 0.0:
        return 1.0
    radius = params.c / params.d_bar_prime
    if radius >= math.sqrt(D):  # ball covers the diameter of the unit cube
        return 1.0
    log_volume = 0.5 * D * math.log(math.pi) + D * math.log(radius) - log_gamma(0.5 * D + 1.0)
    if log_volume >= 0.0:
        return 1.0
    volume = math.exp(log_volume)
    return -math.expm1(N * math.log1p(-volume))


def critical_population(params: PerceptualParams, D: int, n: int = 1) -> float:
    """Population size N* at which the mean rank-n neighbor hits threshold.

    Solves d_bar_prime * C(D, n) * N^(-1/D) = c using the large-N form of the
    exact mean; the criterion holds for all N > N*. Undefined (raises) for
    d_bar_prime = 0, where the criterion holds at every population size.
    """
    if params.d_bar_prime == 0.0:
        raise ValueError("critical_population is undefined for d_bar_prime = 0 "
                         "(the criterion holds at every population size)")
    # C(D, n) = approximation_ratio(D, n) * n^(1/D)
    log_C = math.log(approximation_ratio(D, n)) + math.log(n) / int(D)
    log_nstar = D * (log_C + math.log(params.d_bar_prime) - math.log(params.c))
    try:
        return math.exp(log_nstar)
    except OverflowError:
        return math.inf


def risk_verdict(params: PerceptualParams, N: float, D: int = DEFAULT_DIMENSION) -> RiskAssessment:
    """Evaluate the privacy criterion for a population of N entities.

    at_risk is true iff the mean nearest-neighbor distance, in JND, is
    strictly below the threshold c.
    """
    N = _check_population(N)
    if N < 2.0:
        raise ValueError(f"risk_verdict requires N >= 2, got {N!r}")
    mean_distance = nn_mean_exact(D, 1, N)
    mean_jnd = params.d_bar_prime * mean_distance
    return RiskAssessment(
        mean_nn_distance=mean_distance,
        mean_nn_jnd=mean_jnd,
        threshold_jnd=params.c,
        at_risk=mean_jnd < params.c,
        confusion_probability=confusion_probability(params, N, D),
        critical_population=(
            critical_population(params, D, 1) if params.d_bar_prime > 0.0 else None
        ),
    )
