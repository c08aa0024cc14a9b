"""likenessrisk: when does a synthetic artifact match a real entity by chance?

Quantifies the risk of coincidental generation — a generative model's output
(e.g. a synthetic portrait) resembling a real, out-of-training-set entity
closely enough to be mistaken for it — via nearest-neighbor statistics in a
low-dimensional perceptual feature space, validated by Monte Carlo geometry
and complemented by false-alarm audits of recognizer outputs.
"""

__version__ = "0.1.0"

from .nnstats import (
    NNQuery,
    approximation_ratio,
    gamma_ratio_log,
    log_gamma,
    nn_mean_approx,
    nn_mean_exact,
)
from .perception import (
    PerceptualParams,
    RiskAssessment,
    confusion_probability,
    critical_population,
    risk_verdict,
)

__all__ = [
    "__version__",
    "NNQuery",
    "approximation_ratio",
    "gamma_ratio_log",
    "log_gamma",
    "nn_mean_approx",
    "nn_mean_exact",
    "PerceptualParams",
    "RiskAssessment",
    "confusion_probability",
    "critical_population",
    "risk_verdict",
]
