"""Distributional approximation via characterizing operators: exact and
Monte Carlo probability metrics, bias-transform couplings, explicit error
bounds for normal / Poisson / exponential / geometric targets, and
concentration inequalities — with a soundness-certification harness."""

from . import bounds, concentration, couplings, dist, metrics, models, stein_eq
from .bounds import BoundReport, Input, MomentSummary
from .couplings import CouplingDraw, IdentityCheck, PairCheckReport
from .dist import (FinitePmf, RngStream, TargetLaw, exponential, geometric0,
                   geometric1, normal, poisson)
from .metrics import MetricValue
from .stein_eq import TestFunction

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "CouplingDraw", "FinitePmf", "IdentityCheck", "Input",
    "MetricValue", "MomentSummary", "PairCheckReport", "RngStream",
    "TargetLaw", "TestFunction", "bounds", "concentration", "couplings",
    "dist", "exponential", "geometric0", "geometric1", "metrics", "models",
    "normal", "poisson", "stein_eq",
]
