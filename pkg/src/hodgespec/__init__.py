"""Numerical checks of the essential spectrum of the Hodge Laplacian on
rotationally symmetric, asymptotically hyperbolic manifolds, and of the
dimension of their L^2 harmonic forms."""

from .errors import AssemblyError, ConstructionError, DomainError, EvaluationError, HodgeSpecError, UndefinedError
from .harmonic import HarmonicReport, IntegralVerdict, classify_harmonic, conformal_radius, middle_integral, volume_integral
from .metric import MetricProfile, check_decay, eval_profile, get_profile, hyperbolic_profile, perturbed_profile
from .reduction import Channel, RadialOperator, build_radial_operator, coupling_v3, potential_w1, potential_w2
from .sphere_modes import SphereMode, closed_eigenvalues, coclosed_eigenvalues
from .spectrum import (
    BracketConfig,
    EssentialBracket,
    SpectrumReport,
    channel_threshold,
    essential_bottom_bracket,
    predict_essential_spectrum,
    sweep_modes,
    verify,
)

__version__ = "0.1.0"
