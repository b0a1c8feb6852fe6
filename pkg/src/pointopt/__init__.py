"""Ground states of point interactions on a loop, circle, or sphere."""

from .configurations import (
    Configuration,
    Setting,
    SharpConfig,
    canonical_config,
    canonical_loop,
    distances,
    is_congruent,
    named_config,
    random_config,
    sharp_sphere,
    spherical_design_strength,
)
from .errors import (
    ArgumentError,
    DomainError,
    NoBoundStateError,
    PoleError,
    PointOptError,
    SamplingError,
    SolverError,
    UnsupportedConfigurationError,
)
from .kernels import (
    complete_monotonicity_check,
    green_free,
    green_loop_negative,
    green_loop_positive,
    xi_regularized,
)
from .spectral import SpectralParam, SpectralResult, alpha_crit, dirichlet_ground, ground_state, krein_matrix

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "Configuration",
    "DomainError",
    "NoBoundStateError",
    "PoleError",
    "PointOptError",
    "SamplingError",
    "Setting",
    "SharpConfig",
    "SolverError",
    "SpectralParam",
    "SpectralResult",
    "UnsupportedConfigurationError",
    "alpha_crit",
    "canonical_config",
    "canonical_loop",
    "complete_monotonicity_check",
    "dirichlet_ground",
    "distances",
    "green_free",
    "green_loop_negative",
    "green_loop_positive",
    "ground_state",
    "is_congruent",
    "krein_matrix",
    "named_config",
    "random_config",
    "sharp_sphere",
    "spherical_design_strength",
    "xi_regularized",
]
