"""Forward-forward mean-field game congestion models."""

from ._ffmfg import (
    ConfigError,
    FfmfgError,
    analyze,
    coefficients,
    density_lower_bound,
    eigenstructure,
    entropy,
    entropy_exponent_b,
    entropy_residual,
    flux,
    mass,
    riemann_invariants,
    run_config,
    s1_threshold,
    simulate,
    theta,
    traveling_wave,
    verify,
    wave_speed,
)

__all__ = [
    "ConfigError",
    "FfmfgError",
    "analyze",
    "coefficients",
    "density_lower_bound",
    "eigenstructure",
    "entropy",
    "entropy_exponent_b",
    "entropy_residual",
    "flux",
    "mass",
    "riemann_invariants",
    "run_config",
    "s1_threshold",
    "simulate",
    "theta",
    "traveling_wave",
    "verify",
    "wave_speed",
]
