"""Python bindings for the regrowth solver."""

from ._core import (
    Config,
    RegrowthError,
    __version__,
    certainty_equivalent,
    check,
    drift,
    euler_residuals,
    simulate,
    solve,
    stationary_distribution,
)

__all__ = [
    "Config",
    "RegrowthError",
    "__version__",
    "certainty_equivalent",
    "check",
    "drift",
    "euler_residuals",
    "simulate",
    "solve",
    "stationary_distribution",
]
