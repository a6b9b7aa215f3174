"""Exact non-Markovian two-qubit dynamics with quantum discord and entanglement tracking."""

from nmdiscord.errors import (
    DimensionMismatchError,
    DomainError,
    IntegrationError,
    InvalidStateError,
    UnsupportedRegimeError,
)
from nmdiscord.qmatrix import DensityMatrix, hermitian_eigenvalues, partial_trace, vn_entropy
from nmdiscord.correlations import (
    DiscordResult,
    MeasurementAngles,
    XState,
    classical_correlation_numeric,
    concurrence_x,
    conditional_entropy_after_measurement,
    discord_numeric,
    discord_x_analytic,
    eof_from_concurrence,
    mutual_information,
)
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams
from nmdiscord.independent import amplitude_q, propagate_independent, vanish_times
from nmdiscord.common import IntegratorConfig, build_common_generator, propagate_common

__version__ = "0.1.0"

__all__ = [
    "BellLikeInitial",
    "DensityMatrix",
    "DimensionMismatchError",
    "DiscordResult",
    "DomainError",
    "IntegrationError",
    "IntegratorConfig",
    "InvalidStateError",
    "MeasurementAngles",
    "ReservoirParams",
    "UnsupportedRegimeError",
    "XState",
    "amplitude_q",
    "build_common_generator",
    "classical_correlation_numeric",
    "concurrence_x",
    "conditional_entropy_after_measurement",
    "discord_numeric",
    "discord_x_analytic",
    "eof_from_concurrence",
    "hermitian_eigenvalues",
    "mutual_information",
    "partial_trace",
    "propagate_common",
    "propagate_independent",
    "vanish_times",
    "vn_entropy",
]
