"""Lorentzian reservoir parameters and the Bell-like initial-state family."""

from __future__ import annotations

import math
from dataclasses import dataclass

from nmdiscord.correlations import XState
from nmdiscord.errors import DomainError


@dataclass(frozen=True)
class ReservoirParams:
    """Lorentzian spectral density with strength ``gamma0`` and width ``lam``.

    ``lam`` is the inverse bath memory time, ``gamma0`` the inverse system
    relaxation time.  Coupling is strong (oscillatory, non-Markovian) when
    gamma0 > lam / 2.
    """

    gamma0: float
    lam: float

    def __post_init__(self):
        if not (self.gamma0 > 0.0 and math.isfinite(self.gamma0)):
            raise DomainError(f"gamma0 must be positive, got {self.gamma0!r}")
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must be positive, got {self.lam!r}")

    @property
    def regime(self) -> str:
        return "strong" if self.gamma0 > 0.5 * self.lam else "weak"

    @property
    def omega0(self) -> float:
        """Pseudomode coupling for a single qubit."""
        return math.sqrt(0.5 * self.gamma0 * self.lam)

    @property
    def oscillation_frequency(self) -> float:
        """sqrt(2 gamma0 lam - lam^2) in the strong regime, sqrt(lam^2 - 2 gamma0 lam) otherwise."""
        return math.sqrt(abs(2.0 * self.gamma0 * self.lam - self.lam**2))


@dataclass(frozen=True)
class BellLikeInitial:
    """alpha|00> + sqrt(1 - alpha^2)|11> with ``alpha2`` = alpha^2."""

    alpha2: float

    def __post_init__(self):
        if not (0.0 <= self.alpha2 <= 1.0):
            raise DomainError(f"alpha2 must lie in [0, 1], got {self.alpha2!r}")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha2)

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - self.alpha2)

    def xstate(self) -> XState:
        return XState(a=self.alpha2, b=0.0, d=1.0 - self.alpha2, w=self.alpha * self.beta, z=0.0)
