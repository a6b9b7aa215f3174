"""Closed-form dynamics for two qubits in identical, independent Lorentzian reservoirs."""

from __future__ import annotations

import math

import numpy as np

from nmdiscord.correlations import XState
from nmdiscord.errors import DomainError, UnsupportedRegimeError
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams

# below this |2 gamma0 lam - lam^2| the critically damped limit is used
_CRITICAL_EPS = 1e-12


def amplitude_q(t, r: ReservoirParams):
    """Excited-state amplitude of one qubit damped by a Lorentzian reservoir at zero temperature.

    Solves q'' + lam q' + (gamma0 lam / 2) q = 0 with q(0) = 1, q'(0) = 0.
    Accepts scalars or arrays; raises :class:`DomainError` for negative times.
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0) or not np.all(np.isfinite(tt)):
        raise DomainError("time must be finite and non-negative")
    lam = r.lam
    envelope = np.exp(-0.5 * lam * tt)
    disc = 2.0 * r.gamma0 * lam - lam * lam
    if disc > _CRITICAL_EPS * lam * lam:
        d = math.sqrt(disc)
        q = envelope * (np.cos(0.5 * d * tt) + (lam / d) * np.sin(0.5 * d * tt))
    elif disc < -_CRITICAL_EPS * lam * lam:
        d = math.sqrt(-disc)
        # cosh + (lam/d) sinh, rewritten with decaying exponentials to avoid overflow
        lo, hi = 0.5 * (lam - d), 0.5 * (lam + d)
        q = 0.5 * (1.0 + lam / d) * np.exp(-lo * tt) + 0.5 * (1.0 - lam / d) * np.exp(-hi * tt)
    else:
        q = envelope * (1.0 + 0.5 * lam * tt)
    return float(q) if np.ndim(q) == 0 else q


def propagate_independent(init: BellLikeInitial, r: ReservoirParams, t: float) -> XState:
    q = amplitude_q(t, r)
    p = q * q
    kappa = 1.0 - init.alpha2
    one_m = 1.0 - p
    return XState(
        a=init.alpha2 + kappa * one_m * one_m,
        b=kappa * p * one_m,
        d=kappa * p * p,
        w=init.alpha * init.beta * p,
        z=0.0,
    )


def vanish_times(r: ReservoirParams, n_max: int) -> list[float]:
    """Zeros t_n = 2 [n pi - arctan(d / lam)] / d of the amplitude, n = 1..n_max."""
    if r.regime != "strong":
        raise UnsupportedRegimeError("vanishing times exist only for strong coupling (gamma0 > lam/2)")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    d = r.oscillation_frequency
    phase = math.atan(d / r.lam)
    return [2.0 * (n * math.pi - phase) / d for n in range(1, n_max + 1)]
