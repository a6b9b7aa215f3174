"""Oracle suites behind ``nmdiscord validate``.

Each suite pits a production path against an independent computation and
returns a :class:`SuiteResult`; none of them raise on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from nmdiscord.common import IntegratorConfig, propagate_common, single_qubit_amplitude
from nmdiscord.correlations import discord_numeric, discord_x_analytic, random_xstate
from nmdiscord.independent import amplitude_q, vanish_times
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams

DISCORD_AGREEMENT_TOL = 1e-6
CALIBRATION_TOL = 1e-6
CALIBRATION_LAMBDAS = (0.1, 1.0, 10.0)
HALVING_TOL = 1e-8


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def analytic_vs_numeric(n_samples: int = 500, seed: int = 0, tol: float = DISCORD_AGREEMENT_TOL) -> SuiteResult:
    rng = np.random.default_rng(seed)
    errs = np.empty(n_samples)
    for k in range(n_samples):
        x = random_xstate(rng)
        errs[k] = discord_x_analytic(x).discord - discord_numeric(x.to_density())
    bad = int(np.sum(np.abs(errs) > tol))
    worst = float(np.max(np.abs(errs))) if n_samples else 0.0
    detail = f"max |analytic - numeric| = {worst:.3e} over {n_samples} X states (seed {seed}); {bad} beyond {tol:g}"
    if bad:
        above = int(np.sum(errs > tol))
        detail += f" ({above} with the closed form above the numeric optimum)"
    return SuiteResult("analytic-vs-numeric discord", bad == 0, detail)


def pseudomode_calibration(
    lambdas=CALIBRATION_LAMBDAS, t_max: float = 50.0, tol: float = CALIBRATION_TOL, omega_scale: float = 1.0
) -> SuiteResult:
    worst = 0.0
    for lam in lambdas:
        r = ReservoirParams(1.0, lam)
        cfg = IntegratorConfig(dt=IntegratorConfig.max_dt(r), t_max=t_max)
        t, q_num = single_qubit_amplitude(r, cfg, omega_scale=omega_scale)
        worst = max(worst, float(np.max(np.abs(q_num - amplitude_q(t, r)))))
    return SuiteResult(
        "single-qubit pseudomode calibration",
        worst <= tol,
        f"max |q_pseudomode - q_closed| = {worst:.3e} for lambda in {list(lambdas)}",
    )


def vanish_times_crosscheck(lambdas=(0.01, 0.1, 1.0), n_max: int = 3) -> SuiteResult:
    worst_dt, worst_p = 0.0, 0.0
    for lam in lambdas:
        r = ReservoirParams(1.0, lam)
        period = 2.0 * math.pi / r.oscillation_frequency
        for tn in vanish_times(r, n_max):
            root = brentq(lambda s: amplitude_q(s, r), tn - 0.25 * period, tn + 0.25 * period, xtol=1e-14)
            worst_dt = max(worst_dt, abs(root - tn))
            worst_p = max(worst_p, amplitude_q(tn, r) ** 2)
    ok = worst_dt <= 1e-9 and worst_p <= 1e-12
    return SuiteResult(
        "vanishing-time cross-check",
        ok,
        f"max |t_n - root| = {worst_dt:.3e}, max P(t_n) = {worst_p:.3e}",
    )


def halving_convergence(
    alpha2: float = 1.0 / 3.0, lam: float = 0.1, t_max: float = 20.0, dt: float = 0.005, tol: float = HALVING_TOL
) -> SuiteResult:
    worst = step_halving_difference(BellLikeInitial(alpha2), ReservoirParams(1.0, lam), t_max, dt)
    return SuiteResult(
        "RK4 step-halving convergence",
        worst <= tol,
        f"max entry change {worst:.3e} when dt {dt:g} -> {dt / 2:g}",
    )


def step_halving_difference(init: BellLikeInitial, r: ReservoirParams, t_max: float, dt: float) -> float:
    coarse = propagate_common(init, r, IntegratorConfig(dt, t_max, 1))
    fine = propagate_common(init, r, IntegratorConfig(dt / 2.0, t_max, 2))
    worst = 0.0
    for xc, xf in zip(coarse.states, fine.states):
        worst = max(
            worst,
            abs(xc.a - xf.a), abs(xc.b - xf.b), abs(xc.d - xf.d), abs(xc.w - xf.w), abs(xc.z - xf.z),
        )
    return worst


def run_all(seed: int = 0, n_samples: int = 500) -> list[SuiteResult]:
    return [
        analytic_vs_numeric(n_samples=n_samples, seed=seed),
        pseudomode_calibration(),
        vanish_times_crosscheck(),
        halving_convergence(),
    ]
