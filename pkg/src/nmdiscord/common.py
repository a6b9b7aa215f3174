"""Two qubits in one common Lorentzian reservoir, via a three-level ladder coupled to a damped pseudomode.

The symmetric subspace {|00>, |+>, |11>} behaves as a ladder g-m-e driven by
the collective raising operator sqrt(2)(|m><g| + |e><m|); the antisymmetric
state |-> decouples and is carried as a constant population.  The Lorentzian
reservoir is replaced exactly by one bosonic mode of coupling
Omega0 = sqrt(gamma0 lam / 2) that leaks at amplitude rate lam (Lindblad rate
2 lam).  States with at most two excitations never leave the Fock space
{0, 1, 2}, so the cutoff is exact for Bell-like initial states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from nmdiscord.correlations import XState
from nmdiscord.errors import DomainError, IntegrationError, InvalidStateError
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams

TRACE_DRIFT_TOL = 1e-8
POSITIVITY_TOL = 1e-8
HERMITICITY_TOL = 1e-9
IMAG_COHERENCE_TOL = 1e-8
# round-off allowance on the per-record excitation decrease
EXCITATION_SLACK = 1e-12
DT_FRACTION = 0.02


def annihilation(n_levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), 1).astype(complex)


def lindblad_superoperator(hamiltonian: np.ndarray, jumps) -> np.ndarray:
    """Matrix of L[rho] = -i[H, rho] + sum_k g_k (L rho L^+ - {L^+ L, rho}/2) on row-major vec(rho)."""
    n = hamiltonian.shape[0]
    eye = np.eye(n)
    sup = -1j * (np.kron(hamiltonian, eye) - np.kron(eye, hamiltonian.T))
    for rate, op in jumps:
        ldl = op.conj().T @ op
        sup += rate * (
            np.kron(op, op.conj()) - 0.5 * np.kron(ldl, eye) - 0.5 * np.kron(eye, ldl.T)
        )
    return sup


@dataclass(frozen=True)
class Generator:
    """Lindblad generator on a (system x pseudomode) space, with its superoperator matrix."""

    hamiltonian: np.ndarray
    jump: np.ndarray
    rate: float
    system_dim: int
    fock_dim: int
    superoperator: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.system_dim * self.fock_dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return (self.superoperator @ np.asarray(rho, dtype=complex).ravel()).reshape(self.dim, self.dim)

    def excitation_operator(self) -> np.ndarray:
        sys_n = np.diag(np.arange(self.system_dim, dtype=float))
        mode_n = np.diag(np.arange(self.fock_dim, dtype=float))
        return np.kron(sys_n, np.eye(self.fock_dim)) + np.kron(np.eye(self.system_dim), mode_n)


def _pseudomode_generator(raising: np.ndarray, coupling: float, lam: float, fock_cutoff: int) -> Generator:
    nf = fock_cutoff + 1
    ns = raising.shape[0]
    a = annihilation(nf)
    h = coupling * (np.kron(raising, a) + np.kron(raising.conj().T, a.conj().T))
    jump = np.kron(np.eye(ns), a)
    rate = 2.0 * lam
    return Generator(
        hamiltonian=h,
        jump=jump,
        rate=rate,
        system_dim=ns,
        fock_dim=nf,
        superoperator=lindblad_superoperator(h, [(rate, jump)]),
    )


def build_common_generator(r: ReservoirParams, fock_cutoff: int = 2, omega_scale: float = 1.0) -> Generator:
    """Ladder {g, m, e} x pseudomode generator for the common reservoir.

    ``omega_scale`` multiplies the pseudomode coupling; it exists for
    sensitivity checks and must be 1 for physical runs.
    """
    if fock_cutoff < 2:
        raise DomainError("the common-reservoir ladder needs a Fock cutoff of at least 2")
    ladder_up = np.zeros((3, 3), dtype=complex)
    ladder_up[1, 0] = ladder_up[2, 1] = math.sqrt(2.0)
    return _pseudomode_generator(ladder_up, omega_scale * r.omega0, r.lam, fock_cutoff)


def build_single_qubit_generator(r: ReservoirParams, fock_cutoff: int = 1, omega_scale: float = 1.0) -> Generator:
    """One two-level emitter {g, e} coupled to the pseudomode with strength Omega0."""
    up = np.array([[0, 0], [1, 0]], dtype=complex)
    return _pseudomode_generator(up, omega_scale * r.omega0, r.lam, fock_cutoff)


def rk4_step(f, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_max: float
    record_every: int = 1

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise DomainError(f"dt must be positive, got {self.dt!r}")
        if not (self.t_max > 0.0 and math.isfinite(self.t_max)):
            raise DomainError(f"t_max must be positive, got {self.t_max!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise DomainError(f"record_every must be a positive integer, got {self.record_every!r}")

    @staticmethod
    def max_dt(r: ReservoirParams) -> float:
        return DT_FRACTION * min(1.0 / r.lam, 1.0 / r.omega0, 1.0 / r.gamma0)

    def check(self, r: ReservoirParams) -> None:
        limit = self.max_dt(r)
        if self.dt > limit * (1.0 + 1e-12):
            raise DomainError(f"dt = {self.dt} exceeds the stability/accuracy bound {limit:.6g}")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_max / self.dt + 1e-9))


def _integrate(gen: Generator, rho0: np.ndarray, cfg: IntegratorConfig, on_record) -> None:
    sup = gen.superoperator
    n = gen.dim

    def f(v):
        return sup @ v

    v = rho0.astype(complex).ravel()
    for step in range(cfg.n_steps + 1):
        if step % cfg.record_every == 0:
            on_record(step * cfg.dt, v.reshape(n, n))
        if step < cfg.n_steps:
            v = rk4_step(f, v, cfg.dt)


@dataclass
class CommonTrajectory:
    """Recorded reduced states plus integrator health diagnostics."""

    times: list[float]
    states: list[XState]
    p_minus: float
    excitation: list[float]
    max_trace_drift: float
    min_eigenvalue: float
    max_hermiticity_error: float
    max_imag_coherence: float

    def __len__(self) -> int:
        return len(self.times)

    def excitation_monotone(self, slack: float = EXCITATION_SLACK) -> bool:
        ex = np.asarray(self.excitation)
        return bool(np.all(np.diff(ex) <= slack))


def ladder_initial_state(init: BellLikeInitial, fock_dim: int) -> np.ndarray:
    psi = np.zeros(3 * fock_dim, dtype=complex)
    psi[0 * fock_dim] = init.alpha  # |g, 0>
    psi[2 * fock_dim] = init.beta  # |e, 0>
    return np.outer(psi, psi.conj())


def reduce_to_xstate(sigma: np.ndarray, p_minus: float) -> XState:
    """Two-qubit X state from the 3x3 ladder state and the |-> population."""
    pm = sigma[1, 1].real
    return XState(
        a=sigma[0, 0].real,
        b=0.5 * (pm + p_minus),
        d=sigma[2, 2].real,
        w=sigma[0, 2].real,
        z=0.5 * (pm - p_minus),
    )


def propagate_common(
    init: BellLikeInitial,
    r: ReservoirParams,
    cfg: IntegratorConfig,
    fock_cutoff: int = 2,
    p_minus: float = 0.0,
) -> CommonTrajectory:
    """Integrate the ladder-pseudomode master equation with fixed-step RK4.

    Raises :class:`IntegrationError` (carrying the offending time) when trace,
    Hermiticity, positivity, excitation monotonicity or reality of the
    |00><11| coherence leave their tolerances.
    """
    cfg.check(r)
    gen = build_common_generator(r, fock_cutoff)
    nf = gen.fock_dim
    rho0 = ladder_initial_state(init, nf) * (1.0 - p_minus)
    trace0 = np.trace(rho0).real
    n_op_diag = np.diag(gen.excitation_operator())

    out = CommonTrajectory([], [], p_minus, [], 0.0, math.inf, 0.0, 0.0)

    def record(t, rho):
        drift = abs(np.trace(rho).real - trace0)
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        min_ev = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
        sigma = np.einsum("anbn->ab", rho.reshape(3, nf, 3, nf))
        imag_w = abs(sigma[0, 2].imag)
        excitation = float(np.dot(n_op_diag, np.diag(rho).real)) + p_minus
        if drift > TRACE_DRIFT_TOL:
            raise IntegrationError(f"trace drift {drift:.3e} at t = {t}", t)
        if herm > HERMITICITY_TOL:
            raise IntegrationError(f"Hermiticity error {herm:.3e} at t = {t}", t)
        if min_ev < -POSITIVITY_TOL:
            raise IntegrationError(f"negative eigenvalue {min_ev:.3e} at t = {t}", t)
        if imag_w > IMAG_COHERENCE_TOL:
            raise IntegrationError(f"|00><11| coherence acquired imaginary part {imag_w:.3e} at t = {t}", t)
        if out.excitation and excitation > out.excitation[-1] + EXCITATION_SLACK:
            raise IntegrationError(f"excitation number increased at t = {t}", t)
        try:
            x = reduce_to_xstate(sigma, p_minus)
        except InvalidStateError as exc:
            raise IntegrationError(f"reduced state left the X-state family at t = {t}: {exc}", t) from exc
        out.times.append(t)
        out.states.append(x)
        out.excitation.append(excitation)
        out.max_trace_drift = max(out.max_trace_drift, drift)
        out.max_hermiticity_error = max(out.max_hermiticity_error, herm)
        out.min_eigenvalue = min(out.min_eigenvalue, min_ev)
        out.max_imag_coherence = max(out.max_imag_coherence, imag_w)

    _integrate(gen, rho0, cfg, record)
    return out


def single_qubit_amplitude(
    r: ReservoirParams, cfg: IntegratorConfig, omega_scale: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Excited-state amplitude q(t) of one qubit, read off the decaying <e,0|rho|g,0> coherence."""
    cfg.check(r)
    gen = build_single_qubit_generator(r, omega_scale=omega_scale)
    nf = gen.fock_dim
    psi = np.zeros(2 * nf, dtype=complex)
    psi[0] = psi[nf] = 1.0 / math.sqrt(2.0)  # (|g,0> + |e,0>)/sqrt(2)
    rho0 = np.outer(psi, psi.conj())
    times: list[float] = []
    amps: list[float] = []

    def record(t, rho):
        times.append(t)
        amps.append(2.0 * rho[nf, 0].real)

    _integrate(gen, rho0, cfg, record)
    return np.asarray(times), np.asarray(amps)
