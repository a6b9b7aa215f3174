import math

import numpy as np
import pytest

from nmdiscord.common import (
    IntegratorConfig,
    build_common_generator,
    build_single_qubit_generator,
    lindblad_superoperator,
    propagate_common,
    single_qubit_amplitude,
)
from nmdiscord.errors import DomainError, IntegrationError
from nmdiscord.independent import amplitude_q
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams
from nmdiscord.validation import step_halving_difference

R = ReservoirParams(1.0, 0.1)


def test_generator_preserves_trace(rng):
    gen = build_common_generator(R)
    n = gen.dim
    for _ in range(5):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert abs(np.trace(gen.apply(m))) <= 1e-12 * np.abs(m).sum()


def test_ground_state_is_stationary():
    gen = build_common_generator(R)
    rho = np.zeros((gen.dim, gen.dim), dtype=complex)
    rho[0, 0] = 1.0
    assert np.max(np.abs(gen.apply(rho))) == 0.0


def test_superoperator_matches_direct_lindblad(rng):
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = h + h.conj().T
    op = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    sup = lindblad_superoperator(h, [(0.7, op)])
    ldl = op.conj().T @ op
    direct = -1j * (h @ rho - rho @ h) + 0.7 * (op @ rho @ op.conj().T - 0.5 * (ldl @ rho + rho @ ldl))
    np.testing.assert_allclose((sup @ rho.ravel()).reshape(3, 3), direct, atol=1e-12)


def test_cutoff_validation():
    with pytest.raises(DomainError):
        build_common_generator(R, fock_cutoff=1)


@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
def test_single_qubit_calibration(lam):
    r = ReservoirParams(1.0, lam)
    t, q = single_qubit_amplitude(r, IntegratorConfig(IntegratorConfig.max_dt(r), 50.0))
    assert np.max(np.abs(q - amplitude_q(t, r))) <= 1e-6


def test_calibration_detects_wrong_coupling():
    r = ReservoirParams(1.0, 1.0)
    cfg = IntegratorConfig(IntegratorConfig.max_dt(r), 50.0)
    for scale in (0.95, 1.05):
        t, q = single_qubit_amplitude(r, cfg, omega_scale=scale)
        assert np.max(np.abs(q - amplitude_q(t, r))) > 1e-3


def test_single_qubit_generator_shape():
    assert build_single_qubit_generator(R).dim == 4


def test_ground_initial_state_is_frozen():
    traj = propagate_common(BellLikeInitial(1.0), R, IntegratorConfig(0.005, 5.0, 100))
    for x in traj.states:
        assert x.a == 1.0 and x.b == 0.0 and x.d == 0.0 and x.w == 0.0


def test_fock_cutoff_three_agrees():
    init = BellLikeInitial(0.2)
    cfg = IntegratorConfig(0.005, 10.0, 50)
    base = propagate_common(init, R, cfg)
    big = propagate_common(init, R, cfg, fock_cutoff=3)
    for x, y in zip(base.states, big.states):
        assert max(abs(x.a - y.a), abs(x.b - y.b), abs(x.d - y.d), abs(x.w - y.w), abs(x.z - y.z)) <= 1e-12


def test_health_on_default_run():
    traj = propagate_common(BellLikeInitial(1 / 3), R, IntegratorConfig(0.005, 30.0, 10))
    assert traj.max_trace_drift <= 1e-8
    assert traj.min_eigenvalue >= -1e-8
    assert traj.max_imag_coherence <= 1e-8
    assert traj.excitation_monotone()


def test_step_halving():
    assert step_halving_difference(BellLikeInitial(1 / 3), R, 20.0, 0.005) <= 1e-8


def test_dt_bound_enforced():
    r = ReservoirParams(1.0, 10.0)
    assert IntegratorConfig.max_dt(r) == pytest.approx(0.002)
    with pytest.raises(DomainError):
        propagate_common(BellLikeInitial(0.5), r, IntegratorConfig(0.01, 1.0))


def test_integration_error_reports_time():
    # the largest allowed step is still too coarse for positivity at lam = 1
    r = ReservoirParams(1.0, 1.0)
    with pytest.raises(IntegrationError) as info:
        propagate_common(BellLikeInitial(1 / 3), r, IntegratorConfig(0.02, 5.0))
    assert info.value.time is not None and 0.0 <= info.value.time <= 5.0


def test_antisymmetric_population_is_carried():
    traj = propagate_common(BellLikeInitial(0.5), R, IntegratorConfig(0.005, 5.0, 100), p_minus=0.2)
    for x in traj.states:
        assert x.a + 2 * x.b + x.d == pytest.approx(1.0, abs=1e-12)
        assert x.b - x.z == pytest.approx(0.2, abs=1e-12)


def test_n_steps_rounding():
    assert IntegratorConfig(0.1, 1.0).n_steps == 10
    assert IntegratorConfig(0.3, 1.0).n_steps == 3
    with pytest.raises(DomainError):
        IntegratorConfig(0.0, 1.0)
    with pytest.raises(DomainError):
        IntegratorConfig(0.1, 1.0, record_every=0)
