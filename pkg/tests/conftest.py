import functools

import numpy as np
import pytest

from nmdiscord.runner import RunConfig, run_trajectory


@functools.lru_cache(maxsize=None)
def cached_run(env, alpha2, lam, t_max=50.0, dt=None):
    """Trajectory runs shared across test modules (they take a few seconds each)."""
    return run_trajectory(RunConfig(env, alpha2, lam, t_max_gamma0=t_max, dt_gamma0=dt))


@pytest.fixture
def rng():
    return np.random.default_rng(20101)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, n, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; printed at the end of the session."""

    def record(number, passed, detail):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
