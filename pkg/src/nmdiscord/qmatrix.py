"""Dense complex-matrix helpers: Hermitian spectra, partial trace, von Neumann entropy.

Basis ordering for two qubits is fixed as |00>, |01>, |10>, |11> with the
first symbol belonging to qubit A (A-major).  Every module relies on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from nmdiscord.errors import DimensionMismatchError, InvalidStateError

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8


def _as_square(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {arr.shape}")
    return arr


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    arr = _as_square(m)
    return float(np.max(np.abs(arr - arr.conj().T))) <= tol


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density operator.

    Construction checks Hermiticity, unit trace and positivity against the
    given tolerances and raises :class:`InvalidStateError` otherwise.  The
    stored array is a read-only copy.
    """

    matrix: np.ndarray
    hermiticity_tol: float = HERMITICITY_TOL
    trace_tol: float = TRACE_TOL
    positivity_tol: float = POSITIVITY_TOL
    _eigvals: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = _as_square(self.matrix).copy()
        if not np.all(np.isfinite(arr)):
            raise InvalidStateError("density matrix has non-finite entries")
        herm_err = float(np.max(np.abs(arr - arr.conj().T)))
        if herm_err > self.hermiticity_tol:
            raise InvalidStateError(f"not Hermitian: max |rho - rho^dag| = {herm_err:.3e}")
        tr = np.trace(arr).real
        if abs(tr - 1.0) > self.trace_tol:
            raise InvalidStateError(f"trace {tr!r} differs from 1")
        ev = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
        if ev[0] < -self.positivity_tol:
            raise InvalidStateError(f"not positive semidefinite: min eigenvalue {ev[0]:.3e}")
        arr.setflags(write=False)
        ev.setflags(write=False)
        object.__setattr__(self, "matrix", arr)
        object.__setattr__(self, "_eigvals", ev)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigvals

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def from_ket(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return DensityMatrix(rho).matrix


def eigenvalues_2x2(m) -> np.ndarray:
    """Closed-form ascending eigenvalues of a 2x2 Hermitian matrix."""
    arr = _as_square(m)
    if arr.shape != (2, 2):
        raise DimensionMismatchError(f"expected 2x2, got {arr.shape}")
    p, r = arr[0, 0].real, arr[1, 1].real
    half_gap = np.hypot(0.5 * (p - r), abs(arr[0, 1]))
    mean = 0.5 * (p + r)
    return np.array([mean - half_gap, mean + half_gap])


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending.

    2x2 blocks use the closed form; larger matrices go through LAPACK.
    """
    arr = _as_square(m)
    if not is_hermitian(arr, tol):
        raise InvalidStateError("matrix is not Hermitian within tolerance")
    if arr.shape == (2, 2):
        return eigenvalues_2x2(arr)
    return np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))


def entropy_of_spectrum(eigvals, positivity_tol: float = POSITIVITY_TOL) -> float:
    """Shannon entropy in bits of a spectrum, with 0 log 0 = 0.

    Values in [-10*positivity_tol, 0) are treated as round-off and zeroed;
    anything more negative raises.
    """
    lam = np.asarray(eigvals, dtype=float)
    if lam.size and lam.min() < -10.0 * positivity_tol:
        raise InvalidStateError(f"negative eigenvalue {lam.min():.3e} beyond round-off")
    lam = np.clip(lam, 0.0, 1.0)
    nz = lam[lam > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def vn_entropy(rho) -> float:
    """Von Neumann entropy -Tr(rho log2 rho) in bits."""
    if isinstance(rho, DensityMatrix):
        return entropy_of_spectrum(rho.eigenvalues, rho.positivity_tol)
    dm = DensityMatrix(rho)
    return entropy_of_spectrum(dm.eigenvalues, dm.positivity_tol)


def partial_trace(rho, subsystem: str) -> DensityMatrix:
    """Trace out ``subsystem`` ('A' or 'B') of a two-qubit state.

    Returns the 2x2 reduced state of the remaining qubit.
    """
    arr = rho.matrix if isinstance(rho, DensityMatrix) else _as_square(rho)
    if arr.shape != (4, 4):
        raise DimensionMismatchError(f"partial trace needs a 4x4 two-qubit state, got {arr.shape}")
    t = arr.reshape(2, 2, 2, 2)  # (a, b, a', b')
    if subsystem == "B":
        red = np.einsum("ijkj->ik", t)
    elif subsystem == "A":
        red = np.einsum("ijik->jk", t)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(red, rho.hermiticity_tol, rho.trace_tol, rho.positivity_tol)
    return DensityMatrix(red)
