"""Quantum discord, classical correlation, mutual information and entanglement of formation.

Two routes to the discord are provided.  :func:`discord_x_analytic` is the
closed form for the symmetric X-state family (real coherences, equal middle
populations), taking the minimum of the two critical-measurement branches.
:func:`discord_numeric` works for any two-qubit state by searching over
projective measurements; it is the oracle the analytic path is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from nmdiscord.errors import DimensionMismatchError, DomainError, InvalidStateError
from nmdiscord.qmatrix import DensityMatrix, entropy_of_spectrum, partial_trace, vn_entropy

Branch = Literal["D1", "D2"]

XSTATE_TRACE_TOL = 1e-9
XSTATE_POS_TOL = 1e-12
MIN_OUTCOME_PROB = 1e-14

GRID_THETA = 129
GRID_PHI = 257
ANGLE_TOL = 1e-8


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def binary_entropy(p: float) -> float:
    """H(p) in bits; arguments are clipped into [0, 1]."""
    p = min(max(p, 0.0), 1.0)
    return 0.0 - _xlog2x(p) - _xlog2x(1.0 - p)


@dataclass(frozen=True)
class XState:
    """Two-qubit X state with real coherences and rho_22 = rho_33::

        [[a, 0, 0, w],
         [0, b, z, 0],
         [0, z, b, 0],
         [w, 0, 0, d]]
    """

    a: float
    b: float
    d: float
    w: float
    z: float

    def __post_init__(self):
        for name in ("a", "b", "d", "w", "z"):
            val = getattr(self, name)
            if isinstance(val, complex) or np.iscomplexobj(val):
                raise InvalidStateError(f"{name} must be real, got {val!r}")
            val = float(val)
            if not math.isfinite(val):
                raise InvalidStateError(f"{name} is not finite")
            object.__setattr__(self, name, val)
        a, b, d, w, z = self.a, self.b, self.d, self.w, self.z
        if abs(a + 2.0 * b + d - 1.0) > XSTATE_TRACE_TOL:
            raise InvalidStateError(f"a + 2b + d = {a + 2 * b + d!r}, expected 1")
        if min(a, b, d) < -XSTATE_POS_TOL:
            raise InvalidStateError(f"negative population in {self}")
        if w * w > a * d + XSTATE_POS_TOL or abs(z) > b + XSTATE_POS_TOL:
            raise InvalidStateError(f"X state blocks not positive: {self}")

    @classmethod
    def from_matrix(cls, rho, tol: float = 1e-9) -> "XState":
        m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        if m.shape != (4, 4):
            raise DimensionMismatchError(f"X state needs a 4x4 matrix, got {m.shape}")
        mask = np.array(
            [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]], dtype=bool
        )
        if np.max(np.abs(m[~mask]), initial=0.0) > tol:
            raise InvalidStateError("matrix is not of X form")
        if abs(m[1, 1] - m[2, 2]) > tol:
            raise InvalidStateError("rho_22 != rho_33")
        if max(abs(m[0, 3].imag), abs(m[1, 2].imag)) > tol:
            raise InvalidStateError("coherences must be real")
        return cls(
            a=m[0, 0].real,
            b=0.5 * (m[1, 1].real + m[2, 2].real),
            d=m[3, 3].real,
            w=m[0, 3].real,
            z=m[1, 2].real,
        )

    def to_matrix(self) -> np.ndarray:
        a, b, d, w, z = self.a, self.b, self.d, self.w, self.z
        return np.array(
            [[a, 0, 0, w], [0, b, z, 0], [0, z, b, 0], [w, 0, 0, d]], dtype=complex
        )

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.to_matrix())

    def eigenvalues(self) -> tuple[float, float, float, float]:
        mean = 0.5 * (self.a + self.d)
        half_gap = math.hypot(0.5 * (self.a - self.d), self.w)
        return (mean + half_gap, mean - half_gap, self.b + self.z, self.b - self.z)

    def marginal_populations(self) -> tuple[float, float]:
        # identical for A and B
        return (self.a + self.b, self.b + self.d)

    def purity(self) -> float:
        a, b, d, w, z = self.a, self.b, self.d, self.w, self.z
        return a * a + d * d + 2.0 * (b * b + w * w + z * z)


@dataclass(frozen=True)
class MeasurementAngles:
    """Projector basis |1> = cos(theta)|up> + e^{i phi} sin(theta)|down>, |2> orthogonal."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta < math.pi) or not (0.0 <= self.phi < 2.0 * math.pi):
            raise DomainError(f"angles out of range: theta={self.theta}, phi={self.phi}")

    @classmethod
    def wrapped(cls, theta: float, phi: float) -> "MeasurementAngles":
        """Map arbitrary angles onto the canonical ranges describing the same projectors."""
        theta = float(theta) % (2.0 * math.pi)
        phi = float(phi)
        if theta >= math.pi:
            # |1> -> -|1>
            theta -= math.pi
        return cls(theta % math.pi, phi % (2.0 * math.pi))

    def kets(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(self.theta), math.sin(self.theta)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([c, e * s]), np.array([s, -e * c])


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    branch: Branch
    d1_value: float
    d2_value: float
    classical_correlation: float
    mutual_information: float


def mutual_information(rho) -> float:
    """S(rho_A) + S(rho_B) - S(rho) in bits."""
    dm = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if dm.dim != 4:
        raise DimensionMismatchError(f"two-qubit state required, got dim {dm.dim}")
    s_a = vn_entropy(partial_trace(dm, "B"))
    s_b = vn_entropy(partial_trace(dm, "A"))
    return s_a + s_b - vn_entropy(dm)


def _measurement_blocks(m: np.ndarray, measured: str):
    """Blocks M_ij = <i|rho|j> over the measured qubit, as 2x2 operators on the other one."""
    t = m.reshape(2, 2, 2, 2)  # (a, b, a', b')
    if measured == "B":
        return t[:, 0, :, 0], t[:, 1, :, 1], t[:, 0, :, 1]
    if measured == "A":
        return t[0, :, 0, :], t[1, :, 1, :], t[0, :, 1, :]
    raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")


class _Landscape:
    """sum_k p_k S(rho_k) as a function of the measurement angles for one fixed state.

    With |1> = (c, e s) and |2> = (s, -e c) on the measured qubit the
    unnormalized conditional states are c^2 M00 + s^2 M11 +/- cs X and
    s^2 M00 + c^2 M11 -/+ ..., where X = e M01 + e* M10.
    """

    def __init__(self, m: np.ndarray, measured: str):
        m00, m11, m01 = _measurement_blocks(np.asarray(m, dtype=complex), measured)
        self.p00 = (m00[0, 0].real, m11[0, 0].real)
        self.p11 = (m00[1, 1].real, m11[1, 1].real)
        self.q01 = (complex(m00[0, 1]), complex(m11[0, 1]))
        # X entries: X_rs = e (M01)_rs + e* (M10)_rs with M10 = M01^dagger
        self.x00 = complex(m01[0, 0])
        self.x11 = complex(m01[1, 1])
        self.x01 = complex(m01[0, 1])
        self.x10c = complex(np.conj(m01[1, 0]))

    def grid(self, theta, phi) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        c2, s2, cs = np.cos(theta) ** 2, np.sin(theta) ** 2, 0.5 * np.sin(2.0 * theta)
        e = np.exp(1j * phi)
        x00 = 2.0 * (e * self.x00).real
        x11 = 2.0 * (e * self.x11).real
        x01 = e * self.x01 + np.conj(e) * self.x10c
        total = 0.0
        for u, v, sign in ((c2, s2, 1.0), (s2, c2, -1.0)):
            r00 = u * self.p00[0] + v * self.p00[1] + sign * cs * x00
            r11 = u * self.p11[0] + v * self.p11[1] + sign * cs * x11
            r01 = u * self.q01[0] + v * self.q01[1] + sign * cs * x01
            total = total + _weighted_entropy(r00, r11, np.abs(r01))
        return np.asarray(total)

    def value(self, theta: float, phi: float) -> float:
        c, s = math.cos(theta), math.sin(theta)
        c2, s2, cs = c * c, s * s, c * s
        e = complex(math.cos(phi), math.sin(phi))
        x00 = 2.0 * (e * self.x00).real
        x11 = 2.0 * (e * self.x11).real
        x01 = e * self.x01 + e.conjugate() * self.x10c
        total = 0.0
        for u, v, sign in ((c2, s2, 1.0), (s2, c2, -1.0)):
            r00 = u * self.p00[0] + v * self.p00[1] + sign * cs * x00
            r11 = u * self.p11[0] + v * self.p11[1] + sign * cs * x11
            r01 = u * self.q01[0] + v * self.q01[1] + sign * cs * x01
            p = r00 + r11
            if p < MIN_OUTCOME_PROB:
                continue
            half_gap = math.hypot(0.5 * (r00 - r11), abs(r01))
            hi = max(0.5 * p + half_gap, 0.0)
            lo = max(0.5 * p - half_gap, 0.0)
            total += -_xlog2x(hi) - _xlog2x(lo) + _xlog2x(p)
        return total


def _weighted_entropy(r00, r11, r01abs):
    """p S(rho/p) for unnormalized 2x2 blocks, zero when p < MIN_OUTCOME_PROB."""
    p = r00 + r11
    half_gap = np.hypot(0.5 * (r00 - r11), r01abs)
    hi = np.clip(0.5 * p + half_gap, 0.0, None)
    lo = np.clip(0.5 * p - half_gap, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        term = (
            -np.where(hi > 0, hi * np.log2(hi), 0.0)
            - np.where(lo > 0, lo * np.log2(lo), 0.0)
            + np.where(p > 0, p * np.log2(p), 0.0)
        )
    return np.where(p < MIN_OUTCOME_PROB, 0.0, term)


def _conditional_entropy_grid(m: np.ndarray, theta, phi, measured: str) -> np.ndarray:
    """sum_k p_k S(rho_k) for every (theta, phi) in the broadcast grid."""
    return _Landscape(m, measured).grid(theta, phi)


def _two_qubit(rho) -> DensityMatrix:
    dm = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if dm.dim != 4:
        raise DimensionMismatchError(f"two-qubit state required, got dim {dm.dim}")
    return dm


def conditional_entropy_after_measurement(rho, angles: MeasurementAngles, measured: str = "B") -> float:
    """Average entropy of the unmeasured qubit after a projective measurement."""
    dm = _two_qubit(rho)
    return _Landscape(dm.matrix, measured).value(angles.theta, angles.phi)


def _pattern_search(f, theta: float, phi: float, step: float, tol: float) -> tuple[float, float, float]:
    best = f(theta, phi)
    moves = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    while step >= tol:
        improved = False
        for dt, dp in moves:
            val = f(theta + dt * step, phi + dp * step)
            if val < best:
                best, theta, phi = val, theta + dt * step, phi + dp * step
                improved = True
                break
        if not improved:
            step *= 0.5
    return best, theta, phi


def classical_correlation_numeric(
    rho, measured: str = "B", n_starts: int = 4
) -> tuple[float, MeasurementAngles]:
    """Maximize S(rho_other) - S(rho | {Pi_k}) over projective measurements.

    Coarse grid of 129 x 257 angles, then compass pattern search from the
    ``n_starts`` best grid points down to an angle step of 1e-8.
    """
    dm = _two_qubit(rho)
    m = dm.matrix
    if measured not in ("A", "B"):
        raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")
    s_other = vn_entropy(partial_trace(dm, measured))

    thetas = np.linspace(0.0, math.pi, GRID_THETA)
    phis = np.linspace(0.0, 2.0 * math.pi, GRID_PHI)
    land = _Landscape(m, measured)
    grid = land.grid(thetas[:, None], phis[None, :])
    order = np.argsort(grid, axis=None, kind="stable")[:n_starts]
    step = math.pi / (GRID_THETA - 1)
    f = land.value

    best = (math.inf, 0.0, 0.0)
    for flat in order:
        i, j = np.unravel_index(flat, grid.shape)
        cand = _pattern_search(f, float(thetas[i]), float(phis[j]), step, ANGLE_TOL)
        if cand[0] < best[0]:
            best = cand
    cond, th, ph = best
    return s_other - cond, MeasurementAngles.wrapped(th, ph)


def discord_numeric(rho) -> float:
    """Discord with measurement on B: mutual information minus numeric classical correlation."""
    dm = _two_qubit(rho)
    q, _ = classical_correlation_numeric(dm, "B")
    return mutual_information(dm) - q


def _conditional_entropy_d1(x: XState) -> float:
    # computational-basis measurement; vanishing denominators carry vanishing numerators
    a, b, d = max(x.a, 0.0), max(x.b, 0.0), max(x.d, 0.0)

    def term(num, other):
        return _xlog2x(num) - num * math.log2(num + other) if num > 0.0 else 0.0

    return -(term(a, b) + term(b, a) + term(d, b) + term(b, d))


def _conditional_entropy_d2(x: XState) -> float:
    # equatorial measurement, theta = pi/4
    gamma = math.sqrt((x.a - x.d) ** 2 + 4.0 * (abs(x.z) + abs(x.w)) ** 2)
    return binary_entropy(0.5 * (1.0 + gamma))


def discord_x_analytic(x: XState) -> DiscordResult:
    if not isinstance(x, XState):
        raise InvalidStateError(f"expected XState, got {type(x).__name__}")
    p0, p1 = x.marginal_populations()
    s_a = binary_entropy(p0)
    s_ab = entropy_of_spectrum(x.eigenvalues())
    mi = 2.0 * s_a - s_ab
    d1 = s_a - s_ab + _conditional_entropy_d1(x)
    d2 = s_a - s_ab + _conditional_entropy_d2(x)
    branch: Branch = "D1" if d1 <= d2 else "D2"
    disc = min(d1, d2)
    return DiscordResult(
        discord=disc,
        branch=branch,
        d1_value=d1,
        d2_value=d2,
        classical_correlation=mi - disc,
        mutual_information=mi,
    )


def entanglement_witness(x: XState) -> float:
    """max(|z| - sqrt(ad), |w| - b); the concurrence is twice its positive part."""
    return max(abs(x.z) - math.sqrt(max(x.a * x.d, 0.0)), abs(x.w) - x.b)


def concurrence_x(x: XState) -> float:
    if not isinstance(x, XState):
        raise InvalidStateError(f"expected XState, got {type(x).__name__}")
    return min(2.0 * max(0.0, entanglement_witness(x)), 1.0)


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation (bits) as a function of the two-qubit concurrence."""
    c = float(c)
    if not (-1e-12 <= c <= 1.0 + 1e-12):
        raise DomainError(f"concurrence must lie in [0, 1], got {c!r}")
    c = min(max(c, 0.0), 1.0)
    g = 0.5 * (1.0 + math.sqrt(1.0 - c * c))
    return binary_entropy(g)


def random_xstate(rng: np.random.Generator) -> XState:
    """Random valid X state: (a, 2b, d) uniform on the simplex, coherences uniform in their positivity range."""
    a, two_b, d = rng.dirichlet([1.0, 1.0, 1.0])
    b = 0.5 * two_b
    w = rng.uniform(-1.0, 1.0) * math.sqrt(a * d)
    z = rng.uniform(-1.0, 1.0) * b
    return XState(a=a, b=b, d=d, w=w, z=z)
