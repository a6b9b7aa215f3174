"""Trajectory records and event detection: discord zeros, sudden changes, ESD, sudden birth."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from nmdiscord.correlations import (
    XState,
    concurrence_x,
    discord_x_analytic,
    entanglement_witness,
    eof_from_concurrence,
)
from nmdiscord.errors import DomainError

DISCORD_ZERO_TOL = 1e-6
CONCURRENCE_TOL = 1e-9
BIRTH_THRESHOLD = 0.01
# |d1 - d2| below this is a tie and carries no branch information
BRANCH_TIE_TOL = 1e-10
KINK_MAX_JUMP = 1e-4
KINK_NOISE_FACTOR = 5.0
ISOLATED_RUN_MAX = 3


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    x: XState
    discord: float
    d1: float
    d2: float
    classical_corr: float
    mutual_info: float
    branch: str
    concurrence: float
    eof: float
    purity: float

    @property
    def witness(self) -> float:
        return entanglement_witness(self.x)


def record_from_xstate(t: float, x: XState) -> TrajectoryRecord:
    res = discord_x_analytic(x)
    c = concurrence_x(x)
    return TrajectoryRecord(
        t=t,
        x=x,
        discord=res.discord,
        d1=res.d1_value,
        d2=res.d2_value,
        classical_corr=res.classical_correlation,
        mutual_info=res.mutual_information,
        branch=res.branch,
        concurrence=c,
        eof=eof_from_concurrence(c),
        purity=x.purity(),
    )


@dataclass
class EventReport:
    discord_zero_times: list[float] = field(default_factory=list)
    discord_zero_intervals: list[tuple[float, float]] = field(default_factory=list)
    branch_switch_times: list[float] = field(default_factory=list)
    esd_intervals: list[tuple[float, float]] = field(default_factory=list)
    entanglement_revival_times: list[float] = field(default_factory=list)
    discord_birth_time: Optional[float] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["discord_zero_intervals"] = [list(iv) for iv in self.discord_zero_intervals]
        d["esd_intervals"] = [list(iv) for iv in self.esd_intervals]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EventReport":
        return cls(
            discord_zero_times=list(d.get("discord_zero_times", [])),
            discord_zero_intervals=[tuple(iv) for iv in d.get("discord_zero_intervals", [])],
            branch_switch_times=list(d.get("branch_switch_times", [])),
            esd_intervals=[tuple(iv) for iv in d.get("esd_intervals", [])],
            entanglement_revival_times=list(d.get("entanglement_revival_times", [])),
            discord_birth_time=d.get("discord_birth_time"),
        )


def grid_step(series: Sequence[TrajectoryRecord]) -> float:
    """Uniform sampling step of ``series``; raises DomainError when empty or non-uniform."""
    if len(series) == 0:
        raise DomainError("empty series")
    if len(series) == 1:
        return 0.0
    t = np.array([r.t for r in series])
    steps = np.diff(t)
    h = float(np.mean(steps))
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-6 * max(h, 1e-300):
        raise DomainError("series is not sampled on a uniform increasing grid")
    return h


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive index ranges of maximal True runs."""
    runs = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def _is_valley(values: np.ndarray) -> bool:
    k = int(np.argmin(values))
    left, right = values[: k + 1], values[k:]
    return bool(np.all(np.diff(left) < 0) and np.all(np.diff(right) > 0))


def _classify_zero_runs(series, tol):
    grid_step(series)
    t = np.array([r.t for r in series])
    disc = np.array([r.discord for r in series])
    zeros, intervals = [], []
    for i0, i1 in _runs(disc <= tol):
        seg = disc[i0 : i1 + 1]
        # a tangential touch is a strict valley however wide; a plateau is not
        if (i1 - i0 + 1) <= ISOLATED_RUN_MAX or _is_valley(seg):
            zeros.append(float(t[i0 + int(np.argmin(seg))]))
        else:
            intervals.append((float(t[i0]), float(t[i1])))
    return zeros, intervals


def find_discord_zeros(series: Sequence[TrajectoryRecord], tol: float = DISCORD_ZERO_TOL) -> list[float]:
    """Times of isolated discord zeros (sub-``tol`` dips that rise again)."""
    return _classify_zero_runs(series, tol)[0]


def find_discord_zero_intervals(
    series: Sequence[TrajectoryRecord], tol: float = DISCORD_ZERO_TOL
) -> list[tuple[float, float]]:
    """Sustained sub-``tol`` plateaus of the discord."""
    return _classify_zero_runs(series, tol)[1]


def _switch_index_pairs(series, tie_tol):
    decided = [
        (i, r.branch) for i, r in enumerate(series) if abs(r.d1 - r.d2) > tie_tol
    ]
    pairs = []
    for (i, bi), (j, bj) in zip(decided, decided[1:]):
        if bi != bj:
            pairs.append((i, j))
    return pairs


def find_branch_switches(series: Sequence[TrajectoryRecord], tie_tol: float = BRANCH_TIE_TOL) -> list[float]:
    """Midpoints of the grid cells where the minimizing branch (D1/D2) flips.

    Records whose two branches agree within ``tie_tol`` are skipped, so exact
    ties (pure initial states, the product ground state) do not count.
    """
    grid_step(series)
    return [0.5 * (series[i].t + series[j].t) for i, j in _switch_index_pairs(series, tie_tol)]


@dataclass(frozen=True)
class KinkDiagnostic:
    time: float
    jump: float
    left_slope: float
    right_slope: float
    noise: float

    @property
    def slope_change(self) -> float:
        return abs(self.right_slope - self.left_slope)

    def is_kink(self, max_jump: float = KINK_MAX_JUMP, factor: float = KINK_NOISE_FACTOR) -> bool:
        if not math.isfinite(self.noise):
            return False
        return self.jump <= max_jump and self.slope_change > factor * self.noise


def kink_diagnostics(series: Sequence[TrajectoryRecord], tie_tol: float = BRANCH_TIE_TOL) -> list[KinkDiagnostic]:
    """Continuity and slope-jump measurements at every branch switch.

    One-sided slopes come from the difference quotients adjacent to the
    switching cell; the noise is the larger change between consecutive
    quotients on either side.  The jump is how far the increment across the
    switching cell falls outside the range the two slopes allow; a genuine
    discontinuity of size J shifts it by J.  Switches too close to the series ends get
    NaN noise.
    """
    h = grid_step(series)
    disc = np.array([r.discord for r in series])
    n = len(series)
    out = []
    for i, j in _switch_index_pairs(series, tie_tol):
        t_star = 0.5 * (series[i].t + series[j].t)
        if i < 2 or j + 2 >= n:
            out.append(KinkDiagnostic(t_star, math.nan, math.nan, math.nan, math.nan))
            continue
        ql1 = (disc[i] - disc[i - 1]) / h
        ql2 = (disc[i - 1] - disc[i - 2]) / h
        qr1 = (disc[j + 1] - disc[j]) / h
        qr2 = (disc[j + 2] - disc[j + 1]) / h
        # a continuous curve with a kink in the cell rises by between ql1*span and qr1*span
        span = series[j].t - series[i].t
        incr = disc[j] - disc[i]
        lo, hi = sorted((ql1 * span, qr1 * span))
        jump = max(lo - incr, incr - hi, 0.0)
        out.append(
            KinkDiagnostic(
                time=t_star,
                jump=float(jump),
                left_slope=float(ql1),
                right_slope=float(qr1),
                noise=float(max(abs(ql1 - ql2), abs(qr2 - qr1))),
            )
        )
    return out


def find_esd_intervals(
    series: Sequence[TrajectoryRecord], tol: float = CONCURRENCE_TOL
) -> list[tuple[float, float]]:
    """Maximal intervals (longer than two grid steps) of vanishing concurrence.

    A run of sub-``tol`` concurrence only counts as sudden death when the
    concurrence is genuinely clamped to zero somewhere inside it, i.e. the
    entanglement witness max(|z| - sqrt(ad), |w| - b) drops below -tol.
    Tangential touches of zero, however flat, are not sudden death.
    """
    h = grid_step(series)
    t = np.array([r.t for r in series])
    conc = np.array([r.concurrence for r in series])
    wit = np.array([r.witness for r in series])
    out = []
    for i0, i1 in _runs(conc <= tol):
        if t[i1] - t[i0] <= 2.0 * h * (1.0 + 1e-9):
            continue
        if np.min(wit[i0 : i1 + 1]) < -tol:
            out.append((float(t[i0]), float(t[i1])))
    return out


def revival_times(series: Sequence[TrajectoryRecord], intervals) -> list[float]:
    """Right endpoints of ESD intervals that are followed by entanglement."""
    t_end = series[-1].t
    return [iv[1] for iv in intervals if iv[1] < t_end]


def detect_discord_birth(
    series: Sequence[TrajectoryRecord], threshold: float = BIRTH_THRESHOLD
) -> Optional[float]:
    """First time discord exceeds ``threshold`` for an initially (nearly) discord-free state.

    Returns None when it never does, or when the initial discord is already
    above the threshold (birth is then not applicable).
    """
    grid_step(series)
    if series[0].discord >= threshold:
        return None
    for r in series:
        if r.discord > threshold:
            return r.t
    return None


def detect_events(
    series: Sequence[TrajectoryRecord],
    zero_tol: float = DISCORD_ZERO_TOL,
    concurrence_tol: float = CONCURRENCE_TOL,
    birth_threshold: float = BIRTH_THRESHOLD,
) -> EventReport:
    zeros, zero_ivs = _classify_zero_runs(series, zero_tol)
    esd = find_esd_intervals(series, concurrence_tol)
    return EventReport(
        discord_zero_times=zeros,
        discord_zero_intervals=zero_ivs,
        branch_switch_times=find_branch_switches(series),
        esd_intervals=esd,
        entanglement_revival_times=revival_times(series, esd),
        discord_birth_time=detect_discord_birth(series, birth_threshold),
    )
