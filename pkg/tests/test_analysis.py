import math

import numpy as np
import pytest

from nmdiscord.analysis import (
    EventReport,
    TrajectoryRecord,
    detect_discord_birth,
    detect_events,
    find_branch_switches,
    find_discord_zero_intervals,
    find_discord_zeros,
    find_esd_intervals,
    grid_step,
    kink_diagnostics,
    record_from_xstate,
)
from nmdiscord.correlations import XState
from nmdiscord.errors import DomainError
from nmdiscord.independent import propagate_independent, vanish_times
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams

from conftest import cached_run

STRONG = ReservoirParams(1.0, 0.01)
MIXED = XState(0.3, 0.2, 0.3, 0.25, 0.15)


def independent_series(alpha2, t_max=80.0, dt=0.01, offset=0.0):
    init = BellLikeInitial(alpha2)
    n = int(round(t_max / dt))
    return [record_from_xstate(offset + k * dt, propagate_independent(init, STRONG, offset + k * dt)) for k in range(n + 1)]


def synthetic(values, branches=None, dt=0.1):
    branches = branches or ["D1"] * len(values)
    out = []
    for k, (v, br) in enumerate(zip(values, branches)):
        d1, d2 = (v, v + 1.0) if br == "D1" else (v + 1.0, v)
        out.append(TrajectoryRecord(k * dt, MIXED, v, d1, d2, 0.1, 0.1 + v, br, 0.0, 0.0, MIXED.purity()))
    return out


def test_record_invariants():
    rec = record_from_xstate(1.0, MIXED)
    assert rec.discord == pytest.approx(min(rec.d1, rec.d2), abs=1e-12)
    assert 0.0 < rec.purity <= 1.0 + 1e-12


def test_empty_series_is_rejected():
    with pytest.raises(DomainError):
        find_discord_zeros([])
    with pytest.raises(DomainError):
        grid_step([])


def test_non_uniform_grid_is_rejected():
    s = synthetic([0.1, 0.2, 0.3])
    s[2] = TrajectoryRecord(0.5, MIXED, 0.3, 0.3, 1.3, 0.1, 0.4, "D1", 0.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        find_discord_zeros(s)


def test_constant_series_has_no_events():
    s = synthetic([0.2] * 50)
    assert find_discord_zeros(s) == []
    assert find_branch_switches(s) == []


def test_isolated_zero_and_plateau():
    vals = [0.5, 0.3, 0.1, 0.0, 0.1, 0.3, 0.5] + [0.0] * 10 + [0.4, 0.5]
    s = synthetic(vals)
    assert find_discord_zeros(s) == [pytest.approx(0.3)]
    assert find_discord_zero_intervals(s) == [(pytest.approx(0.7), pytest.approx(1.6))]


def test_switch_at_cell_midpoint_and_ties_ignored():
    vals = [0.5 - 0.01 * k for k in range(10)] + [0.41 + 0.03 * k for k in range(10)]
    branches = ["D1"] * 10 + ["D2"] * 10
    s = synthetic(vals, branches)
    assert find_branch_switches(s) == [pytest.approx(0.95)]
    (diag,) = kink_diagnostics(s)
    assert diag.jump <= 1e-12 and diag.is_kink()
    # an exact tie carries no branch information
    tie = TrajectoryRecord(0.0, MIXED, 0.5, 0.5, 0.5, 0.1, 0.6, "D1", 0.0, 0.0, 0.5)
    assert find_branch_switches([tie] + synthetic([0.4] * 5, ["D2"] * 5)[1:]) == []


def test_jump_discontinuity_is_not_a_kink():
    vals = [0.5 - 0.01 * k for k in range(10)] + [0.2 - 0.01 * k for k in range(10)]
    s = synthetic(vals, ["D1"] * 10 + ["D2"] * 10)
    (diag,) = kink_diagnostics(s)
    assert diag.jump == pytest.approx(0.2, abs=1e-9)
    assert not diag.is_kink()


def test_birth_detection():
    vals = [0.0] * 5 + [0.005, 0.02, 0.03]
    assert detect_discord_birth(synthetic(vals)) == pytest.approx(0.6)
    assert detect_discord_birth(synthetic([0.0] * 10)) is None
    assert detect_discord_birth(synthetic([0.5] * 10)) is None


def test_report_round_trip():
    rep = EventReport([1.0], [(2.0, 3.0)], [4.0], [(5.0, 6.0)], [6.0], 0.5)
    assert EventReport.from_dict(rep.to_dict()) == rep


class TestIndependentRuns:
    def test_zeros_at_vanishing_times(self):
        s = independent_series(0.5)
        zeros = find_discord_zeros(s)
        tn = vanish_times(STRONG, 2)
        assert len(zeros) == 2
        for z, t in zip(zeros, tn):
            assert abs(z - t) <= 0.01
        assert find_esd_intervals(s) == []

    def test_ten_percent_has_zeros_but_no_plateaus(self):
        s = independent_series(0.1)
        tn = vanish_times(STRONG, 2)
        zeros = find_discord_zeros(s)
        assert zeros and all(min(abs(z - t) for t in tn) <= 0.01 for z in zeros)
        assert find_discord_zero_intervals(s) == []
        assert any(b - a > 1.0 for a, b in find_esd_intervals(s))

    def test_no_sudden_change(self):
        assert find_branch_switches(independent_series(1 / 3)) == []

    def test_revival(self):
        rep = detect_events(independent_series(1 / 3))
        assert len(rep.esd_intervals) == 2
        assert rep.entanglement_revival_times == [rep.esd_intervals[0][1]]

    def test_grid_phase_independence(self):
        a = detect_events(independent_series(0.5, dt=0.01))
        b = detect_events(independent_series(0.5, dt=0.01, offset=0.004))
        for za, zb in zip(a.discord_zero_times, b.discord_zero_times):
            assert abs(za - zb) <= 0.01
        assert len(a.discord_zero_times) == len(b.discord_zero_times)
        assert a.esd_intervals == b.esd_intervals == []

    def test_idempotent(self):
        s = independent_series(0.1)
        assert detect_events(s) == detect_events(s)


class TestCommonRuns:
    def test_sudden_birth_without_entanglement(self):
        res = cached_run("common", 0.0, 0.1)
        rep = detect_events(res.records)
        assert rep.discord_birth_time is not None and rep.discord_birth_time > 0
        assert max(r.concurrence for r in res.records) <= 1e-9
        t_end = res.records[-1].t
        assert rep.esd_intervals == [(0.0, pytest.approx(t_end))]

    def test_ground_state_has_no_birth(self):
        res = cached_run("common", 1.0, 0.1)
        assert detect_discord_birth(res.records) is None

    def test_sudden_changes_are_kinks(self):
        res = cached_run("common", 1 / 3, 0.1)
        switches = find_branch_switches(res.records)
        assert any(t <= 30.0 for t in switches)
        for diag in kink_diagnostics(res.records):
            assert diag.is_kink()
