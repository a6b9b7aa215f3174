"""Run configuration, trajectory assembly and flat-file export.

Times are in units of 1/gamma0 and rates in units of gamma0 (gamma0 = 1).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional

from nmdiscord.analysis import EventReport, TrajectoryRecord, detect_events, record_from_xstate
from nmdiscord.common import CommonTrajectory, IntegratorConfig, propagate_common
from nmdiscord.correlations import XState
from nmdiscord.errors import DomainError
from nmdiscord.independent import propagate_independent
from nmdiscord.reservoir import BellLikeInitial, ReservoirParams

COLUMNS = (
    "t", "a", "b", "d", "w", "z",
    "mutual_info", "classical_corr", "d1", "d2", "discord", "branch",
    "concurrence", "eof", "purity",
)
DEFAULT_DT_INDEPENDENT = 0.01
DEFAULT_DT_COMMON = 0.005


class ConfigError(DomainError):
    """Invalid run configuration (CLI usage error)."""


@dataclass(frozen=True)
class RunConfig:
    env: str
    alpha2: float
    lambda_over_gamma0: float
    t_max_gamma0: float = 50.0
    dt_gamma0: Optional[float] = None
    output_path: Optional[str] = None
    format: str = "csv"
    events: bool = False
    record_every: int = 1

    def __post_init__(self):
        if self.env not in ("independent", "common"):
            raise ConfigError(f"env must be 'independent' or 'common', got {self.env!r}")
        if not (0.0 <= self.alpha2 <= 1.0):
            raise ConfigError(f"alpha2 must lie in [0, 1], got {self.alpha2!r}")
        if not (self.lambda_over_gamma0 > 0.0 and math.isfinite(self.lambda_over_gamma0)):
            raise ConfigError(f"lambda must be positive, got {self.lambda_over_gamma0!r}")
        if not (self.t_max_gamma0 > 0.0 and math.isfinite(self.t_max_gamma0)):
            raise ConfigError(f"t-max must be positive, got {self.t_max_gamma0!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.record_every < 1:
            raise ConfigError("record-every must be >= 1")
        if self.dt_gamma0 is not None and not self.dt_gamma0 > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt_gamma0!r}")
        if self.env == "common" and self.dt_gamma0 is not None:
            limit = IntegratorConfig.max_dt(self.reservoir)
            if self.dt_gamma0 > limit * (1.0 + 1e-12):
                raise ConfigError(
                    f"dt = {self.dt_gamma0} exceeds the common-reservoir bound {limit:.6g} for this lambda"
                )

    @property
    def reservoir(self) -> ReservoirParams:
        return ReservoirParams(gamma0=1.0, lam=self.lambda_over_gamma0)

    @property
    def dt(self) -> float:
        if self.dt_gamma0 is not None:
            return self.dt_gamma0
        if self.env == "independent":
            return DEFAULT_DT_INDEPENDENT
        return min(DEFAULT_DT_COMMON, IntegratorConfig.max_dt(self.reservoir))

    def echo(self) -> dict:
        d = asdict(self)
        d["dt_gamma0"] = self.dt
        return d


@dataclass
class RunResult:
    config: RunConfig
    records: list[TrajectoryRecord]
    events: Optional[EventReport] = None
    health: Optional[CommonTrajectory] = None


def run_trajectory(cfg: RunConfig) -> RunResult:
    init = BellLikeInitial(cfg.alpha2)
    r = cfg.reservoir
    icfg = IntegratorConfig(dt=cfg.dt, t_max=cfg.t_max_gamma0, record_every=cfg.record_every)
    health = None
    if cfg.env == "independent":
        times = [k * icfg.dt for k in range(0, icfg.n_steps + 1, icfg.record_every)]
        states = [propagate_independent(init, r, t) for t in times]
    else:
        health = propagate_common(init, r, icfg)
        times, states = health.times, health.states
    records = [record_from_xstate(t, x) for t, x in zip(times, states)]
    events = detect_events(records) if cfg.events else None
    return RunResult(cfg, records, events, health)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def record_row(rec: TrajectoryRecord) -> list:
    x = rec.x
    nums = (
        rec.t, x.a, x.b, x.d, x.w, x.z,
        rec.mutual_info, rec.classical_corr, rec.d1, rec.d2, rec.discord,
    )
    tail = (rec.concurrence, rec.eof, rec.purity)
    return [_fmt(v) for v in nums] + [rec.branch] + [_fmt(v) for v in tail]


def events_path_for(path: Path) -> Path:
    return path.with_name(path.stem + ".events.json")


def write_csv(result: RunResult, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for rec in result.records:
            writer.writerow(record_row(rec))
    if result.events is not None:
        write_events(result.events, events_path_for(path))


def _json_value(cell: str):
    return cell if cell in ("D1", "D2") else float(cell)


def write_json(result: RunResult, path: Path) -> None:
    doc = {
        "config": result.config.echo(),
        "columns": list(COLUMNS),
        "data": [[_json_value(c) for c in record_row(rec)] for rec in result.records],
    }
    if result.events is not None:
        doc["events"] = result.events.to_dict()
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_events(report: EventReport, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=1)
        fh.write("\n")


def write_result(result: RunResult, path: Path) -> None:
    path = Path(path)
    if result.config.format == "json":
        write_json(result, path)
    else:
        write_csv(result, path)


def _record_from_cells(cells: dict) -> TrajectoryRecord:
    f = {k: float(v) for k, v in cells.items() if k != "branch"}
    x = XState(a=f["a"], b=f["b"], d=f["d"], w=f["w"], z=f["z"])
    return TrajectoryRecord(
        t=f["t"], x=x, discord=f["discord"], d1=f["d1"], d2=f["d2"],
        classical_corr=f["classical_corr"], mutual_info=f["mutual_info"],
        branch=cells["branch"], concurrence=f["concurrence"], eof=f["eof"], purity=f["purity"],
    )


def read_records(path: Path) -> list[TrajectoryRecord]:
    """Load a trajectory written by :func:`write_result` (CSV or JSON)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        with open(path) as fh:
            doc = json.load(fh)
        cols = doc["columns"]
        rows = [dict(zip(cols, row)) for row in doc["data"]]
    else:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    missing = set(COLUMNS) - set(rows[0] if rows else COLUMNS)
    if missing:
        raise ConfigError(f"{path} lacks columns {sorted(missing)}")
    return [_record_from_cells(r) for r in rows]


def with_value(base: RunConfig, param: str, value: float, output_path: str) -> RunConfig:
    if param == "alpha2":
        return replace(base, alpha2=value, output_path=output_path)
    if param in ("lambda", "lambda_over_gamma0"):
        return replace(base, lambda_over_gamma0=value, output_path=output_path)
    raise ConfigError(f"cannot sweep {param!r}; choose alpha2 or lambda")
