"""Monte Carlo sweep over scenario x ISD x altitude x UAV position.

Per axis point, everything deterministic (geometry, antenna gain, LOS/NLOS
path-loss curves, LOS probability) is computed once; each trial then only
draws its propagation states and shadowing from streams keyed by
(master_seed, trial, sector).  Trials therefore do not depend on evaluation
order, the same trial index reuses the same draws at every axis point
(common random numbers across the sweep), and parallel execution reproduces
the sequential result exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from . import channel
from .antenna import AntennaConfig, gain
from .channel import ScenarioParams
from .errors import ConfigurationError
from .geometry import (
    DeploymentLayout,
    POSITION_OFFSETS,
    UavPosition,
    build_layout,
    link_geometry,
    uav_position,
)
from .kpi import KpiSample, RadioConfig, SUBCARRIERS_PER_RB, mw_to_db, noise_power
from .streams import trial_draws

METRICS = ("RSRP", "RSRQ", "SINR")
METRIC_UNITS = {"RSRP": "dBm", "RSRQ": "dB", "SINR": "dB"}
_METRIC_ATTRS = {"RSRP": "rsrp_dbm", "RSRQ": "rsrq_db", "SINR": "sinr_db"}

POOLED_POSITION = "pooled"

_MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class SimulationConfig:
    """Full sweep configuration; defaults reproduce the baseline parameter set."""

    scenarios: tuple[str, ...] = ("UMa", "RMa")
    isd_list: tuple[float, ...] = (500.0, 1000.0, 1500.0, 2000.0)
    altitude_list: tuple[float, ...] = (10.0, 25.0, 50.0, 100.0, 150.0, 300.0)
    position_labels: tuple[str, ...] = ("cell-center", "cell-middle", "cell-edge")
    trials: int = 200
    master_seed: int = 42
    bs_height_m: float = 30.0
    boresights_deg: tuple[float, float, float] = (0.0, 120.0, 240.0)
    fc_ghz: float = 3.5
    bandwidth_mhz: float = 20.0  # informational; the noise floor uses 12*n_rb*scs
    ssb_rbs: int = 20  # recorded for completeness, not used in the link budget
    sigma_los_uma_db: float = 4.0
    sigma_nlos_uma_db: float = 6.0
    sigma_los_rma_db: float = 4.0
    sigma_nlos_rma_db: float = 8.0
    h_e_m: float = 1.0
    h_blg_m: float = 5.0
    street_width_m: float = 20.0
    radio: RadioConfig = field(default_factory=RadioConfig)
    antenna: AntennaConfig = field(default_factory=AntennaConfig)

    def validate(self) -> None:
        if not self.scenarios:
            raise ConfigurationError("at least one scenario is required")
        for s in self.scenarios:
            if s not in channel.SCENARIOS:
                raise ConfigurationError(f"unknown scenario {s!r}; expected one of {channel.SCENARIOS}")
        if len(set(self.scenarios)) != len(self.scenarios):
            raise ConfigurationError("duplicate scenarios in configuration")
        if not self.isd_list or any(isd <= 0 for isd in self.isd_list):
            raise ConfigurationError(f"isd_list must be non-empty and positive, got {self.isd_list}")
        if not self.altitude_list or any(h <= 0 for h in self.altitude_list):
            raise ConfigurationError(
                f"altitude_list must be non-empty and positive, got {self.altitude_list}"
            )
        if not self.position_labels:
            raise ConfigurationError("at least one UAV position label is required")
        for label in self.position_labels:
            if label not in POSITION_OFFSETS:
                raise ConfigurationError(
                    f"unknown position label {label!r}; expected one of {sorted(POSITION_OFFSETS)}"
                )
        if len(set(self.position_labels)) != len(self.position_labels):
            raise ConfigurationError("duplicate position labels in configuration")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.master_seed <= _MAX_SEED:
            raise ConfigurationError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.bs_height_m <= 0:
            raise ConfigurationError(f"bs_height_m must be positive, got {self.bs_height_m}")
        if self.fc_ghz <= 0:
            raise ConfigurationError(f"fc_ghz must be positive, got {self.fc_ghz}")
        if self.bandwidth_mhz <= 0:
            raise ConfigurationError(f"bandwidth_mhz must be positive, got {self.bandwidth_mhz}")
        if self.ssb_rbs < 0:
            raise ConfigurationError(f"ssb_rbs must be non-negative, got {self.ssb_rbs}")
        for scenario in self.scenarios:
            self.scenario_params(scenario)  # raises ConfigurationError on bad values

    def scenario_params(self, scenario: str) -> ScenarioParams:
        if scenario == channel.UMA:
            return ScenarioParams(
                scenario=scenario,
                fc_ghz=self.fc_ghz,
                h_e_m=self.h_e_m,
                h_blg_m=self.h_blg_m,
                street_width_m=self.street_width_m,
                sigma_los_db=self.sigma_los_uma_db,
                sigma_nlos_db=self.sigma_nlos_uma_db,
            )
        if scenario == channel.RMA:
            return ScenarioParams(
                scenario=scenario,
                fc_ghz=self.fc_ghz,
                h_e_m=self.h_e_m,
                h_blg_m=self.h_blg_m,
                street_width_m=self.street_width_m,
                sigma_los_db=self.sigma_los_rma_db,
                sigma_nlos_db=self.sigma_nlos_rma_db,
            )
        raise ConfigurationError(f"unknown scenario {scenario!r}")


@dataclass(frozen=True)
class KpiStats:
    """Aggregated dB-domain statistics of one metric at one axis point."""

    metric: str
    unit: str
    mean: float
    median: float
    p05: float
    p95: float
    n: int


@dataclass(frozen=True)
class SweepRow:
    """KPI statistics at one (scenario, isd, altitude, position) axis point."""

    scenario: str
    isd_m: float
    altitude_m: float
    position: str
    stats: dict[str, KpiStats]


@dataclass(frozen=True)
class SweepResult:
    """All rows of a sweep, plus the seed that reproduces them."""

    rows: tuple[SweepRow, ...]
    master_seed: int
    trials: int
    samples: dict[tuple[str, float, float, str], list[KpiSample]] | None = None

    def stats_at(self, scenario: str, isd_m: float, altitude_m: float, position: str) -> dict[str, KpiStats]:
        for row in self.rows:
            if (row.scenario, row.isd_m, row.altitude_m, row.position) == (
                scenario, isd_m, altitude_m, position,
            ):
                return row.stats
        raise KeyError((scenario, isd_m, altitude_m, position))


@dataclass(frozen=True)
class LinkConditions:
    """Deterministic per-sector link state shared by all trials at one axis point."""

    gain_dbi: np.ndarray
    loss_los_db: np.ndarray
    loss_nlos_db: np.ndarray
    p_los: np.ndarray
    d2d_m: np.ndarray
    d3d_m: np.ndarray
    n_sectors: int


def link_conditions(
    layout: DeploymentLayout, uav: UavPosition, antenna_cfg: AntennaConfig, params: ScenarioParams
) -> LinkConditions:
    """Geometry, antenna gain, path-loss branches, and LOS probability per sector."""
    n = len(layout.sectors)
    gains = np.empty(n)
    loss_los = np.empty(n)
    loss_nlos = np.empty(n)
    p_los = np.empty(n)
    d2d = np.empty(n)
    d3d = np.empty(n)
    h_b = layout.bs_height_m
    for i, sector in enumerate(layout.sectors):
        link = link_geometry(layout, uav, sector)
        gains[i] = gain(link, sector.boresight_deg, antenna_cfg)
        loss_los[i] = channel.pathloss_los(params, link.d2d_m, link.d3d_m, h_b, uav.h)
        loss_nlos[i] = channel.pathloss_nlos(params, link.d2d_m, link.d3d_m, h_b, uav.h)
        p_los[i] = channel.los_probability(params, link.d2d_m, uav.h)
        d2d[i] = link.d2d_m
        d3d[i] = link.d3d_m
    return LinkConditions(
        gain_dbi=gains,
        loss_los_db=loss_los,
        loss_nlos_db=loss_nlos,
        p_los=p_los,
        d2d_m=d2d,
        d3d_m=d3d,
        n_sectors=n,
    )


def _trial_sample(
    cond: LinkConditions,
    radio: RadioConfig,
    params: ScenarioParams,
    noise_dbm: float,
    master_seed: int,
    trial_index: int,
) -> KpiSample:
    uniforms, normals = trial_draws(master_seed, trial_index, cond.n_sectors)
    is_los = uniforms < cond.p_los
    sigma = np.where(is_los, params.sigma_los_db, params.sigma_nlos_db)
    loss = np.where(is_los, cond.loss_los_db, cond.loss_nlos_db) + sigma * normals
    prx_dbm = radio.p_tx_dbm + cond.gain_dbi - loss - radio.l_impl_db
    rsrp_offset = 10.0 * np.log10(SUBCARRIERS_PER_RB * radio.n_rb)
    rsrp_dbm = prx_dbm - rsrp_offset

    serving = int(np.argmax(rsrp_dbm))  # first max wins: lowest sector id on ties
    prx_mw = 10.0 ** (prx_dbm / 10.0)
    others = prx_mw.copy()
    others[serving] = 0.0
    interference_mw = radio.rho * float(np.sum(others))
    noise_mw = 10.0 ** (noise_dbm / 10.0)
    serving_mw = float(prx_mw[serving])

    sinr_db = 10.0 * np.log10(serving_mw / (interference_mw + noise_mw))
    rssi_dbm = 10.0 * np.log10(serving_mw + interference_mw + noise_mw)
    rsrq_db = rsrp_dbm[serving] - rssi_dbm + 10.0 * np.log10(radio.n_rb)
    return KpiSample(
        serving_sector=serving,
        rsrp_dbm=float(rsrp_dbm[serving]),
        rsrq_db=float(rsrq_db),
        sinr_db=float(sinr_db),
        interference_dbm=mw_to_db(interference_mw),
        rssi_dbm=float(rssi_dbm),
        noise_dbm=noise_dbm,
    )


def run_trial(
    layout: DeploymentLayout,
    uav: UavPosition,
    radio: RadioConfig,
    antenna_cfg: AntennaConfig,
    params: ScenarioParams,
    master_seed: int,
    trial_index: int,
) -> KpiSample:
    """One Monte Carlo trial: per-sector draws, budgets, serving-sector KPIs."""
    cond = link_conditions(layout, uav, antenna_cfg, params)
    return _trial_sample(cond, radio, params, noise_power(radio), master_seed, trial_index)


def aggregate(samples: Sequence[KpiSample], metric: str) -> KpiStats:
    """dB-domain mean/median/percentiles of one metric over the trial samples."""
    if not samples:
        raise ValueError("samples must be non-empty")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    attr = _METRIC_ATTRS[metric]
    values = np.array([getattr(s, attr) for s in samples])
    p05, median, p95 = np.percentile(values, [5.0, 50.0, 95.0])
    return KpiStats(
        metric=metric,
        unit=METRIC_UNITS[metric],
        mean=float(np.mean(values)),
        median=float(median),
        p05=float(p05),
        p95=float(p95),
        n=len(samples),
    )


def _axis_task(
    config: SimulationConfig, axis: tuple[str, float, float, str]
) -> list[KpiSample]:
    scenario, isd_m, altitude_m, position = axis
    layout = build_layout(isd_m, config.bs_height_m, config.boresights_deg)
    uav = uav_position(position, isd_m, altitude_m)
    params = config.scenario_params(scenario)
    cond = link_conditions(layout, uav, config.antenna, params)
    noise_dbm = noise_power(config.radio)
    return [
        _trial_sample(cond, config.radio, params, noise_dbm, config.master_seed, trial)
        for trial in range(config.trials)
    ]


def _row_sort_key(row: SweepRow) -> tuple:
    return (row.scenario, row.isd_m, row.altitude_m, row.position)


def run_sweep(
    config: SimulationConfig, keep_samples: bool = False, workers: int | None = None
) -> SweepResult:
    """Run the full sweep and aggregate per-axis-point KPI statistics.

    Output is a pure function of ``config``: axis points may be evaluated in
    any order or on ``workers`` processes without changing a single bit.
    Besides the per-position rows, a pooled row per (scenario, isd, altitude)
    aggregates the samples of all configured positions.
    """
    config.validate()
    axes = [
        (scenario, isd_m, altitude_m, position)
        for scenario in config.scenarios
        for isd_m in config.isd_list
        for altitude_m in config.altitude_list
        for position in config.position_labels
    ]
    task = partial(_axis_task, config)
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            sample_lists = list(executor.map(task, axes, chunksize=8))
    else:
        sample_lists = [task(axis) for axis in axes]
    samples_by_axis = dict(zip(axes, sample_lists))

    rows = []
    for axis, samples in samples_by_axis.items():
        scenario, isd_m, altitude_m, position = axis
        stats = {metric: aggregate(samples, metric) for metric in METRICS}
        rows.append(SweepRow(scenario, isd_m, altitude_m, position, stats))
    for scenario in config.scenarios:
        for isd_m in config.isd_list:
            for altitude_m in config.altitude_list:
                pooled: list[KpiSample] = []
                for position in config.position_labels:
                    pooled.extend(samples_by_axis[(scenario, isd_m, altitude_m, position)])
                stats = {metric: aggregate(pooled, metric) for metric in METRICS}
                rows.append(SweepRow(scenario, isd_m, altitude_m, POOLED_POSITION, stats))
    rows.sort(key=_row_sort_key)
    return SweepResult(
        rows=tuple(rows),
        master_seed=config.master_seed,
        trials=config.trials,
        samples=samples_by_axis if keep_samples else None,
    )


@dataclass(frozen=True)
class TrendCheck:
    """Outcome of one qualitative trend check; ``passed`` is None when the
    sweep grid lacks the points the check needs."""

    name: str
    passed: bool | None
    detail: str


_TREND_POSITION = "cell-middle"
_TOL = 1e-9


def _series(result: SweepResult, scenario: str, altitude: float, metric: str,
            isds: Sequence[float], stat: str = "mean") -> list[float]:
    return [
        getattr(result.stats_at(scenario, isd, altitude, _TREND_POSITION)[metric], stat)
        for isd in isds
    ]


def trend_checks(result: SweepResult) -> list[TrendCheck]:
    """Evaluate the four monotone-trend checks at the cell-middle position."""
    rows = [r for r in result.rows if r.position == _TREND_POSITION]
    scenarios = sorted({r.scenario for r in rows})
    isds = sorted({r.isd_m for r in rows})
    altitudes = sorted({r.altitude_m for r in rows})
    checks: list[TrendCheck] = []

    # (a) mean RSRP never improves as ISD grows, at every altitude
    if len(isds) >= 2 and rows:
        failures = []
        for scenario in scenarios:
            for altitude in altitudes:
                seq = _series(result, scenario, altitude, "RSRP", isds)
                if any(b > a + _TOL for a, b in zip(seq, seq[1:])):
                    failures.append(f"{scenario} h={altitude:g}m: {['%.2f' % v for v in seq]}")
        checks.append(TrendCheck(
            "rsrp-vs-isd-nonincreasing",
            not failures,
            "mean RSRP non-increasing with ISD at every altitude"
            + ("" if not failures else "; violated at " + "; ".join(failures)),
        ))
    else:
        checks.append(TrendCheck("rsrp-vs-isd-nonincreasing", None, "needs >= 2 ISDs"))

    # (b) mean SINR and RSRQ never degrade as ISD grows, at altitudes >= 50 m
    high_alts = [a for a in altitudes if a >= 50.0]
    if len(isds) >= 2 and high_alts:
        failures = []
        for scenario in scenarios:
            for altitude in high_alts:
                for metric in ("SINR", "RSRQ"):
                    seq = _series(result, scenario, altitude, metric, isds)
                    if any(b < a - _TOL for a, b in zip(seq, seq[1:])):
                        failures.append(f"{scenario} {metric} h={altitude:g}m")
        checks.append(TrendCheck(
            "sinr-rsrq-vs-isd-nondecreasing",
            not failures,
            "mean SINR and RSRQ non-decreasing with ISD at altitudes >= 50 m"
            + ("" if not failures else "; violated at " + "; ".join(failures)),
        ))
    else:
        checks.append(TrendCheck("sinr-rsrq-vs-isd-nondecreasing", None,
                                 "needs >= 2 ISDs and altitudes >= 50 m"))

    # (c) mean SINR never improves from 50 m up to 300 m at ISD 500 m
    c_alts = [a for a in altitudes if 50.0 <= a <= 300.0]
    if 500.0 in isds and len(c_alts) >= 2:
        failures = []
        for scenario in scenarios:
            seq = [result.stats_at(scenario, 500.0, a, _TREND_POSITION)["SINR"].mean for a in c_alts]
            if any(b > a + _TOL for a, b in zip(seq, seq[1:])):
                failures.append(f"{scenario}: {['%.2f' % v for v in seq]}")
        checks.append(TrendCheck(
            "sinr-vs-altitude-nonincreasing-isd500",
            not failures,
            "mean SINR non-increasing from 50 m to 300 m at ISD 500 m"
            + ("" if not failures else "; violated at " + "; ".join(failures)),
        ))
    else:
        checks.append(TrendCheck("sinr-vs-altitude-nonincreasing-isd500", None,
                                 "needs ISD 500 m and altitudes in [50, 300] m"))

    # (d) median RSRP/RSRQ sink from their best-altitude values to 300 m, near
    # the expected absolute levels, in the urban scenario at some ISD
    if "UMa" in scenarios and 300.0 in altitudes and len(altitudes) >= 2:
        details = []
        passed = False
        for isd in isds:
            rsrp_med = {a: result.stats_at("UMa", isd, a, _TREND_POSITION)["RSRP"].median
                        for a in altitudes}
            rsrq_med = {a: result.stats_at("UMa", isd, a, _TREND_POSITION)["RSRQ"].median
                        for a in altitudes}
            best_rsrp = max(rsrp_med.values())
            best_rsrq = max(rsrq_med.values())
            ok = (
                best_rsrp - rsrp_med[300.0] >= 3.0
                and best_rsrq - rsrq_med[300.0] >= 2.0
                and abs(best_rsrp - (-70.0)) <= 8.0
                and abs(rsrp_med[300.0] - (-75.0)) <= 8.0
                and abs(best_rsrq - (-12.0)) <= 8.0
                and abs(rsrq_med[300.0] - (-15.0)) <= 8.0
            )
            details.append(
                f"ISD={isd:g}m RSRP {best_rsrp:.1f}->{rsrp_med[300.0]:.1f} dBm, "
                f"RSRQ {best_rsrq:.1f}->{rsrq_med[300.0]:.1f} dB{' (ok)' if ok else ''}"
            )
            passed = passed or ok
        checks.append(TrendCheck(
            "uma-median-decoupling-anchors",
            passed,
            "UMa median RSRP/RSRQ drop >= 3/2 dB to 300 m near -70/-75 dBm and "
            "-12/-15 dB anchors at some ISD: " + "; ".join(details),
        ))
    else:
        checks.append(TrendCheck("uma-median-decoupling-anchors", None,
                                 "needs UMa rows and a 300 m altitude"))
    return checks
