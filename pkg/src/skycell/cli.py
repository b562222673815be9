"""Command-line front end: configuration, sweep execution, CSV/summary output.

Configuration is a flat ``key = value`` file ('#' starts a comment); every
simulation parameter is reachable by key, and command-line flags override
file values last-wins.  The CSV output is plot-ready and byte-identical
across runs with the same configuration and seed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, IO

from .engine import METRICS, SimulationConfig, SweepResult, run_sweep, trend_checks
from .errors import ConfigurationError, SimulationError
from .kpi import RadioConfig
from .antenna import AntennaConfig

CSV_COLUMNS = (
    "scenario", "isd_m", "altitude_m", "position", "metric", "unit",
    "mean", "median", "p05", "p95", "n_trials", "master_seed",
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4

_SCENARIO_CHOICES = {"uma": ("UMa",), "rma": ("RMa",), "both": ("UMa", "RMa")}


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ConfigurationError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(",") if tok.strip() != "")


def _parse_scenario(text: str) -> tuple[str, ...]:
    key = text.strip().lower()
    if key not in _SCENARIO_CHOICES:
        raise ConfigurationError(f"scenario must be uma, rma, or both, got {text!r}")
    return _SCENARIO_CHOICES[key]


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigurationError(f"expected a number, got {text!r}") from exc


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigurationError(f"expected an integer, got {text!r}") from exc


#: key -> parser for the flat configuration file; one key per simulation symbol
CONFIG_PARSERS: dict[str, Callable[[str], object]] = {
    "scenario": _parse_scenario,
    "fc_ghz": _parse_float,
    "bandwidth_mhz": _parse_float,
    "scs_khz": _parse_float,
    "n_rb": _parse_int,
    "ssb_rbs": _parse_int,
    "p_tx_dbm": _parse_float,
    "noise_figure_db": _parse_float,
    "l_impl_db": _parse_float,
    "g_max_dbi": _parse_float,
    "phi_3db_deg": _parse_float,
    "theta_3db_deg": _parse_float,
    "tilt_deg": _parse_float,
    "sla_v_db": _parse_float,
    "a_m_db": _parse_float,
    "boresights_deg": _parse_float_list,
    "bs_height_m": _parse_float,
    "isd_m": _parse_float_list,
    "altitudes_m": _parse_float_list,
    "positions": _parse_str_list,
    "trials": _parse_int,
    "master_seed": _parse_int,
    "sigma_los_uma_db": _parse_float,
    "sigma_nlos_uma_db": _parse_float,
    "sigma_los_rma_db": _parse_float,
    "sigma_nlos_rma_db": _parse_float,
    "rho": _parse_float,
    "h_e_m": _parse_float,
    "h_blg_m": _parse_float,
    "street_width_m": _parse_float,
}


def _default_values() -> dict[str, object]:
    cfg = SimulationConfig()
    return {
        "scenario": cfg.scenarios,
        "fc_ghz": cfg.fc_ghz,
        "bandwidth_mhz": cfg.bandwidth_mhz,
        "scs_khz": cfg.radio.scs_hz / 1e3,
        "n_rb": cfg.radio.n_rb,
        "ssb_rbs": cfg.ssb_rbs,
        "p_tx_dbm": cfg.radio.p_tx_dbm,
        "noise_figure_db": cfg.radio.noise_figure_db,
        "l_impl_db": cfg.radio.l_impl_db,
        "g_max_dbi": cfg.antenna.g_max_dbi,
        "phi_3db_deg": cfg.antenna.phi_3db_deg,
        "theta_3db_deg": cfg.antenna.theta_3db_deg,
        "tilt_deg": cfg.antenna.tilt_deg,
        "sla_v_db": cfg.antenna.sla_v_db,
        "a_m_db": cfg.antenna.a_m_db,
        "boresights_deg": cfg.boresights_deg,
        "bs_height_m": cfg.bs_height_m,
        "isd_m": cfg.isd_list,
        "altitudes_m": cfg.altitude_list,
        "positions": cfg.position_labels,
        "trials": cfg.trials,
        "master_seed": cfg.master_seed,
        "sigma_los_uma_db": cfg.sigma_los_uma_db,
        "sigma_nlos_uma_db": cfg.sigma_nlos_uma_db,
        "sigma_los_rma_db": cfg.sigma_los_rma_db,
        "sigma_nlos_rma_db": cfg.sigma_nlos_rma_db,
        "rho": cfg.radio.rho,
        "h_e_m": cfg.h_e_m,
        "h_blg_m": cfg.h_blg_m,
        "street_width_m": cfg.street_width_m,
    }


def load_config_file(path: str) -> dict[str, object]:
    """Parse a flat key=value configuration file into typed values."""
    values: dict[str, object] = {}
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read configuration file {path!r}: {exc}") from exc
    with handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"malformed line (expected key = value) at {path}:{lineno}")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in CONFIG_PARSERS:
                raise ConfigurationError(f"unknown configuration key {key!r} at {path}:{lineno}")
            try:
                values[key] = CONFIG_PARSERS[key](text.strip())
            except ConfigurationError as exc:
                raise ConfigurationError(f"{exc} (key {key!r} at {path}:{lineno})") from exc
    return values


def _config_from_values(values: dict[str, object]) -> SimulationConfig:
    radio = RadioConfig(
        p_tx_dbm=values["p_tx_dbm"],
        l_impl_db=values["l_impl_db"],
        n_rb=values["n_rb"],
        scs_hz=values["scs_khz"] * 1e3,
        noise_figure_db=values["noise_figure_db"],
        rho=values["rho"],
    )
    antenna = AntennaConfig(
        g_max_dbi=values["g_max_dbi"],
        tilt_deg=values["tilt_deg"],
        theta_3db_deg=values["theta_3db_deg"],
        phi_3db_deg=values["phi_3db_deg"],
        sla_v_db=values["sla_v_db"],
        a_m_db=values["a_m_db"],
    )
    config = SimulationConfig(
        scenarios=tuple(values["scenario"]),
        isd_list=tuple(values["isd_m"]),
        altitude_list=tuple(values["altitudes_m"]),
        position_labels=tuple(values["positions"]),
        trials=values["trials"],
        master_seed=values["master_seed"],
        bs_height_m=values["bs_height_m"],
        boresights_deg=tuple(values["boresights_deg"]),
        fc_ghz=values["fc_ghz"],
        bandwidth_mhz=values["bandwidth_mhz"],
        ssb_rbs=values["ssb_rbs"],
        sigma_los_uma_db=values["sigma_los_uma_db"],
        sigma_nlos_uma_db=values["sigma_nlos_uma_db"],
        sigma_los_rma_db=values["sigma_los_rma_db"],
        sigma_nlos_rma_db=values["sigma_nlos_rma_db"],
        h_e_m=values["h_e_m"],
        h_blg_m=values["h_blg_m"],
        street_width_m=values["street_width_m"],
        radio=radio,
        antenna=antenna,
    )
    config.validate()
    return config


def parse_config(path: str | None = None, overrides: dict[str, object] | None = None) -> SimulationConfig:
    """Build the simulation configuration: defaults, then file, then overrides."""
    values = _default_values()
    if path is not None:
        values.update(load_config_file(path))
    for key, value in (overrides or {}).items():
        if key not in CONFIG_PARSERS:
            raise ConfigurationError(f"unknown configuration key {key!r} (override)")
        values[key] = value
    return _config_from_values(values)


def format_config(config: SimulationConfig) -> str:
    """Serialize a configuration to the flat key=value file format."""
    values = {
        "scenario": {("UMa",): "uma", ("RMa",): "rma"}.get(tuple(config.scenarios), "both"),
        "fc_ghz": repr(config.fc_ghz),
        "bandwidth_mhz": repr(config.bandwidth_mhz),
        "scs_khz": repr(config.radio.scs_hz / 1e3),
        "n_rb": str(config.radio.n_rb),
        "ssb_rbs": str(config.ssb_rbs),
        "p_tx_dbm": repr(config.radio.p_tx_dbm),
        "noise_figure_db": repr(config.radio.noise_figure_db),
        "l_impl_db": repr(config.radio.l_impl_db),
        "g_max_dbi": repr(config.antenna.g_max_dbi),
        "phi_3db_deg": repr(config.antenna.phi_3db_deg),
        "theta_3db_deg": repr(config.antenna.theta_3db_deg),
        "tilt_deg": repr(config.antenna.tilt_deg),
        "sla_v_db": repr(config.antenna.sla_v_db),
        "a_m_db": repr(config.antenna.a_m_db),
        "boresights_deg": ",".join(repr(b) for b in config.boresights_deg),
        "bs_height_m": repr(config.bs_height_m),
        "isd_m": ",".join(repr(v) for v in config.isd_list),
        "altitudes_m": ",".join(repr(v) for v in config.altitude_list),
        "positions": ",".join(config.position_labels),
        "trials": str(config.trials),
        "master_seed": str(config.master_seed),
        "sigma_los_uma_db": repr(config.sigma_los_uma_db),
        "sigma_nlos_uma_db": repr(config.sigma_nlos_uma_db),
        "sigma_los_rma_db": repr(config.sigma_los_rma_db),
        "sigma_nlos_rma_db": repr(config.sigma_nlos_rma_db),
        "rho": repr(config.radio.rho),
        "h_e_m": repr(config.h_e_m),
        "h_blg_m": repr(config.h_blg_m),
        "street_width_m": repr(config.street_width_m),
    }
    return "".join(f"{key} = {value}\n" for key, value in values.items())


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def render_csv(result: SweepResult) -> str:
    """Render the sweep as CSV text, rows sorted for byte-stable output."""
    lines = [",".join(CSV_COLUMNS)]
    rows = sorted(result.rows, key=lambda r: (r.scenario, r.isd_m, r.altitude_m, r.position))
    for row in rows:
        for metric in METRICS:
            stats = row.stats[metric]
            lines.append(",".join((
                row.scenario,
                _fmt(row.isd_m),
                _fmt(row.altitude_m),
                row.position,
                metric,
                stats.unit,
                _fmt(stats.mean),
                _fmt(stats.median),
                _fmt(stats.p05),
                _fmt(stats.p95),
                str(stats.n),
                str(result.master_seed),
            )))
    return "\n".join(lines) + "\n"


def emit_csv(result: SweepResult, path: str) -> None:
    """Write the sweep CSV to ``path`` (byte-identical for equal configs)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(render_csv(result))


def emit_summary(result: SweepResult) -> str:
    """Human-readable mean-KPI tables plus the trend-check verdicts."""
    positions = {row.position for row in result.rows}
    table_position = "cell-middle" if "cell-middle" in positions else sorted(positions)[0]
    scenarios = sorted({row.scenario for row in result.rows})
    isds = sorted({row.isd_m for row in result.rows})
    altitudes = sorted({row.altitude_m for row in result.rows})

    out = [
        f"sweep summary (seed {result.master_seed}, {result.trials} trials per point, "
        f"position {table_position})",
    ]
    for scenario in scenarios:
        out.append("")
        out.append(f"{scenario}: mean RSRP dBm / RSRQ dB / SINR dB by altitude")
        header = "  alt_m" + "".join(f"{f'ISD {isd:g} m':>26}" for isd in isds)
        out.append(header)
        for altitude in altitudes:
            cells = []
            for isd in isds:
                stats = result.stats_at(scenario, isd, altitude, table_position)
                cells.append(
                    f"{stats['RSRP'].mean:8.1f}/{stats['RSRQ'].mean:6.1f}/{stats['SINR'].mean:6.1f}"
                )
            out.append(f"{altitude:7g}" + "".join(f"{c:>26}" for c in cells))
    out.append("")
    out.append("trend checks:")
    for check in trend_checks(result):
        verdict = "PASS" if check.passed else ("SKIP" if check.passed is None else "FAIL")
        out.append(f"  [{verdict}] {check.name}: {check.detail}")
    return "\n".join(out) + "\n"


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Monte Carlo sweep of aerial-user RSRP/RSRQ/SINR over a "
                    "multi-cell deployment; emits plot-ready CSV or a text summary.",
    )
    parser.add_argument("--config", metavar="PATH", help="flat key=value configuration file")
    parser.add_argument("--scenario", choices=sorted(_SCENARIO_CHOICES), help="propagation scenario")
    parser.add_argument("--isd", metavar="LIST", help="comma-separated inter-site distances in meters")
    parser.add_argument("--alt", metavar="LIST", help="comma-separated UAV altitudes in meters")
    parser.add_argument("--positions", metavar="LIST", help="comma-separated UAV position labels")
    parser.add_argument("--trials", type=int, metavar="N", help="Monte Carlo trials per axis point")
    parser.add_argument("--seed", type=int, metavar="N", help="master seed for all random streams")
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "summary"), default="csv", help="output format")
    return parser


def _overrides_from_args(args: argparse.Namespace) -> dict[str, object]:
    overrides: dict[str, object] = {}
    if args.scenario is not None:
        overrides["scenario"] = _parse_scenario(args.scenario)
    if args.isd is not None:
        overrides["isd_m"] = _parse_float_list(args.isd)
    if args.alt is not None:
        overrides["altitudes_m"] = _parse_float_list(args.alt)
    if args.positions is not None:
        overrides["positions"] = _parse_str_list(args.positions)
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    return overrides


def _write_output(text: str, path: str | None, stdout: IO[str]) -> None:
    if path is None:
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        config = parse_config(args.config, _overrides_from_args(args))
        result = run_sweep(config)
        text = render_csv(result) if args.format == "csv" else emit_summary(result)
        _write_output(text, args.out, sys.stdout)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
