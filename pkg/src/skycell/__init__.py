"""System-level Monte Carlo simulator for cellular-connected aerial users.

Builds a 19-site tri-sector hexagonal deployment with wrap-around, applies
a composite sector antenna pattern with electrical downtilt and urban/rural
macro propagation (two-slope path loss, probabilistic LOS, log-normal
shadowing), and sweeps altitude, inter-site distance, and UAV position to
produce RSRP/RSRQ/SINR statistics.
"""

from .antenna import AntennaConfig, angular_offsets, attenuation, gain
from .channel import (
    LOS,
    NLOS,
    PropagationState,
    ScenarioParams,
    breakpoint_distance,
    draw_shadowing,
    draw_state,
    effective_pathloss,
    los_probability,
    pathloss_los,
    pathloss_nlos,
)
from .cli import emit_csv, emit_summary, format_config, parse_config, render_csv
from .engine import (
    KpiStats,
    SimulationConfig,
    SweepResult,
    SweepRow,
    aggregate,
    run_sweep,
    run_trial,
    trend_checks,
)
from .errors import ConfigurationError, DegenerateLinkError, DomainError, SimulationError
from .geometry import (
    DeploymentLayout,
    LinkGeometry,
    SectorGeometry,
    UavPosition,
    build_layout,
    link_geometry,
    uav_position,
    wraparound_image,
)
from .kpi import (
    KpiSample,
    LinkBudget,
    RadioConfig,
    associate,
    evaluate_sample,
    interference,
    link_budget,
    noise_power,
    received_power,
    rsrp,
    rsrq,
    rssi,
    sinr,
)
from .streams import RngStream, trial_draws

__version__ = "0.1.0"
