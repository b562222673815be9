"""Per-sector link budgets and the serving-sector KPI triple.

All power combining (interference sum, RSSI) happens in linear milliwatts;
dB conversion only at the boundaries.  Association ties break toward the
lowest sector id so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import PropagationState
from .errors import ConfigurationError, DomainError

THERMAL_NOISE_DBM_PER_HZ = -174.0
SUBCARRIERS_PER_RB = 12


@dataclass(frozen=True)
class RadioConfig:
    """Transmit power, losses, numerology, and interference scaling."""

    p_tx_dbm: float = 46.0
    l_impl_db: float = 8.0
    n_rb: int = 51
    scs_hz: float = 30e3
    noise_figure_db: float = 7.0
    rho: float = 1.0

    def __post_init__(self) -> None:
        if self.n_rb < 1:
            raise ConfigurationError(f"n_rb must be at least 1, got {self.n_rb}")
        if self.scs_hz <= 0:
            raise ConfigurationError(f"subcarrier spacing must be positive, got {self.scs_hz}")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigurationError(f"interference scaling rho must be in [0, 1], got {self.rho}")


@dataclass(frozen=True)
class LinkBudget:
    """Received power and RSRP of one sector, with its propagation draw."""

    sector_id: int
    prx_dbm: float
    rsrp_dbm: float
    gain_dbi: float
    pathloss_db: float
    state: PropagationState


@dataclass(frozen=True)
class KpiSample:
    """Serving-sector KPIs of one Monte Carlo trial."""

    serving_sector: int
    rsrp_dbm: float
    rsrq_db: float
    sinr_db: float
    interference_dbm: float
    rssi_dbm: float
    noise_dbm: float


def db_to_mw(db: float) -> float:
    return 10.0 ** (db / 10.0)


def mw_to_db(mw: float) -> float:
    if mw < 0:
        raise DomainError(f"power must be non-negative, got {mw} mW")
    if mw == 0.0:
        return float("-inf")
    return 10.0 * math.log10(mw)


def noise_power(cfg: RadioConfig) -> float:
    """Receiver noise power in dBm over the occupied bandwidth."""
    bandwidth_hz = SUBCARRIERS_PER_RB * cfg.n_rb * cfg.scs_hz
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + cfg.noise_figure_db


def received_power(gain_dbi: float, effective_pathloss_db: float, cfg: RadioConfig) -> float:
    """Sector received power in dBm after antenna gain and all losses."""
    return cfg.p_tx_dbm + gain_dbi - effective_pathloss_db - cfg.l_impl_db


def rsrp(prx_dbm: float, cfg: RadioConfig) -> float:
    """Per-resource-element received power in dBm."""
    return prx_dbm - 10.0 * math.log10(SUBCARRIERS_PER_RB * cfg.n_rb)


def link_budget(
    sector_id: int,
    gain_dbi: float,
    effective_pathloss_db: float,
    state: PropagationState,
    cfg: RadioConfig,
) -> LinkBudget:
    """Assemble one sector's budget from its gain and effective path loss."""
    prx = received_power(gain_dbi, effective_pathloss_db, cfg)
    return LinkBudget(
        sector_id=sector_id,
        prx_dbm=prx,
        rsrp_dbm=rsrp(prx, cfg),
        gain_dbi=gain_dbi,
        pathloss_db=effective_pathloss_db,
        state=state,
    )


def associate(budgets: Sequence[LinkBudget]) -> int:
    """Serving sector id: maximum instantaneous RSRP, ties to lowest id."""
    if not budgets:
        raise ValueError("budgets must be non-empty")
    best = max(budgets, key=lambda b: (b.rsrp_dbm, -b.sector_id))
    return best.sector_id


def interference(budgets: Sequence[LinkBudget], serving: int, cfg: RadioConfig) -> float:
    """Aggregate non-serving received power in mW, scaled by rho."""
    total = math.fsum(db_to_mw(b.prx_dbm) for b in budgets if b.sector_id != serving)
    return cfg.rho * total


def sinr(prx_serving_dbm: float, interference_mw: float, noise_dbm: float) -> float:
    """Serving power over interference plus noise, in dB."""
    noise_mw = db_to_mw(noise_dbm)
    if noise_mw <= 0:
        raise DomainError("noise power must be positive in linear scale")
    return 10.0 * math.log10(db_to_mw(prx_serving_dbm) / (interference_mw + noise_mw))


def rssi(prx_serving_dbm: float, interference_mw: float, noise_dbm: float) -> float:
    """Total received signal strength (serving + interference + noise) in dBm."""
    return mw_to_db(db_to_mw(prx_serving_dbm) + interference_mw + db_to_mw(noise_dbm))


def rsrq(rsrp_dbm: float, rssi_dbm: float, cfg: RadioConfig) -> float:
    """RSRP over RSSI, scaled by the resource-block count, in dB."""
    return rsrp_dbm - rssi_dbm + 10.0 * math.log10(cfg.n_rb)


def evaluate_sample(budgets: Sequence[LinkBudget], cfg: RadioConfig) -> KpiSample:
    """Serving-sector RSRP/RSRQ/SINR for one trial's 57 link budgets."""
    serving = associate(budgets)
    serving_budget = next(b for b in budgets if b.sector_id == serving)
    interference_mw = interference(budgets, serving, cfg)
    noise_dbm = noise_power(cfg)
    rssi_dbm = rssi(serving_budget.prx_dbm, interference_mw, noise_dbm)
    return KpiSample(
        serving_sector=serving,
        rsrp_dbm=serving_budget.rsrp_dbm,
        rsrq_db=rsrq(serving_budget.rsrp_dbm, rssi_dbm, cfg),
        sinr_db=sinr(serving_budget.prx_dbm, interference_mw, noise_dbm),
        interference_dbm=mw_to_db(interference_mw),
        rssi_dbm=rssi_dbm,
        noise_dbm=noise_dbm,
    )
