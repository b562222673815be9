"""Composite sector antenna gain with electrical downtilt.

All angles are in degrees; beamwidths and tilt are specified in degrees, and
keeping one unit end to end avoids degree/radian mistakes at the formula
boundary.  Elevation offsets are a plain sum with the tilt and are not
wrapped; azimuth offsets wrap to [-180, 180).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError
from .geometry import LinkGeometry, _wrap_deg


@dataclass(frozen=True)
class AntennaConfig:
    """Sector antenna pattern parameters."""

    g_max_dbi: float = 17.0
    tilt_deg: float = 12.0
    theta_3db_deg: float = 65.0
    phi_3db_deg: float = 65.0
    sla_v_db: float = 30.0
    a_m_db: float = 30.0

    def __post_init__(self) -> None:
        for name in ("theta_3db_deg", "phi_3db_deg", "sla_v_db", "a_m_db"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")


def angular_offsets(
    link: LinkGeometry, boresight_deg: float, tilt_deg: float
) -> tuple[float, float]:
    """Azimuth and elevation offsets of the link from the tilted boresight."""
    dphi = _wrap_deg(link.phi_deg - boresight_deg)
    dtheta = link.theta_deg + tilt_deg
    return dphi, dtheta


def attenuation(dphi_deg: float, dtheta_deg: float, cfg: AntennaConfig) -> tuple[float, float, float]:
    """Vertical, horizontal, and total pattern attenuation in dB."""
    a_v = min(cfg.sla_v_db, 12.0 * (dtheta_deg / cfg.theta_3db_deg) ** 2)
    a_h = min(cfg.a_m_db, 12.0 * (dphi_deg / cfg.phi_3db_deg) ** 2)
    a_total = min(cfg.a_m_db, a_v + a_h)
    return a_v, a_h, a_total


def gain(link: LinkGeometry, boresight_deg: float, cfg: AntennaConfig) -> float:
    """Sector gain toward the UAV in dBi; bounded to [g_max - a_m, g_max]."""
    dphi, dtheta = angular_offsets(link, boresight_deg, cfg.tilt_deg)
    _, _, a_total = attenuation(dphi, dtheta, cfg)
    return cfg.g_max_dbi - a_total
