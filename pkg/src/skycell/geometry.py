"""Hexagonal 19-site tri-sector deployment geometry with wrap-around.

The lattice is flat-topped: the six first-ring sites sit at azimuths
0, 60, ..., 300 degrees at distance ISD from the center site, and the twelve
second-ring sites at sqrt(3)*ISD (azimuths 30, 90, ...) and 2*ISD (azimuths
0, 60, ...).  Wrap-around replicates the 19-site cluster at the six
translations of the cluster lattice (spacing sqrt(19)*ISD), so every link
uses the nearest of 7 images of its site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, DegenerateLinkError

NUM_SITES = 19
SECTORS_PER_SITE = 3
NUM_SECTORS = NUM_SITES * SECTORS_PER_SITE

#: Radial offset from the center site, as a fraction of ISD, for the three
#: deterministic evaluation positions inside the center cell.
POSITION_OFFSETS = {
    "cell-center": 0.0,
    "cell-middle": 0.25,
    "cell-edge": 0.5,
}


@dataclass(frozen=True)
class SectorGeometry:
    """One of the 57 sectors: co-located with its site, fixed boresight."""

    sector_id: int
    site_id: int
    position: tuple[float, float]
    boresight_deg: float
    bs_height_m: float


@dataclass(frozen=True)
class UavPosition:
    """Horizontal position and altitude of the aerial user."""

    x: float
    y: float
    h: float
    label: str

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ConfigurationError(f"UAV altitude must be positive, got {self.h}")
        if self.label not in POSITION_OFFSETS:
            raise ConfigurationError(
                f"unknown position label {self.label!r}; expected one of {sorted(POSITION_OFFSETS)}"
            )


@dataclass(frozen=True)
class LinkGeometry:
    """Distances and angles of one UAV-sector link (wrap-around applied)."""

    d2d_m: float
    d3d_m: float
    theta_deg: float
    phi_deg: float
    image_offset: tuple[float, float]


@dataclass(frozen=True)
class DeploymentLayout:
    """Immutable 19-site / 57-sector deployment; safe to share across trials."""

    isd_m: float
    bs_height_m: float
    sites: tuple[tuple[float, float], ...]
    sectors: tuple[SectorGeometry, ...]
    wrap_offsets: tuple[tuple[float, float], ...]


def _wrap_deg(angle: float) -> float:
    """Wrap an angle in degrees to [-180, 180)."""
    return (angle + 180.0) % 360.0 - 180.0


def _site_positions(isd_m: float) -> list[tuple[float, float]]:
    sites = [(0.0, 0.0)]
    for k in range(6):  # first ring
        az = math.radians(60.0 * k)
        sites.append((isd_m * math.cos(az), isd_m * math.sin(az)))
    for k in range(6):  # second ring, edge midpoints
        az = math.radians(30.0 + 60.0 * k)
        r = math.sqrt(3.0) * isd_m
        sites.append((r * math.cos(az), r * math.sin(az)))
    for k in range(6):  # second ring, corners
        az = math.radians(60.0 * k)
        sites.append((2.0 * isd_m * math.cos(az), 2.0 * isd_m * math.sin(az)))
    return sites


def _wrap_offsets(isd_m: float) -> list[tuple[float, float]]:
    # Cluster translation vector for the 19-site tiling: 3*a1 + 2*a2 with
    # a1 = ISD*(1, 0) and a2 = ISD*(1/2, sqrt(3)/2); length sqrt(19)*ISD.
    # The 6 nearest cluster images are its rotations by multiples of 60 deg.
    dx0, dy0 = 4.0 * isd_m, math.sqrt(3.0) * isd_m
    offsets = [(0.0, 0.0)]
    for k in range(6):
        az = math.radians(60.0 * k)
        c, s = math.cos(az), math.sin(az)
        offsets.append((dx0 * c - dy0 * s, dx0 * s + dy0 * c))
    return offsets


def build_layout(
    isd_m: float,
    bs_height_m: float = 30.0,
    boresights_deg: tuple[float, float, float] = (0.0, 120.0, 240.0),
) -> DeploymentLayout:
    """Build the 19-site, 57-sector hexagonal deployment.

    Site 0 is the center cell; construction is a pure function of the inputs.
    """
    if isd_m <= 0:
        raise ConfigurationError(f"ISD must be positive, got {isd_m}")
    if bs_height_m <= 0:
        raise ConfigurationError(f"BS height must be positive, got {bs_height_m}")
    if len(boresights_deg) != SECTORS_PER_SITE:
        raise ConfigurationError(f"expected 3 sector boresights, got {len(boresights_deg)}")
    normalized = tuple(b % 360.0 for b in boresights_deg)
    gaps = sorted((b - normalized[0]) % 360.0 for b in normalized)
    if any(abs(g - want) > 1e-9 for g, want in zip(gaps, (0.0, 120.0, 240.0))):
        raise ConfigurationError(f"sector boresights must be 120 degrees apart, got {boresights_deg}")

    sites = _site_positions(isd_m)
    sectors = []
    for site_id, pos in enumerate(sites):
        for k, boresight in enumerate(normalized):
            sectors.append(
                SectorGeometry(
                    sector_id=site_id * SECTORS_PER_SITE + k,
                    site_id=site_id,
                    position=pos,
                    boresight_deg=boresight,
                    bs_height_m=bs_height_m,
                )
            )
    return DeploymentLayout(
        isd_m=isd_m,
        bs_height_m=bs_height_m,
        sites=tuple(sites),
        sectors=tuple(sectors),
        wrap_offsets=tuple(_wrap_offsets(isd_m)),
    )


def uav_position(label: str, isd_m: float, altitude_m: float) -> UavPosition:
    """Deterministic UAV position: radial offset from the center site at azimuth 0."""
    if label not in POSITION_OFFSETS:
        raise ConfigurationError(
            f"unknown position label {label!r}; expected one of {sorted(POSITION_OFFSETS)}"
        )
    return UavPosition(x=POSITION_OFFSETS[label] * isd_m, y=0.0, h=altitude_m, label=label)


def wraparound_image(
    layout: DeploymentLayout, uav: UavPosition, site: tuple[float, float]
) -> tuple[float, float]:
    """Displacement of the wrap-around image of ``site`` nearest to the UAV.

    Ties keep the identity image first, then the lowest image index.
    """
    best = (0.0, 0.0)
    best_d2 = math.inf
    for dx, dy in layout.wrap_offsets:
        ex = uav.x - (site[0] + dx)
        ey = uav.y - (site[1] + dy)
        d2 = ex * ex + ey * ey
        if d2 < best_d2:
            best_d2 = d2
            best = (dx, dy)
    return best


def link_geometry(layout: DeploymentLayout, uav: UavPosition, sector: SectorGeometry) -> LinkGeometry:
    """Distances and angles between the UAV and a sector's nearest image."""
    offset = wraparound_image(layout, uav, sector.position)
    sx = sector.position[0] + offset[0]
    sy = sector.position[1] + offset[1]
    ex = uav.x - sx
    ey = uav.y - sy
    dh = uav.h - sector.bs_height_m
    d2d = math.hypot(ex, ey)
    d3d = math.sqrt(d2d * d2d + dh * dh)
    if d3d == 0.0:
        raise DegenerateLinkError(
            f"UAV at {(uav.x, uav.y, uav.h)} coincides with sector {sector.sector_id} antenna"
        )
    theta = math.degrees(math.atan(dh / d3d))
    phi = _wrap_deg(math.degrees(math.atan2(ey, ex)))
    return LinkGeometry(d2d_m=d2d, d3d_m=d3d, theta_deg=theta, phi_deg=phi, image_offset=offset)
