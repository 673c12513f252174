"""Hexagonal multi-site network layout and uniform UE placement.

Sites sit on a hex grid with nearest-neighbor spacing equal to the
inter-site distance.  Each site owns a regular hexagonal cell (circumradius
ISD/sqrt(3) unless the profile overrides it) split into three 120-degree
wedges, one per sector, with boresights at 0/120/240 degrees.  The three
wedges partition the hexagon exactly: angular membership uses the half-open
interval [-60, 60) degrees relative to boresight.

Elevation angles follow the zenith convention: 0 points straight up, 90 is
horizontal, 180 straight down.  Offsets from a horizontal boresight are
therefore `elevation_angle - 90`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .profiles import SystemProfile

SQRT3 = math.sqrt(3.0)
MIN_DISTANCE_2D = 1.0  # m, far-field clamp keeping the inverse-square law finite

# Unit normals of the three hexagon edge-axis directions (0, 60, 120 degrees).
_HEX_AXES = np.array([
    [1.0, 0.0],
    [0.5, SQRT3 / 2.0],
    [-0.5, SQRT3 / 2.0],
])


def wrap_angle_deg(angle):
    """Wrap angles (degrees) into (-180, 180]."""
    return 180.0 - np.mod(180.0 - np.asarray(angle, dtype=float), 360.0)


@dataclass(frozen=True)
class SectorGeometry:
    """One sector of one site: position, pointing and owned wedge region."""

    site_index: int
    sector_index: int
    bs_position: tuple[float, float]   # m
    boresight_azimuth: float           # degrees
    antenna_height: float              # m
    cell_radius: float                 # m, hexagon circumradius

    def __post_init__(self):
        if not 0 <= self.sector_index <= 2:
            raise ValueError("sector_index must be 0, 1 or 2")
        if self.cell_radius <= 0 or self.antenna_height <= 0:
            raise ValueError("cell_radius and antenna_height must be positive")

    @property
    def sector_id(self) -> int:
        return self.site_index * 3 + self.sector_index

    @property
    def apothem(self) -> float:
        return self.cell_radius * SQRT3 / 2.0

    def region_vertices(self) -> np.ndarray:
        """Wedge polygon (pentagon), counter-clockwise, starting at the site."""
        bore = math.radians(self.boresight_azimuth)
        bx, by = self.bs_position
        pts = [(0.0, 0.0)]
        for ang, radius in ((-60.0, self.apothem), (-30.0, self.cell_radius),
                            (30.0, self.cell_radius), (60.0, self.apothem)):
            a = bore + math.radians(ang)
            pts.append((radius * math.cos(a), radius * math.sin(a)))
        return np.asarray(pts) + np.array([bx, by])

    def contains(self, x, y):
        """Point-in-wedge test; broadcasts over arrays."""
        rx = np.asarray(x, dtype=float) - self.bs_position[0]
        ry = np.asarray(y, dtype=float) - self.bs_position[1]
        inside = np.ones(np.broadcast(rx, ry).shape, dtype=bool)
        for ux, uy in _HEX_AXES:
            inside &= np.abs(rx * ux + ry * uy) <= self.apothem + 1e-9
        rel = wrap_angle_deg(np.degrees(np.arctan2(ry, rx)) - self.boresight_azimuth)
        inside &= (rel >= -60.0) & (rel < 60.0)
        if np.ndim(inside) == 0:
            return bool(inside)
        return inside

    def bounding_box(self) -> tuple[float, float, float, float]:
        v = self.region_vertices()
        return v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max()

    def area(self) -> float:
        v = self.region_vertices()
        x, y = v[:, 0], v[:, 1]
        xs, ys = np.roll(x, -1), np.roll(y, -1)
        return float(np.sum(x * ys - xs * y) / 2.0)

    def centroid(self) -> tuple[float, float]:
        v = self.region_vertices()
        x, y = v[:, 0], v[:, 1]
        xs, ys = np.roll(x, -1), np.roll(y, -1)
        cross = x * ys - xs * y
        area = np.sum(cross) / 2.0
        cx = np.sum((x + xs) * cross) / (6.0 * area)
        cy = np.sum((y + ys) * cross) / (6.0 * area)
        return float(cx), float(cy)


@dataclass(frozen=True)
class UeDrop:
    """A sampled UE position attached to the sector region that contains it."""

    position: tuple[float, float]  # m
    height: float                  # m
    home_sector: int               # sector_id

    def __post_init__(self):
        if self.height <= 0:
            raise ValueError("UE height must be positive")


@dataclass(frozen=True)
class LinkGeometry:
    """Derived geometry of one BS-sector to UE link."""

    distance_2d: float       # m, clamped below at MIN_DISTANCE_2D
    distance_3d: float       # m
    azimuth_offset: float    # degrees in (-180, 180], relative to boresight
    elevation_angle: float   # degrees in [0, 180], zenith convention

    @property
    def elevation_offset(self) -> float:
        """Offset from a horizontal boresight, degrees."""
        return self.elevation_angle - 90.0


def hex_site_positions(isd: float, num_rings: int) -> np.ndarray:
    """Site centers of a hex grid with `num_rings` rings around the origin.

    Sites are ordered by ring and then by azimuth so indices are stable.
    """
    if num_rings not in (0, 1, 2):
        raise ValueError("num_rings must be 0, 1 or 2 (1, 7 or 19 sites)")
    if isd <= 0:
        raise ValueError("inter-site distance must be positive")
    v1 = np.array([isd, 0.0])
    v2 = np.array([isd / 2.0, isd * SQRT3 / 2.0])
    entries = []
    for i in range(-num_rings, num_rings + 1):
        for j in range(-num_rings, num_rings + 1):
            ring = max(abs(i), abs(j), abs(i + j))
            if ring > num_rings:
                continue
            pos = i * v1 + j * v2
            angle = math.atan2(pos[1], pos[0]) % (2.0 * math.pi) if ring else 0.0
            entries.append((ring, angle, pos))
    entries.sort(key=lambda e: (e[0], e[1]))
    return np.array([e[2] for e in entries])


def build_layout(profile: SystemProfile, num_rings: int | None = None) -> list[SectorGeometry]:
    """Build the sector list for a profile (1, 7 or 19 sites; 3 sectors each)."""
    rings = profile.default_num_rings if num_rings is None else num_rings
    sites = hex_site_positions(profile.inter_site_distance, rings)
    radius = profile.hex_cell_radius
    sectors = []
    for site_index, (sx, sy) in enumerate(sites):
        for sector_index in range(profile.sectors_per_site):
            sectors.append(SectorGeometry(
                site_index=site_index,
                sector_index=sector_index,
                bs_position=(float(sx), float(sy)),
                boresight_azimuth=120.0 * sector_index,
                antenna_height=profile.bs_antenna_height,
                cell_radius=radius,
            ))
    return sectors


def sample_positions(sector: SectorGeometry, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `n` positions uniformly over the sector wedge.

    Rejection sampling from the wedge's bounding box, X and Y independent
    uniforms.  The wedge fills about two thirds of the box, so the loop
    terminates quickly; a generous iteration cap guards against misuse with
    degenerate regions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    xmin, ymin, xmax, ymax = sector.bounding_box()
    out = np.empty((n, 2))
    filled = 0
    for _ in range(10_000):
        batch = max(2 * (n - filled), 16)
        xs = rng.uniform(xmin, xmax, size=batch)
        ys = rng.uniform(ymin, ymax, size=batch)
        ok = sector.contains(xs, ys)
        take = min(int(ok.sum()), n - filled)
        if take:
            out[filled:filled + take, 0] = xs[ok][:take]
            out[filled:filled + take, 1] = ys[ok][:take]
            filled += take
        if filled == n:
            return out
    raise RuntimeError("rejection sampling failed to fill the sector region")


def sample_ue(sector: SectorGeometry, rng: np.random.Generator,
              height: float = 1.5) -> UeDrop:
    """Sample one UE uniformly inside the sector region."""
    pos = sample_positions(sector, 1, rng)[0]
    return UeDrop(position=(float(pos[0]), float(pos[1])), height=height,
                  home_sector=sector.sector_id)


def link_geometry(sector: SectorGeometry, ue: UeDrop) -> LinkGeometry:
    """Geometry of the link from a sector's BS to a UE."""
    dx = ue.position[0] - sector.bs_position[0]
    dy = ue.position[1] - sector.bs_position[1]
    d2 = max(math.hypot(dx, dy), MIN_DISTANCE_2D)
    dh = sector.antenna_height - ue.height
    d3 = math.hypot(d2, dh)
    azimuth = wrap_angle_deg(math.degrees(math.atan2(dy, dx)) - sector.boresight_azimuth)
    elevation = 90.0 + math.degrees(math.atan2(dh, d2))
    return LinkGeometry(distance_2d=d2, distance_3d=d3,
                        azimuth_offset=float(azimuth), elevation_angle=elevation)


def write_layout_csv(sectors: list[SectorGeometry], path) -> None:
    """Dump the layout as CSV: site_index, sector_index, bs_x, bs_y, boresight_deg."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["site_index", "sector_index", "bs_x", "bs_y", "boresight_deg"])
        for s in sectors:
            writer.writerow([s.site_index, s.sector_index,
                             repr(s.bs_position[0]), repr(s.bs_position[1]),
                             repr(s.boresight_azimuth)])
