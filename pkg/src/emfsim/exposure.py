"""Power density and specific absorption rate.

Two PD routes: from a measured field amplitude (|E|^2 over the free-space
impedance) and from transmitter parameters (EIRP over the sphere surface
4*pi*d^2).  SAR at the air-skin boundary scales PD by 2*(1 - R^2)/(delta*rho)
with reflection amplitude R, penetration depth delta and tissue density rho.
The point-SAR form sigma*|E|^2/rho is provided as a standalone calculator;
the boundary form is the one on the simulation path.

Sector-average SAR is a Monte Carlo mean over uniform UE positions inside a
sector wedge; numpy's pairwise summation keeps the reduction deterministic
for a given seed regardless of how samples were produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import antenna
from .layout import MIN_DISTANCE_2D, SectorGeometry, sample_positions, wrap_angle_deg
from .profiles import SystemProfile, effective_tx_power
from .units import db_to_linear, dbm_to_watt

FREE_SPACE_IMPEDANCE = 376.73  # ohm


@dataclass(frozen=True)
class FreeSpaceParams:
    characteristic_impedance: float = FREE_SPACE_IMPEDANCE  # ohm

    def __post_init__(self):
        if self.characteristic_impedance <= 0:
            raise ValueError("characteristic impedance must be positive")


@dataclass(frozen=True)
class TissueParams:
    reflection_coefficient: float = 0.6   # amplitude, dimensionless
    penetration_depth: float = 1e-3       # m
    mass_density: float = 1000.0          # kg/m^3 (1 g/cm^3)
    conductivity: float = 38.2            # S/m, used only by the point-SAR calculator

    def __post_init__(self):
        if not 0.0 <= self.reflection_coefficient < 1.0:
            raise ValueError("reflection coefficient must be in [0, 1)")
        if self.penetration_depth <= 0 or self.mass_density <= 0:
            raise ValueError("penetration depth and density must be positive")
        if self.conductivity < 0:
            raise ValueError("conductivity must be non-negative")

    @property
    def boundary_sar_factor(self) -> float:
        """SAR per unit PD at the air-skin boundary, (W/kg)/(W/m^2)."""
        r = self.reflection_coefficient
        return 2.0 * (1.0 - r * r) / (self.penetration_depth * self.mass_density)


def pd_from_field(e_field_amplitude, free_space: FreeSpaceParams = FreeSpaceParams()):
    """Power density |E|^2 / rho_0 in W/m^2."""
    e = np.asarray(e_field_amplitude, dtype=float)
    if np.any(e < 0):
        raise ValueError("field amplitude must be non-negative")
    pd = e * e / free_space.characteristic_impedance
    if np.ndim(pd) == 0:
        return float(pd)
    return pd


def pd_from_link(profile: SystemProfile, geom, pattern: antenna.PatternParams | None = None):
    """Power density from transmitter parameters: P_tx * G / (4 pi d3d^2)."""
    params = pattern if pattern is not None else antenna.pattern_params(profile)
    g = antenna.gain(params, geom.azimuth_offset, geom.elevation_offset)
    p_watt = dbm_to_watt(effective_tx_power(profile))
    pd = p_watt * db_to_linear(g) / (4.0 * math.pi * geom.distance_3d ** 2)
    if np.ndim(pd) == 0:
        return float(pd)
    return pd


def sar_point(e_field_amplitude, tissue: TissueParams = TissueParams()):
    """Point SAR sigma * |E|^2 / rho in W/kg."""
    e = np.asarray(e_field_amplitude, dtype=float)
    if np.any(e < 0):
        raise ValueError("field amplitude must be non-negative")
    sar = tissue.conductivity * e * e / tissue.mass_density
    if np.ndim(sar) == 0:
        return float(sar)
    return sar


def sar_boundary(pd, tissue: TissueParams = TissueParams()):
    """Air-skin boundary SAR 2 * PD * (1 - R^2) / (delta * rho) in W/kg."""
    p = np.asarray(pd, dtype=float)
    if np.any(p < 0):
        raise ValueError("power density must be non-negative")
    sar = p * tissue.boundary_sar_factor
    if np.ndim(sar) == 0:
        return float(sar)
    return sar


def pd_at_positions(profile: SystemProfile, sector: SectorGeometry,
                    positions: np.ndarray, ue_height: float | None = None,
                    pattern: antenna.PatternParams | None = None) -> np.ndarray:
    """Vectorized PD from one sector's BS at an (n, 2) array of positions."""
    params = pattern if pattern is not None else antenna.pattern_params(profile)
    h_ue = profile.ue_height if ue_height is None else ue_height
    dx = positions[:, 0] - sector.bs_position[0]
    dy = positions[:, 1] - sector.bs_position[1]
    d2 = np.maximum(np.hypot(dx, dy), MIN_DISTANCE_2D)
    dh = sector.antenna_height - h_ue
    d3 = np.hypot(d2, dh)
    az_off = wrap_angle_deg(np.degrees(np.arctan2(dy, dx)) - sector.boresight_azimuth)
    el_off = np.degrees(np.arctan2(dh, d2))
    g = antenna.gain(params, az_off, el_off)
    p_watt = dbm_to_watt(effective_tx_power(profile))
    return p_watt * db_to_linear(g) / (4.0 * math.pi * d3 ** 2)


@dataclass(frozen=True)
class SarEstimate:
    mean: float         # W/kg
    stderr: float       # W/kg, standard error of the mean
    num_samples: int


def sector_average_sar(sector: SectorGeometry, profile: SystemProfile,
                       num_samples: int, rng: np.random.Generator,
                       tissue: TissueParams = TissueParams(),
                       field=None) -> SarEstimate:
    """Monte Carlo mean SAR over uniform UE positions in the sector.

    `field`, when given, maps an (n, 2) position array to SAR samples and
    replaces the default exposure chain; handy for stub integrands in tests.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    positions = sample_positions(sector, num_samples, rng)
    if field is not None:
        values = np.asarray(field(positions), dtype=float)
    else:
        pd = pd_at_positions(profile, sector, positions)
        values = pd * tissue.boundary_sar_factor
    mean = float(np.mean(values))
    if num_samples > 1:
        stderr = float(np.std(values, ddof=1) / math.sqrt(num_samples))
    else:
        stderr = float("inf")
    return SarEstimate(mean=mean, stderr=stderr, num_samples=num_samples)
