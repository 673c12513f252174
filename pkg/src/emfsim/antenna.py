"""Sectorized element pattern and gain.

The combined pattern attenuation is

    A(phi, theta) = min(A_az(phi) + A_el(theta), a_m)
    A_az(phi)     = min(12 * (phi / az_3db)^2, a_m)      (0 for omni profiles)
    A_el(theta)   = min(12 * (theta / el_3db)^2, sla_v)

with phi/theta the azimuth/elevation offsets from boresight in degrees and
gain G(phi, theta) = g_max - A(phi, theta).  All angle arguments broadcast,
so the same functions serve scalar checks and vectorized drop batches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import SystemProfile


@dataclass(frozen=True)
class PatternParams:
    az_3db: float      # degrees, half-power beamwidth parameter
    el_3db: float      # degrees
    a_m: float         # dB, front-to-back attenuation cap
    sla_v: float       # dB, elevation side-lobe limit
    g_max: float       # dBi at boresight, array factor included
    omni_azimuth: bool = False

    def __post_init__(self):
        for name, value in (("az_3db", self.az_3db), ("el_3db", self.el_3db),
                            ("a_m", self.a_m), ("sla_v", self.sla_v)):
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.a_m > 60.0 or self.sla_v > 60.0:
            raise ValueError("attenuation caps above 60 dB are outside the sanity bound")
        if not math.isfinite(self.g_max):
            raise ValueError("g_max must be finite")


def pattern_params(profile: SystemProfile) -> PatternParams:
    """Pattern parameters for a profile, array gain folded into g_max."""
    g_max = profile.element_gain_max + 10.0 * math.log10(profile.array_elements)
    return PatternParams(
        az_3db=profile.az_3db_angle,
        el_3db=profile.el_3db_angle,
        a_m=profile.front_to_back,
        sla_v=profile.elevation_sidelobe_limit,
        g_max=g_max,
        omni_azimuth=profile.omni_azimuth,
    )


def attenuation(params: PatternParams, azimuth_offset, elevation_offset):
    """Pattern attenuation in dB at the given offsets from boresight."""
    if params.omni_azimuth:
        a_az = np.zeros_like(np.asarray(azimuth_offset, dtype=float))
    else:
        a_az = np.minimum(12.0 * (np.asarray(azimuth_offset, dtype=float) / params.az_3db) ** 2,
                          params.a_m)
    a_el = np.minimum(12.0 * (np.asarray(elevation_offset, dtype=float) / params.el_3db) ** 2,
                      params.sla_v)
    total = np.minimum(a_az + a_el, params.a_m)
    if np.ndim(total) == 0:
        return float(total)
    return total


def gain(params: PatternParams, azimuth_offset, elevation_offset):
    """Antenna gain in dBi: g_max minus the pattern attenuation."""
    return params.g_max - attenuation(params, azimuth_offset, elevation_offset)
