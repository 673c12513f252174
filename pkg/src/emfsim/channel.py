"""Path loss, received signal strength, noise and achievable rate.

Deterministic LOS-only link budget: no shadow fading, no NLOS branch and no
inter-cell interference term (SNR, not SINR).  Functions broadcast over
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import antenna
from .layout import LinkGeometry
from .profiles import SystemProfile, effective_tx_power, path_loss_coefficients
from .units import BOLTZMANN, db_to_linear

LOG2 = float(np.log(2.0))


@dataclass
class LinkSample:
    """Per (sector, UE) link metrics; exposure fields filled downstream."""

    sector_id: int
    path_loss: float   # dB
    rss: float         # dBm
    snr: float         # dB
    rate: float        # bit/s
    pd: float = 0.0    # W/m^2
    sar: float = 0.0   # W/kg

    def __post_init__(self):
        if self.rate < 0 or self.pd < 0 or self.sar < 0:
            raise ValueError("rate, pd and sar must be non-negative")


def path_loss_at(profile: SystemProfile, distance_3d,
                 coefficients: tuple[float, float, float] | None = None):
    """Path loss in dB at the given 3D distance(s) in meters."""
    d = np.asarray(distance_3d, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ValueError("distance must be finite")
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    offset, slope_d, slope_f = (coefficients if coefficients is not None
                                else path_loss_coefficients(profile))
    pl = offset + slope_d * np.log10(d) + slope_f * np.log10(profile.carrier_frequency_ghz)
    if np.ndim(pl) == 0:
        return float(pl)
    return pl


def path_loss(profile: SystemProfile, geom: LinkGeometry,
              coefficients: tuple[float, float, float] | None = None) -> float:
    return path_loss_at(profile, geom.distance_3d, coefficients)


def rss(profile: SystemProfile, geom: LinkGeometry,
        pattern: antenna.PatternParams | None = None) -> float:
    """Received signal strength in dBm for one link."""
    params = pattern if pattern is not None else antenna.pattern_params(profile)
    g = antenna.gain(params, geom.azimuth_offset, geom.elevation_offset)
    return effective_tx_power(profile) + g - path_loss(profile, geom)


def noise_floor(profile: SystemProfile) -> float:
    """Thermal noise power plus receiver noise figure, dBm."""
    ktb_mw = BOLTZMANN * profile.temperature * profile.bandwidth * 1000.0
    return 10.0 * np.log10(ktb_mw) + profile.ue_noise_figure


def snr(profile: SystemProfile, rss_dbm) -> float:
    return rss_dbm - noise_floor(profile)


def shannon_rate(profile: SystemProfile, snr_db):
    """Achievable rate B * log2(1 + SNR_linear) in bit/s."""
    s = np.asarray(snr_db, dtype=float)
    rate = profile.bandwidth * np.log1p(db_to_linear(s)) / LOG2
    if np.ndim(rate) == 0:
        return float(rate)
    return rate
