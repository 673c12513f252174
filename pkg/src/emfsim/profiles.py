"""System parameterizations for the three simulated downlink deployments.

Each deployment generation ships as an immutable :class:`SystemProfile`.
Custom profiles for sensitivity studies are built by overriding fields of a
builtin profile, either programmatically (:func:`apply_overrides`) or through
the YAML run-configuration file (see README for the schema).
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields, replace

import yaml


class Generation(str, enum.Enum):
    FIVE_G = "5g"
    FOUR_G = "4g"
    THREE_NINE_G = "3.9g"


class PathLossModel(str, enum.Enum):
    UMI_38901 = "umi_38901"
    UMI_36873 = "umi_36873"
    UMI_25996 = "umi_25996"


# LOS street-canyon coefficients, one row per model:
#   PL[dB] = offset + slope_d * log10(d3d_m) + slope_f * log10(f_GHz)
# Kept as data so audits/sensitivity runs can amend them without code changes
# (override via the `path_loss_coefficients` config section).
PATH_LOSS_COEFFICIENTS: dict[PathLossModel, tuple[float, float, float]] = {
    PathLossModel.UMI_38901: (32.4, 21.0, 20.0),
    PathLossModel.UMI_36873: (28.0, 22.0, 20.0),
    PathLossModel.UMI_25996: (34.53, 38.0, 0.0),
}

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class SystemProfile:
    """Full parameter set for one deployment generation.

    Immutable after construction; freely shareable across workers.  dB/dBm
    quantities may legitimately be <= 0 (they are positive in linear units),
    so validation checks finiteness for those and strict positivity for
    frequencies, bandwidths, distances and counts.
    """

    generation: Generation
    carrier_frequency: float        # Hz
    bandwidth: float                # Hz
    inter_site_distance: float      # m
    element_gain_max: float         # dBi (per element, or total when array_elements == 1)
    element_tx_power: float         # dBm (per element when power_is_per_element)
    array_elements: int
    bs_antenna_height: float        # m
    az_3db_angle: float             # degrees
    front_to_back: float            # dB, pattern attenuation cap
    pathloss_model: PathLossModel
    sectors_per_site: int = 3
    ue_noise_figure: float = 7.0    # dB
    temperature: float = 290.0      # K
    power_is_per_element: bool = True
    omni_azimuth: bool = False
    el_3db_angle: float = 65.0      # degrees
    elevation_sidelobe_limit: float = 30.0  # dB
    cell_radius: float | None = None  # m (hexagon circumradius); None -> ISD/sqrt(3)
    default_num_rings: int = 2
    ue_height: float = 1.5          # m

    def __post_init__(self):
        positive = {
            "carrier_frequency": self.carrier_frequency,
            "bandwidth": self.bandwidth,
            "inter_site_distance": self.inter_site_distance,
            "bs_antenna_height": self.bs_antenna_height,
            "az_3db_angle": self.az_3db_angle,
            "front_to_back": self.front_to_back,
            "el_3db_angle": self.el_3db_angle,
            "elevation_sidelobe_limit": self.elevation_sidelobe_limit,
            "temperature": self.temperature,
            "ue_height": self.ue_height,
        }
        for name, value in positive.items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        for name, value in (("element_gain_max", self.element_gain_max),
                            ("element_tx_power", self.element_tx_power),
                            ("ue_noise_figure", self.ue_noise_figure)):
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.array_elements < 1:
            raise ValueError("array_elements must be >= 1")
        if self.sectors_per_site != 3:
            raise ValueError("all shipped layouts use 3 sectors per site")
        if self.cell_radius is not None and self.cell_radius <= 0:
            raise ValueError("cell_radius must be strictly positive when set")
        if self.default_num_rings not in (0, 1, 2):
            raise ValueError("default_num_rings must be one of 0, 1, 2")

    @property
    def hex_cell_radius(self) -> float:
        """Circumradius of the hexagonal cell (m)."""
        if self.cell_radius is not None:
            return self.cell_radius
        return self.inter_site_distance / SQRT3

    @property
    def carrier_frequency_ghz(self) -> float:
        return self.carrier_frequency / 1e9

    def to_dict(self) -> dict:
        d = asdict(self)
        d["generation"] = self.generation.value
        d["pathloss_model"] = self.pathloss_model.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SystemProfile":
        d = dict(d)
        d["generation"] = Generation(d["generation"])
        d["pathloss_model"] = PathLossModel(d["pathloss_model"])
        return cls(**d)


@dataclass(frozen=True)
class ExposureLimits:
    """Regulatory exposure guidelines used as defaults for thresholds."""

    pd_limit: float = 10.0   # W/m^2
    sar_limit: float = 1.6   # W/kg

    def __post_init__(self):
        if self.pd_limit <= 0 or self.sar_limit <= 0:
            raise ValueError("exposure limits must be strictly positive")


_BUILTINS: dict[Generation, dict] = {
    Generation.FIVE_G: dict(
        carrier_frequency=28e9,
        bandwidth=850e6,
        inter_site_distance=200.0,
        element_gain_max=8.0,
        element_tx_power=21.0,
        array_elements=64,          # 8x8 panel
        bs_antenna_height=10.0,
        az_3db_angle=65.0,
        front_to_back=30.0,
        pathloss_model=PathLossModel.UMI_38901,
        power_is_per_element=True,
        default_num_rings=2,
    ),
    Generation.FOUR_G: dict(
        carrier_frequency=2e9,
        bandwidth=20e6,
        inter_site_distance=200.0,
        element_gain_max=8.0,
        element_tx_power=44.0,      # stated as a total, not per element
        array_elements=4,
        bs_antenna_height=10.0,
        az_3db_angle=65.0,
        front_to_back=30.0,
        pathloss_model=PathLossModel.UMI_36873,
        power_is_per_element=False,
        default_num_rings=2,
    ),
    Generation.THREE_NINE_G: dict(
        carrier_frequency=1.9e9,
        bandwidth=20e6,
        inter_site_distance=1000.0,
        element_gain_max=17.0,      # total, omnidirectional in azimuth
        element_tx_power=43.0,
        array_elements=1,
        bs_antenna_height=32.0,
        az_3db_angle=35.0,
        front_to_back=23.0,
        pathloss_model=PathLossModel.UMI_25996,
        power_is_per_element=False,
        omni_azimuth=True,
        el_3db_angle=35.0,
        elevation_sidelobe_limit=23.0,
        cell_radius=500.0,          # single site deployment with 500 m cell
        default_num_rings=0,
    ),
}


def builtin_profile(generation: Generation | str) -> SystemProfile:
    """Return the shipped parameter set for a deployment generation."""
    gen = Generation(generation.lower() if isinstance(generation, str) else generation)
    return SystemProfile(generation=gen, **_BUILTINS[gen])


def effective_tx_power(profile: SystemProfile) -> float:
    """Total conducted transmit power in dBm.

    Per-element profiles sum power coherently over the array
    (+10*log10(N) dB); profiles that state a total pass through unchanged.
    """
    if profile.power_is_per_element:
        return profile.element_tx_power + 10.0 * math.log10(profile.array_elements)
    return profile.element_tx_power


def apply_overrides(profile: SystemProfile, overrides: dict) -> SystemProfile:
    """Rebuild a profile with selected fields replaced (and re-validated)."""
    valid = {f.name for f in fields(SystemProfile)}
    unknown = set(overrides) - valid
    if unknown:
        raise ValueError(f"unknown profile fields: {sorted(unknown)}")
    converted = dict(overrides)
    if "generation" in converted:
        converted["generation"] = Generation(converted["generation"])
    if "pathloss_model" in converted:
        converted["pathloss_model"] = PathLossModel(converted["pathloss_model"])
    return replace(profile, **converted)


def load_profile(path_or_mapping) -> SystemProfile:
    """Build a profile from a YAML file or a mapping.

    The document must carry a `generation` key naming the builtin base;
    every other key overrides the corresponding profile field.
    """
    if isinstance(path_or_mapping, dict):
        data = dict(path_or_mapping)
    else:
        with open(path_or_mapping, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
        if not isinstance(data, dict):
            raise ValueError("profile config must be a mapping")
    if "generation" not in data:
        raise ValueError("profile config requires a 'generation' key")
    base = builtin_profile(data.pop("generation"))
    return apply_overrides(base, data)


def path_loss_coefficients(profile: SystemProfile,
                           overrides: dict | None = None) -> tuple[float, float, float]:
    """Coefficient row (offset, distance slope, frequency slope) for a profile."""
    if overrides:
        key = profile.pathloss_model.value
        if key in overrides:
            row = overrides[key]
            if len(row) != 3:
                raise ValueError("path loss coefficient rows are (offset, slope_d, slope_f)")
            return tuple(float(v) for v in row)
    return PATH_LOSS_COEFFICIENTS[profile.pathloss_model]
