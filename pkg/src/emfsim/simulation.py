"""Monte Carlo drop engine, distance sweeps and empirical distributions.

A drop samples `ues_per_sector` UEs uniformly in every sector, evaluates the
link budget and exposure from every sector to every UE, applies the selected
attachment policy and records what each UE experiences.  Randomness is split
per drop: drop k uses `numpy.random.default_rng(seed ^ k)`, so results are
reproducible bit-for-bit for a given seed regardless of worker count, and
drops can be processed in any order.

The heavy path is vectorized with numpy but is numerically identical to the
scalar operations in `channel`/`exposure`/`protocol` (the test suite checks
the two routes against each other).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import antenna, channel, protocol
from .exposure import TissueParams
from .layout import MIN_DISTANCE_2D, SectorGeometry, build_layout, wrap_angle_deg
from .profiles import (ExposureLimits, SystemProfile, effective_tx_power,
                       path_loss_coefficients)
from .units import db_to_linear, dbm_to_watt

POLICIES = ("baseline", "constrained")


@dataclass(frozen=True)
class RunConfig:
    """Everything one simulation run depends on."""

    profile: SystemProfile
    num_drops: int = 10_000
    ues_per_sector: int = 10
    policy: str = "baseline"
    gamma: float = 10.0            # W/m^2, threshold for the constrained policy
    seed: int = 0
    num_rings: int | None = None   # None -> profile default
    center_only: bool = False      # restrict statistics to the center site
    tissue: TissueParams = field(default_factory=TissueParams)
    limits: ExposureLimits = field(default_factory=ExposureLimits)
    workers: int = 1
    out_dir: str | None = None
    make_plots: bool = True

    def __post_init__(self):
        if self.num_drops < 1:
            raise ValueError("num_drops must be >= 1")
        if self.ues_per_sector < 1:
            raise ValueError("ues_per_sector must be >= 1")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}")
        if not (self.gamma > 0) or math.isnan(self.gamma):
            raise ValueError("gamma must be strictly positive")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


class EmpiricalDistribution:
    """Sorted sample store with exact ECDF and order-statistic quantiles."""

    def __init__(self, values: np.ndarray, metric: str):
        self.values = np.sort(np.asarray(values, dtype=float))
        self.metric = metric

    @property
    def count(self) -> int:
        return int(self.values.size)

    def cdf(self, x):
        """P(X <= x); evaluates to k/n exactly at the k-th order statistic."""
        if self.count == 0:
            raise ValueError("empty distribution")
        c = np.searchsorted(self.values, x, side="right") / self.count
        if np.ndim(x) == 0:
            return float(c)
        return c

    def quantile(self, q):
        if self.count == 0:
            raise ValueError("empty distribution")
        qs = np.atleast_1d(np.asarray(q, dtype=float))
        if np.any((qs < 0) | (qs > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        ks = np.maximum(np.ceil(qs * self.count).astype(int), 1)
        out = self.values[ks - 1]
        if np.ndim(q) == 0:
            return float(out[0])
        return out

    def exceedance(self, threshold) -> float:
        """Fraction of samples strictly above the threshold."""
        return 1.0 - self.cdf(threshold)

    def mean(self) -> float:
        return float(np.mean(self.values))

    def summary(self) -> dict:
        qs = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99]
        return {
            "count": self.count,
            "mean": self.mean(),
            "min": float(self.values[0]),
            "max": float(self.values[-1]),
            "quantiles": {f"p{int(q * 100):02d}": self.quantile(q) for q in qs},
        }


@dataclass
class RunResult:
    config: RunConfig
    distributions: dict[str, EmpiricalDistribution]  # "pd", "sar" (served), "rate" (all)
    outage_fraction: float
    mean_handovers: float
    total_ues: int
    served_ues: int


@dataclass(frozen=True)
class _Precomputed:
    """Flat per-sector arrays for the vectorized drop path."""

    bs_x: np.ndarray
    bs_y: np.ndarray
    boresight: np.ndarray
    bbox: np.ndarray               # (S, 4): xmin, ymin, xmax, ymax
    apothem: float
    height_diff: float             # BS antenna height minus UE height
    pattern: antenna.PatternParams
    pl_coeffs: tuple[float, float, float]
    log_f_ghz: float
    ptx_dbm: float
    ptx_watt: float
    noise_dbm: float
    bandwidth: float
    sar_factor: float
    num_sectors: int


def _precompute(config: RunConfig) -> _Precomputed:
    sectors = build_layout(config.profile, config.num_rings)
    profile = config.profile
    return _Precomputed(
        bs_x=np.array([s.bs_position[0] for s in sectors]),
        bs_y=np.array([s.bs_position[1] for s in sectors]),
        boresight=np.array([s.boresight_azimuth for s in sectors]),
        bbox=np.array([s.bounding_box() for s in sectors]),
        apothem=sectors[0].apothem,
        height_diff=profile.bs_antenna_height - profile.ue_height,
        pattern=antenna.pattern_params(profile),
        pl_coeffs=path_loss_coefficients(profile),
        log_f_ghz=math.log10(profile.carrier_frequency_ghz),
        ptx_dbm=effective_tx_power(profile),
        ptx_watt=dbm_to_watt(effective_tx_power(profile)),
        noise_dbm=channel.noise_floor(profile),
        bandwidth=profile.bandwidth,
        sar_factor=config.tissue.boundary_sar_factor,
        num_sectors=len(sectors),
    )


_HEX_AXES = np.array([[1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0], [-0.5, math.sqrt(3.0) / 2.0]])


def _sample_drop_positions(pre: _Precomputed, ues_per_sector: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Uniform positions, `ues_per_sector` per sector, as an (S*n, 2) array."""
    sector_of_row = np.repeat(np.arange(pre.num_sectors), ues_per_sector)
    lo_x = pre.bbox[sector_of_row, 0]
    lo_y = pre.bbox[sector_of_row, 1]
    hi_x = pre.bbox[sector_of_row, 2]
    hi_y = pre.bbox[sector_of_row, 3]
    cx = pre.bs_x[sector_of_row]
    cy = pre.bs_y[sector_of_row]
    bore = pre.boresight[sector_of_row]

    rows = sector_of_row.size
    pos = np.empty((rows, 2))
    unfilled = np.arange(rows)
    for _ in range(10_000):
        xs = rng.uniform(lo_x[unfilled], hi_x[unfilled])
        ys = rng.uniform(lo_y[unfilled], hi_y[unfilled])
        rx = xs - cx[unfilled]
        ry = ys - cy[unfilled]
        ok = np.ones(unfilled.size, dtype=bool)
        for ux, uy in _HEX_AXES:
            ok &= np.abs(rx * ux + ry * uy) <= pre.apothem + 1e-9
        ang = wrap_angle_deg(np.degrees(np.arctan2(ry, rx)) - bore[unfilled])
        ok &= (ang >= -60.0) & (ang < 60.0)
        good = unfilled[ok]
        pos[good, 0] = xs[ok]
        pos[good, 1] = ys[ok]
        unfilled = unfilled[~ok]
        if unfilled.size == 0:
            return pos
    raise RuntimeError("rejection sampling failed to fill all sector regions")


def _link_matrices(pre: _Precomputed, positions: np.ndarray):
    """PD (W/m^2) and RSS (dBm) from every sector to every UE, shape (U, S)."""
    dx = positions[:, 0:1] - pre.bs_x[None, :]
    dy = positions[:, 1:2] - pre.bs_y[None, :]
    d2 = np.maximum(np.hypot(dx, dy), MIN_DISTANCE_2D)
    d3 = np.hypot(d2, pre.height_diff)
    az_off = wrap_angle_deg(np.degrees(np.arctan2(dy, dx)) - pre.boresight[None, :])
    el_off = np.degrees(np.arctan2(pre.height_diff, d2))
    g = pre.pattern.g_max - antenna.attenuation(pre.pattern, az_off, el_off)
    c0, c1, c2 = pre.pl_coeffs
    pl = c0 + c1 * np.log10(d3) + c2 * pre.log_f_ghz
    rss = pre.ptx_dbm + g - pl
    pd = pre.ptx_watt * db_to_linear(g) / (4.0 * math.pi * d3 * d3)
    return pd, rss


def _select(policy: str, gamma: float, pd: np.ndarray, rss: np.ndarray):
    """Vectorized attachment: serving column per UE plus outage mask.

    Mirrors `protocol.select_baseline` / `protocol.select_constrained`:
    highest RSS (first, i.e. lowest sector id, on ties), restricted to
    pd < gamma under the constrained policy.
    """
    if policy == "baseline":
        serving = np.argmax(rss, axis=1)
        outage = np.zeros(rss.shape[0], dtype=bool)
    else:
        admissible = pd < gamma
        outage = ~admissible.any(axis=1)
        masked = np.where(admissible, rss, -np.inf)
        serving = np.argmax(masked, axis=1)
    return serving, outage


def _simulate_drop(pre: _Precomputed, config: RunConfig, drop_index: int):
    """One drop: returns (pd_served, sar_served, rate_all, outage_count, total)."""
    rng = np.random.default_rng(config.seed ^ drop_index)
    positions = _sample_drop_positions(pre, config.ues_per_sector, rng)
    pd, rss = _link_matrices(pre, positions)

    if config.center_only:
        home_site = np.repeat(np.arange(pre.num_sectors) // 3, config.ues_per_sector)
        keep = home_site == 0
        positions, pd, rss = positions[keep], pd[keep], rss[keep]

    serving, outage = _select(config.policy, config.gamma, pd, rss)
    rows = np.arange(pd.shape[0])
    served = ~outage

    pd_served = pd[rows[served], serving[served]]
    sar_served = pd_served * pre.sar_factor
    snr_served = rss[rows[served], serving[served]] - pre.noise_dbm
    rate = np.zeros(pd.shape[0])
    rate[served] = pre.bandwidth * np.log1p(db_to_linear(snr_served)) / math.log(2.0)
    return pd_served, sar_served, rate, int(outage.sum()), int(pd.shape[0])


def _run_drop_range(config: RunConfig, bounds: tuple[int, int]):
    pre = _precompute(config)
    lo, hi = bounds
    return [_simulate_drop(pre, config, k) for k in range(lo, hi)]


def run_drops(config: RunConfig) -> RunResult:
    """Run the full Monte Carlo campaign described by `config`."""
    if config.workers == 1:
        batches = [_run_drop_range(config, (0, config.num_drops))]
    else:
        w = min(config.workers, config.num_drops)
        edges = np.linspace(0, config.num_drops, w + 1).astype(int)
        bounds = [(int(edges[i]), int(edges[i + 1])) for i in range(w)]
        with ProcessPoolExecutor(max_workers=w) as pool:
            batches = list(pool.map(partial(_run_drop_range, config), bounds))

    pd_parts, sar_parts, rate_parts = [], [], []
    outage_total = 0
    ue_total = 0
    for batch in batches:
        for pd_served, sar_served, rate, n_outage, n_total in batch:
            pd_parts.append(pd_served)
            sar_parts.append(sar_served)
            rate_parts.append(rate)
            outage_total += n_outage
            ue_total += n_total

    pd_all = np.concatenate(pd_parts)
    sar_all = np.concatenate(sar_parts)
    rate_all = np.concatenate(rate_parts)
    served = ue_total - outage_total
    return RunResult(
        config=config,
        distributions={
            "pd": EmpiricalDistribution(pd_all, "pd"),
            "sar": EmpiricalDistribution(sar_all, "sar"),
            "rate": EmpiricalDistribution(rate_all, "rate"),
        },
        outage_fraction=outage_total / ue_total,
        mean_handovers=0.0,  # static drops: one search cycle, no serving changes
        total_ues=ue_total,
        served_ues=served,
    )


@dataclass
class SweepResult:
    """Mean exposure versus BS-UE ground distance for one profile."""

    profile: SystemProfile
    distances: np.ndarray      # m
    mean_pd: np.ndarray        # W/m^2
    stderr_pd: np.ndarray
    mean_sar: np.ndarray       # W/kg
    stderr_sar: np.ndarray

    def crossing_distance(self, limit: float) -> float | None:
        """First swept distance where mean PD drops below `limit`.

        Linear interpolation between the bracketing grid points; the first
        grid point is returned when the curve starts below the limit, None
        when it never drops below.
        """
        below = self.mean_pd < limit
        if not below.any():
            return None
        i = int(np.argmax(below))
        if i == 0:
            return float(self.distances[0])
        d0, d1 = self.distances[i - 1], self.distances[i]
        p0, p1 = self.mean_pd[i - 1], self.mean_pd[i]
        return float(d0 + (p0 - limit) * (d1 - d0) / (p0 - p1))


def distance_sweep(profile: SystemProfile, distances,
                   samples_per_distance: int = 2048, seed: int = 0,
                   tissue: TissueParams = TissueParams()) -> SweepResult:
    """Mean PD and SAR versus distance, averaged over azimuth within a sector.

    At each ground distance the UE azimuth is drawn uniformly over the
    120-degree wedge; PD comes from the transmitter-parameter route and SAR
    from the air-skin boundary conversion.
    """
    distances = np.asarray(distances, dtype=float)
    if distances.size == 0:
        raise ValueError("distance grid is empty")
    if np.any(~np.isfinite(distances)) or np.any(distances <= 0):
        raise ValueError("distances must be positive and finite")
    if np.any(distances > profile.hex_cell_radius + 1e-9):
        raise ValueError("distances must lie within the cell "
                         f"(radius {profile.hex_cell_radius:.1f} m)")
    if samples_per_distance < 1:
        raise ValueError("samples_per_distance must be >= 1")

    params = antenna.pattern_params(profile)
    ptx_watt = dbm_to_watt(effective_tx_power(profile))
    dh = profile.bs_antenna_height - profile.ue_height
    rng = np.random.default_rng(seed)

    mean_pd = np.empty_like(distances)
    stderr_pd = np.empty_like(distances)
    for i, d in enumerate(distances):
        d2 = max(d, MIN_DISTANCE_2D)
        az = rng.uniform(-60.0, 60.0, samples_per_distance)
        el = math.degrees(math.atan2(dh, d2))
        g = params.g_max - antenna.attenuation(params, az, el)
        d3 = math.hypot(d2, dh)
        pd = ptx_watt * db_to_linear(g) / (4.0 * math.pi * d3 * d3)
        mean_pd[i] = np.mean(pd)
        stderr_pd[i] = (np.std(pd, ddof=1) / math.sqrt(samples_per_distance)
                        if samples_per_distance > 1 else np.inf)

    factor = tissue.boundary_sar_factor
    return SweepResult(profile=profile, distances=distances,
                       mean_pd=mean_pd, stderr_pd=stderr_pd,
                       mean_sar=mean_pd * factor, stderr_sar=stderr_pd * factor)


def evaluate_link(profile: SystemProfile, sector: SectorGeometry, ue,
                  tissue: TissueParams = TissueParams(),
                  pattern: antenna.PatternParams | None = None) -> channel.LinkSample:
    """One (sector, UE) link evaluated through the scalar operation chain."""
    from . import exposure
    from .layout import link_geometry

    params = pattern if pattern is not None else antenna.pattern_params(profile)
    geom = link_geometry(sector, ue)
    pl = channel.path_loss(profile, geom)
    rss_dbm = channel.rss(profile, geom, params)
    snr_db = channel.snr(profile, rss_dbm)
    rate = channel.shannon_rate(profile, snr_db)
    pd = exposure.pd_from_link(profile, geom, params)
    return channel.LinkSample(sector_id=sector.sector_id, path_loss=pl,
                              rss=rss_dbm, snr=snr_db, rate=rate, pd=pd,
                              sar=exposure.sar_boundary(pd, tissue))


def build_candidate_reports(config: RunConfig,
                            positions: np.ndarray) -> list[list[protocol.CandidateReport]]:
    """Scalar-route view of a drop: per-UE candidate lists over all sectors.

    Composes the scalar operations link by link, independent of the
    vectorized matrices; slow, intended for tests and small batches.
    """
    from .layout import UeDrop

    sectors = build_layout(config.profile, config.num_rings)
    pattern = antenna.pattern_params(config.profile)
    reports = []
    for x, y in positions:
        ue = UeDrop(position=(float(x), float(y)), height=config.profile.ue_height,
                    home_sector=0)
        row = []
        for sector in sectors:
            link = evaluate_link(config.profile, sector, ue, config.tissue, pattern)
            row.append(protocol.CandidateReport(
                sector_id=link.sector_id, rss=link.rss, pd=link.pd,
                sar=link.sar, rate=link.rate))
        reports.append(row)
    return reports
