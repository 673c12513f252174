"""File outputs: CSV tables, JSON summaries and optional SVG figures.

Float cells are written with `repr`, the shortest exact decimal form, so a
re-run with the same seed reproduces every file byte for byte.  Plots are
rendered with the non-interactive matplotlib backend and are skipped
entirely when disabled, keeping headless runs CSV-only.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .profiles import ExposureLimits
from .simulation import EmpiricalDistribution, RunResult, SweepResult

# ECDF files above this many samples are thinned to an even order-statistic
# grid (first and last points always kept) to keep file sizes sane.
MAX_CDF_ROWS = 4096


def _fmt(x) -> str:
    return repr(float(x))


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["distance_m", "mean_pd_w_m2", "stderr_pd",
                         "mean_sar_w_kg", "stderr_sar"])
        for i in range(result.distances.size):
            writer.writerow([_fmt(result.distances[i]),
                             _fmt(result.mean_pd[i]), _fmt(result.stderr_pd[i]),
                             _fmt(result.mean_sar[i]), _fmt(result.stderr_sar[i])])


def write_cdf_csv(dist: EmpiricalDistribution, path) -> None:
    """Write the ECDF as (value, cdf) rows; the final row always has cdf 1.0."""
    n = dist.count
    if n <= MAX_CDF_ROWS:
        ks = np.arange(1, n + 1)
    else:
        ks = np.unique(np.linspace(1, n, MAX_CDF_ROWS).round().astype(int))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "cdf"])
        for k in ks:
            writer.writerow([_fmt(dist.values[k - 1]), _fmt(k / n)])


def run_summary(result: RunResult) -> dict:
    """Structured report: exceedance fractions, rate quantiles, outage."""
    cfg = result.config
    limits = cfg.limits
    dists = result.distributions
    rate = dists["rate"]
    summary = {
        "profile": cfg.profile.generation.value,
        "policy": cfg.policy,
        "gamma_w_m2": cfg.gamma,
        "num_drops": cfg.num_drops,
        "ues_per_sector": cfg.ues_per_sector,
        "seed": cfg.seed,
        "center_only": cfg.center_only,
        "total_ues": result.total_ues,
        "served_ues": result.served_ues,
        "outage_fraction": result.outage_fraction,
        "mean_handovers": result.mean_handovers,
        "metrics": {name: dist.summary() for name, dist in dists.items()},
        "pd_exceedance_fraction": dists["pd"].exceedance(limits.pd_limit),
        "sar_exceedance_fraction": dists["sar"].exceedance(limits.sar_limit),
        "pd_limit_w_m2": limits.pd_limit,
        "sar_limit_w_kg": limits.sar_limit,
        "rate_p01_bps": rate.quantile(0.01),
        "rate_p99_bps": rate.quantile(0.99),
        "spectral_efficiency_p01": rate.quantile(0.01) / cfg.profile.bandwidth,
        "spectral_efficiency_p99": rate.quantile(0.99) / cfg.profile.bandwidth,
        "max_served_pd_w_m2": float(dists["pd"].values[-1]) if dists["pd"].count else None,
    }
    return summary


def sweep_summary(results: list[SweepResult], limits: ExposureLimits) -> dict:
    per_gen = {}
    for res in results:
        crossing = res.crossing_distance(limits.pd_limit)
        peak = float(res.mean_pd.max())
        per_gen[res.profile.generation.value] = {
            "distance_range_m": [float(res.distances[0]), float(res.distances[-1])],
            "pd_crossing_distance_m": crossing,
            "pd_limit_w_m2": limits.pd_limit,
            "mean_pd_peak_w_m2": peak,
            "mean_pd_exceeds_limit_somewhere": bool(peak >= limits.pd_limit),
            "mean_pd_at_min_distance": float(res.mean_pd[0]),
            "mean_pd_at_max_distance": float(res.mean_pd[-1]),
            "mean_sar_at_min_distance": float(res.mean_sar[0]),
            "mean_sar_at_max_distance": float(res.mean_sar[-1]),
        }
    return {"sweeps": per_gen}


def write_summary(summary: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def plot_sweeps(results: list[SweepResult], metric: str, limit: float, path) -> None:
    """Distance profile figure for mean PD or SAR, one curve per profile."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.4))
    for res in results:
        y = res.mean_pd if metric == "pd" else res.mean_sar
        ax.semilogy(res.distances, y, label=res.profile.generation.value)
    ax.axhline(limit, color="gray", ls=":", lw=1, label="guideline")
    ax.set_xlabel("BS-UE distance [m]")
    ax.set_ylabel("mean PD [W/m$^2$]" if metric == "pd" else "mean SAR [W/kg]")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_cdfs(dists: dict[str, EmpiricalDistribution], metric: str, path,
              limit: float | None = None, log_x: bool = False) -> None:
    """Empirical CDF figure; one curve per labelled distribution."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.4))
    for label, dist in dists.items():
        n = dist.count
        step = max(n // 2000, 1)
        xs = dist.values[::step]
        ys = (np.arange(1, n + 1) / n)[::step]
        if log_x:
            ax.semilogx(xs, ys, label=label)
        else:
            ax.plot(xs, ys, label=label)
    if limit is not None:
        ax.axvline(limit, color="gray", ls=":", lw=1)
    ax.set_xlabel(metric)
    ax.set_ylabel("CDF")
    ax.set_ylim(0, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def emit_run_outputs(result: RunResult, out_dir) -> list[Path]:
    """Write CDF CSVs, summary.json and (optionally) CDF figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    policy = result.config.policy
    for metric, dist in result.distributions.items():
        path = out / f"cdf_{metric}_{policy}.csv"
        write_cdf_csv(dist, path)
        written.append(path)
    summary_path = out / "summary.json"
    write_summary(run_summary(result), summary_path)
    written.append(summary_path)
    if result.config.make_plots:
        limits = result.config.limits
        limit_of = {"pd": limits.pd_limit, "sar": limits.sar_limit, "rate": None}
        for metric, dist in result.distributions.items():
            path = out / f"cdf_{metric}_{policy}.svg"
            plot_cdfs({policy: dist}, metric, path, limit=limit_of[metric],
                      log_x=metric in ("pd", "sar"))
            written.append(path)
    return written


def emit_sweep_outputs(results: list[SweepResult], limits: ExposureLimits,
                       out_dir, make_plots: bool = True) -> list[Path]:
    """Write sweep CSVs, summary.json and (optionally) distance-profile figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for res in results:
        tag = res.profile.generation.value.replace(".", "_")
        path = out / f"sweep_{tag}.csv"
        write_sweep_csv(res, path)
        written.append(path)
    summary_path = out / "summary.json"
    write_summary(sweep_summary(results, limits), summary_path)
    written.append(summary_path)
    if make_plots:
        for metric, limit in (("pd", limits.pd_limit), ("sar", limits.sar_limit)):
            path = out / f"sweep_{metric}.svg"
            plot_sweeps(results, metric, limit, path)
            written.append(path)
    return written
