#!/usr/bin/env python3
"""Produce the full set of exposure figures and tables in one go.

Distance profiles (mean PD and SAR versus BS-UE distance) for the three
deployments, plus baseline-versus-constrained CDFs of PD, SAR and data rate
for the 5G deployment over the 19-site layout.

Example:
    python scripts/make_figures.py --out results/ --drops 10000
"""

import argparse
import json
from pathlib import Path

import numpy as np

from emfsim.outputs import (plot_cdfs, plot_sweeps, run_summary, sweep_summary,
                            write_cdf_csv, write_summary, write_sweep_csv)
from emfsim.profiles import ExposureLimits, builtin_profile
from emfsim.simulation import RunConfig, distance_sweep, run_drops


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--drops", type=int, default=10_000)
    ap.add_argument("--ues-per-sector", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--gamma", type=float, default=10.0)
    ap.add_argument("--sweep-samples", type=int, default=20_000)
    ap.add_argument("--no-plots", action="store_true")
    return ap.parse_args()


def main():
    args = parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    limits = ExposureLimits()

    # distance profiles, one sweep per deployment over its own cell
    sweeps = []
    for gen in ("5g", "4g", "3.9g"):
        profile = builtin_profile(gen)
        edge = profile.hex_cell_radius
        distances = np.arange(2.0, edge - 1e-9, max(edge / 120.0, 1.0))
        res = distance_sweep(profile, distances,
                             samples_per_distance=args.sweep_samples, seed=args.seed)
        sweeps.append(res)
        write_sweep_csv(res, out / f"sweep_{gen.replace('.', '_')}.csv")
        crossing = res.crossing_distance(limits.pd_limit)
        peak = res.mean_pd.max()
        if peak < limits.pd_limit:
            note = f"stays below the {limits.pd_limit} W/m^2 guideline everywhere"
        else:
            note = f"crosses {limits.pd_limit} W/m^2 at {crossing:.1f} m"
        print(f"{gen}: mean PD peak {peak:.3g} W/m^2, {note}")
    write_summary(sweep_summary(sweeps, limits), out / "sweep_summary.json")
    if not args.no_plots:
        plot_sweeps(sweeps, "pd", limits.pd_limit, out / "sweep_pd.svg")
        plot_sweeps(sweeps, "sar", limits.sar_limit, out / "sweep_sar.svg")

    # 5G drop campaigns, baseline versus constrained
    results = {}
    for policy in ("baseline", "constrained"):
        cfg = RunConfig(profile=builtin_profile("5g"), num_drops=args.drops,
                        ues_per_sector=args.ues_per_sector, policy=policy,
                        gamma=args.gamma, seed=args.seed, make_plots=False)
        res = run_drops(cfg)
        results[policy] = res
        for metric, dist in res.distributions.items():
            write_cdf_csv(dist, out / f"cdf_{metric}_{policy}.csv")
        write_summary(run_summary(res), out / f"summary_{policy}.json")
        print(f"5g {policy}: outage {res.outage_fraction:.4f}, "
              f"rate p01/p99 {res.distributions['rate'].quantile(0.01) / 1e9:.2f}/"
              f"{res.distributions['rate'].quantile(0.99) / 1e9:.2f} Gbit/s, "
              f"PD > {limits.pd_limit} W/m^2 fraction "
              f"{res.distributions['pd'].exceedance(limits.pd_limit):.4f}")

    if not args.no_plots:
        for metric, limit in (("pd", limits.pd_limit), ("sar", limits.sar_limit),
                              ("rate", None)):
            plot_cdfs({p: r.distributions[metric] for p, r in results.items()},
                      metric, out / f"cdf_{metric}.svg", limit=limit,
                      log_x=metric != "rate")
    print(f"outputs in {out}/")


if __name__ == "__main__":
    main()
