"""Command-line front end.

Two subcommands:

    emfsim simulate --profile 5g --policy constrained --gamma 10 \
        --drops 10000 --ues-per-sector 10 --seed 1 --out results/

    emfsim sweep --profile 5g --dmin 10 --dmax 100 --step 5 --out results/

A YAML config file (`--config run.yaml`) may supply any flag under its long
name (dashes become underscores); explicit flags override file values.  The
file may also carry nested `profile_overrides`, `tissue`, `limits` and
`path_loss_coefficients` sections; see the README for the schema.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np
import yaml

from .exposure import TissueParams
from .outputs import emit_run_outputs, emit_sweep_outputs
from .profiles import ExposureLimits, apply_overrides, builtin_profile
from .simulation import RunConfig, distance_sweep, run_drops

PROFILE_CHOICES = ("5g", "4g", "3.9g")

_SIM_DEFAULTS = dict(policy="baseline", gamma=10.0, drops=10_000, ues_per_sector=10,
                     seed=0, rings=None, center_only=False, no_plots=False,
                     workers=1, out=None, profile=None)
_SWEEP_DEFAULTS = dict(dmin=5.0, dmax=None, step=5.0, samples=2048, seed=0,
                       no_plots=False, out=None, profile=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emfsim",
        description="Downlink EMF exposure simulator: Monte Carlo drops, "
                    "distance sweeps and exposure-aware base-station selection.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo drop campaign with CDF outputs")
    sim.add_argument("--profile", choices=PROFILE_CHOICES)
    sim.add_argument("--policy", choices=("baseline", "constrained"))
    sim.add_argument("--gamma", type=float, help="PD threshold in W/m^2 (default 10)")
    sim.add_argument("--drops", type=int, help="number of drops (default 10000)")
    sim.add_argument("--ues-per-sector", type=int, dest="ues_per_sector")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="output directory")
    sim.add_argument("--rings", type=int, choices=(0, 1, 2),
                     help="hex rings around the center site (default per profile)")
    sim.add_argument("--center-only", action="store_true", default=None,
                     dest="center_only", help="statistics over the center site only")
    sim.add_argument("--no-plots", action="store_true", default=None, dest="no_plots")
    sim.add_argument("--workers", type=int, help="parallel drop workers (default 1)")
    sim.add_argument("--config", help="YAML config file supplying any flag")

    swp = sub.add_parser("sweep", help="mean PD/SAR versus BS-UE distance")
    swp.add_argument("--profile", choices=PROFILE_CHOICES)
    swp.add_argument("--dmin", type=float, help="first distance in m (default 5)")
    swp.add_argument("--dmax", type=float, help="last distance in m (default: cell edge)")
    swp.add_argument("--step", type=float, help="grid step in m (default 5)")
    swp.add_argument("--samples", type=int, help="azimuth samples per distance")
    swp.add_argument("--seed", type=int)
    swp.add_argument("--out", help="output directory")
    swp.add_argument("--no-plots", action="store_true", default=None, dest="no_plots")
    swp.add_argument("--config", help="YAML config file supplying any flag")
    return parser


def _load_config_file(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError("config file must contain a mapping")
    return data


def _merge(args: argparse.Namespace, defaults: dict) -> dict:
    """Flag > config file > builtin default."""
    file_cfg = _load_config_file(args.config) if args.config else {}
    merged = {}
    for key, default in defaults.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
        elif key in file_cfg and file_cfg[key] is not None:
            merged[key] = file_cfg[key]
        else:
            merged[key] = default
    for section in ("profile_overrides", "tissue", "limits", "path_loss_coefficients"):
        merged[section] = file_cfg.get(section) or {}
    return merged


def _build_profile(merged: dict):
    if merged["profile"] is None:
        raise ValueError("--profile is required (flag or config file)")
    profile = builtin_profile(str(merged["profile"]))
    if merged["profile_overrides"]:
        profile = apply_overrides(profile, merged["profile_overrides"])
    return profile


def _run_simulate(args: argparse.Namespace) -> int:
    merged = _merge(args, _SIM_DEFAULTS)
    if merged["out"] is None:
        raise ValueError("--out is required (flag or config file)")
    profile = _build_profile(merged)
    tissue = TissueParams(**merged["tissue"]) if merged["tissue"] else TissueParams()
    limits = ExposureLimits(**merged["limits"]) if merged["limits"] else ExposureLimits()
    config = RunConfig(
        profile=profile,
        num_drops=int(merged["drops"]),
        ues_per_sector=int(merged["ues_per_sector"]),
        policy=str(merged["policy"]),
        gamma=float(merged["gamma"]),
        seed=int(merged["seed"]),
        num_rings=merged["rings"],
        center_only=bool(merged["center_only"]),
        tissue=tissue,
        limits=limits,
        workers=int(merged["workers"]),
        out_dir=str(merged["out"]),
        make_plots=not merged["no_plots"],
    )
    result = run_drops(config)
    written = emit_run_outputs(result, config.out_dir)
    print(f"wrote {len(written)} files to {config.out_dir}")
    return 0


def _run_sweep(args: argparse.Namespace) -> int:
    merged = _merge(args, _SWEEP_DEFAULTS)
    if merged["out"] is None:
        raise ValueError("--out is required (flag or config file)")
    profile = _build_profile(merged)
    tissue = TissueParams(**merged["tissue"]) if merged["tissue"] else TissueParams()
    limits = ExposureLimits(**merged["limits"]) if merged["limits"] else ExposureLimits()
    dmin = float(merged["dmin"])
    dmax = float(merged["dmax"]) if merged["dmax"] is not None else profile.hex_cell_radius
    step = float(merged["step"])
    if dmin <= 0 or dmax < dmin or step <= 0:
        raise ValueError("require 0 < dmin <= dmax and step > 0")
    distances = np.arange(dmin, dmax + 1e-9, step)
    result = distance_sweep(profile, distances,
                            samples_per_distance=int(merged["samples"]),
                            seed=int(merged["seed"]), tissue=tissue)
    written = emit_sweep_outputs([result], limits, merged["out"],
                                 make_plots=not merged["no_plots"])
    print(f"wrote {len(written)} files to {merged['out']}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        return _run_sweep(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
