#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Run the preset experiments shipped with the package and write one table per
experiment in the output directory (<preset>_<experiment id>.csv).


Examples
--------
Run every preset with reduced sample sizes

    python run_presets.py --outdir=results --samples=100000 --workers=8 --verbose


Run two presets only

    python run_presets.py --presets=gm-blocking-fixed-mean,preemption-fixed-mean --outdir=results
"""

import os
import time
import argparse
from aoi_explorer import experiments, utils

# Argument parsing
# ----------------
parser = argparse.ArgumentParser(prog="run_presets")
parser.add_argument("--outdir", help="Output directory", default="aoi-results")
parser.add_argument(
    "--presets",
    help=f"Comma-separated preset names (default: all of {experiments.list_presets()})",
    default="all",
)
parser.add_argument("--seed", help="Root seed", type=int)
parser.add_argument("--samples", help="Number of Monte Carlo samples", type=int)
parser.add_argument("--cycles", help="Number of simulated cycles", type=int)
parser.add_argument("--format", help="Output format (csv, json)", default="csv")
parser.add_argument("--workers", help="Number of processes", type=int, default=utils.default_workers())
parser.add_argument("--overwrite", help="Run presets whose tables already exist", action="store_true")
parser.add_argument("--verbose", help="Trigger verbose mode", action="store_true")
args = parser.parse_args()

if args.presets == "all":
    presets = experiments.list_presets()
else:
    presets = args.presets.split(",")

mc_overrides = {"samples": args.samples, "seed": args.seed}
sim_overrides = {"cycles": args.cycles, "seed": args.seed}
os.makedirs(args.outdir, exist_ok=True)

start = time.time()
for i, name in enumerate(presets):
    preset = experiments.load_preset(name)
    paths = [os.path.join(args.outdir, f"{name}_{e.id}.{args.format}") for e in preset.experiments]
    if all(os.path.isfile(p) for p in paths) and not args.overwrite:
        print(f"[{i}/{len(presets)}] Preset {name} already written. Skipped")
        continue

    tables = experiments.run_preset(name, mc_overrides, sim_overrides, args.workers, args.verbose)
    for path, table in zip(paths, tables.values()):
        experiments.write_table(table, path, args.format)

    print(f"[{i}/{len(presets)}] Preset {name} written in {args.outdir}")

stop = time.time()
print(f"Total elapsed time: {round(stop-start, 1)} s")
