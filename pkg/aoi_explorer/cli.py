#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Command line interface.


Examples
--------
Closed form of the M/M/1/1 age with blocking

    aoi-explorer age --discipline=blocking --arrival=exp:rate=1 --service=exp:rate=1


Upper bounds for gamma interarrivals and deterministic services

    aoi-explorer bound --arrival=gamma:shape=2,rate=2 --service=det:value=0.5


Sweep of the interarrival rate, in JSON

    aoi-explorer sweep --discipline=preemption --arrival=gamma:shape=1,rate=1 --service=gamma:shape=2,rate=2 --param1=arrival.rate=0.5:16:x2 --evaluators=exact,bounds --format=json


Run a preset and write its tables in a directory

    aoi-explorer preset gm-blocking-fixed-mean --out=results --workers=4 --verbose


Exit codes
----------
0 success, 2 configuration error, 3 consistency failure (validate), 4
partial simulation result.
"""

import argparse
import os
import sys

import easydict
import pandas as pd

from aoi_explorer import DISCIPLINES, WORKERS_ENVVAR, __version__, experiments, simulator, utils
from aoi_explorer.models import AoIError, ConfigurationError, PartialResultError, QueueModel

EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_CONSISTENCY = 3
EXIT_PARTIAL = 4

ESTIMATE_COLUMNS = ["evaluator", "age", "std_err", "method", "terms_used", "flags"]


# ARGUMENT PARSING
# ================


def _add_common(parser):
    parser.add_argument("--config", help="YAML or JSON document describing the experiment")
    parser.add_argument("--seed", help="Root seed of every random stream", type=int)
    parser.add_argument("--samples", help="Number of Monte Carlo samples", type=int)
    parser.add_argument("--cycles", help="Number of simulated cycles per replication", type=int)
    parser.add_argument("--format", help="Output format (csv, json)", default="csv", choices=["csv", "json"])
    parser.add_argument("--out", help="Output file (directory for presets). Default is stdout")
    parser.add_argument(
        "--workers",
        help=f"Number of processes (default: ${WORKERS_ENVVAR} or number of physical cores)",
        type=int,
    )
    parser.add_argument("--verbose", help="Trigger verbose mode", action="store_true")


def _add_model(parser):
    parser.add_argument("--discipline", help=f"Queue discipline {DISCIPLINES}")
    parser.add_argument("--arrival", help="Interarrival distribution (ex: gamma:shape=2,rate=1)")
    parser.add_argument("--service", help="Service distribution (ex: exp:rate=2)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aoi-explorer",
        description="Average age of information of G/G/1/1 queues with blocking or preemption in service",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    age = subparsers.add_parser("age", help="Exact average age")
    _add_model(age)
    age.add_argument("--evaluator", help="Exact evaluator(s), comma separated", default="auto")

    bound = subparsers.add_parser("bound", help="Upper bounds of the average age")
    _add_model(bound)
    bound.add_argument("--evaluator", help="Bound evaluator(s), comma separated", default="bounds")

    sim = subparsers.add_parser("sim", help="Average age by simulation")
    _add_model(sim)
    sim.add_argument("--replications", help="Number of independent replications", type=int)
    sim.add_argument("--dump", help="CSV file receiving the cycle records of the first replication")

    sweep = subparsers.add_parser("sweep", help="Sweep of one or two distribution parameters")
    _add_model(sweep)
    sweep.add_argument("--param1", help="Swept parameter and grid (ex: arrival.rate=0.5:16:x2)")
    sweep.add_argument("--param2", help="Second swept parameter and grid (ex: service.shape=1,2,4)")
    sweep.add_argument("--evaluators", help="Evaluators or groups (exact, bounds, simulation)")

    compare = subparsers.add_parser("compare", help="Compare interarrival distributions at fixed mean")
    compare.add_argument("--discipline", help=f"Queue discipline {DISCIPLINES}")
    compare.add_argument("--candidates", help="Candidate families (ex: det,gamma:shape=2,exp)")
    compare.add_argument("--service", help="Service distribution")
    compare.add_argument("--means", help="Grid of mean interarrival times (ex: 0.2:3:10)")
    compare.add_argument("--evaluator", help="Evaluator of every candidate")

    truncation = subparsers.add_parser("truncation", help="Convergence of the blocking sums")
    truncation.add_argument("--arrival", help="Interarrival distribution")
    truncation.add_argument("--service", help="Service distribution")
    truncation.add_argument("--k-values", dest="k_values", help="Numbers of terms (ex: 1:20:20)")

    validate = subparsers.add_parser("validate", help="Check every evaluator against the simulation")
    _add_model(validate)

    preset = subparsers.add_parser("preset", help="Run a preset experiment")
    preset.add_argument("name", nargs="?", help="Preset name")
    preset.add_argument("--list", help="List the available presets", action="store_true")

    for subparser in [age, bound, sim, sweep, compare, truncation, validate, preset]:
        _add_common(subparser)

    return parser


# COMMANDS
# ========


def _config(args, keys):
    """Config document from --config, overridden by the command line"""
    cfg = experiments.load_config(args.config) if args.config else easydict.EasyDict()
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _model(cfg):
    for key in ("arrival", "service"):
        if key not in cfg:
            raise ConfigurationError(f"Missing --{key}")

    return QueueModel(
        experiments.parse_distribution(cfg.arrival, "arrival"),
        experiments.parse_distribution(cfg.service, "service"),
        cfg.get("discipline", "blocking"),
    )


def _overrides(args):
    mc = {"samples": args.samples, "seed": args.seed}
    sim = {"cycles": args.cycles, "seed": args.seed, "replications": getattr(args, "replications", None)}
    return mc, sim


def _output(table, args):
    text = experiments.write_table(table, args.out, args.format)
    if args.out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _estimates(cfg, names, args, kind):
    """Table of estimates of the evaluators `names`, all of the given kind"""
    mc_overrides, sim_overrides = _overrides(args)
    mc = experiments.mc_from_config(cfg.get("mc"), **mc_overrides)
    sim = experiments.sim_from_config(cfg.get("sim"), **sim_overrides)
    model = _model(cfg)
    names = experiments.resolve_evaluators(model.discipline, names, model.arrival, model.service)
    wrong = [n for n in names if experiments.evaluator_kind(model.discipline, n) != kind]
    if wrong:
        raise ConfigurationError(f"Only {kind} evaluators are accepted here (got {wrong})")

    rows = []
    for name in names:
        estimate = experiments.evaluate(name, model, mc, sim)
        rows.append(
            [name, estimate.age, estimate.std_error, estimate.method, estimate.terms_used, ";".join(estimate.flags)]
        )
        if args.verbose:
            print(f"{model}: {name} = {estimate}", file=sys.stderr)

    return pd.DataFrame(rows, columns=ESTIMATE_COLUMNS)


def command_age(args):
    cfg = _config(args, ["discipline", "arrival", "service", "evaluator"])
    names = experiments.as_list(cfg.get("evaluator", "auto"))
    _output(_estimates(cfg, names, args, "exact"), args)
    return EXIT_OK


def command_bound(args):
    cfg = _config(args, ["discipline", "arrival", "service", "evaluator"])
    names = experiments.as_list(cfg.get("evaluator", "bounds"))
    _output(_estimates(cfg, names, args, "bound"), args)
    return EXIT_OK


def command_sim(args):
    cfg = _config(args, ["discipline", "arrival", "service", "dump"])
    _, sim_overrides = _overrides(args)
    sim = experiments.sim_from_config(cfg.get("sim"), **sim_overrides)
    model = _model(cfg)
    workers = args.workers if args.workers is not None else utils.default_workers()
    estimate = simulator.simulate_age(model, sim, workers, args.verbose, dump=cfg.get("dump"))
    table = pd.DataFrame(
        [["sim", estimate.age, estimate.std_error, estimate.method, 0, ""]], columns=ESTIMATE_COLUMNS
    )
    _output(table, args)
    return EXIT_OK


def _run(cfg, args, kind):
    cfg.kind = kind
    mc_overrides, sim_overrides = _overrides(args)
    workers = args.workers if args.workers is not None else utils.default_workers()
    return experiments.run_experiment(cfg, mc_overrides, sim_overrides, workers, args.verbose)


def command_sweep(args):
    cfg = _config(args, ["discipline", "arrival", "service", "param1", "param2", "evaluators"])
    _output(_run(cfg, args, "sweep"), args)
    return EXIT_OK


def command_compare(args):
    cfg = _config(args, ["discipline", "candidates", "service", "means", "evaluator"])
    table = _run(cfg, args, "compare")
    _output(table, args)
    if args.verbose:
        for before, after, old, new in experiments.argmin_switches(table):
            print(f"Optimum switches from {old} to {new} between means {before} and {after}", file=sys.stderr)
    return EXIT_OK


def command_truncation(args):
    cfg = _config(args, ["arrival", "service", "k_values"])
    _output(_run(cfg, args, "truncation"), args)
    return EXIT_OK


def command_validate(args):
    cfg = _config(args, ["discipline", "arrival", "service"])
    table = _run(cfg, args, "validate")
    _output(table, args)
    if not table.ok.all():
        print(f"Consistency failure: {list(table.evaluator[~table.ok])}", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


def command_preset(args):
    if args.list or args.name is None:
        for name in experiments.list_presets():
            print(f"{name}: {experiments.load_preset(name).get('description', '')}")
        return EXIT_OK

    mc_overrides, sim_overrides = _overrides(args)
    workers = args.workers if args.workers is not None else utils.default_workers()
    tables = experiments.run_preset(args.name, mc_overrides, sim_overrides, workers, args.verbose)
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)

    for exp_id, table in tables.items():
        if args.out is None:
            print(f"# {args.name}/{exp_id}")
            _output(table, easydict.EasyDict(out=None, format=args.format))
        else:
            path = os.path.join(args.out, f"{args.name}_{exp_id}.{args.format}")
            experiments.write_table(table, path, args.format)
            if args.verbose:
                print(f"Written {path}")
    return EXIT_OK


COMMANDS = {
    "age": command_age,
    "bound": command_bound,
    "sim": command_sim,
    "sweep": command_sweep,
    "compare": command_compare,
    "truncation": command_truncation,
    "validate": command_validate,
    "preset": command_preset,
}


def main(argv=None):
    """Run the command line and return the exit code"""
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except PartialResultError as e:
        print(f"Partial result: {e}", file=sys.stderr)
        return EXIT_PARTIAL
    except (AoIError, ValueError, KeyError) as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIGURATION


if __name__ == "__main__":
    sys.exit(main())

# EOF
