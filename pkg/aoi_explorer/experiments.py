#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Experiment drivers: parameter sweeps, comparisons of interarrival
distributions at fixed mean, truncation-convergence reports and
consistency checks against the simulator. Every driver returns a
`pandas.DataFrame` and is deterministic given its seeds.


Evaluators
----------
Evaluators are referred to by name, per discipline:
    blocking:   auto, gg, gm, gm-equiv, mg, lcg, lcm, decoupled, mlc, sim
    preemption: auto, gg, gm, mg, pbound, sim
`auto` picks the closed form when there is one. Groups expand to several
evaluators: `exact` (auto), `bounds` (every bound applicable to the
distributions) and `simulation` (sim).


Configuration
-------------
Experiments are described in YAML (or JSON) documents, for example:
    kind: sweep
    discipline: blocking
    arrival: gamma:shape=2,rate=1
    service: exp:rate=2
    param1: arrival.rate=0.5:16:x2
    param2: arrival.shape=0.5,1,2,4
    evaluators: [exact, bounds]
    mc: {samples: 1000000, seed: 0}
    sim: {cycles: 100000, seed: 0}
Presets are shipped in the `data` directory of the package.
"""

import functools
import glob
import itertools
import os
import time
from dataclasses import dataclass, field

import easydict
import numpy as np
import pandas as pd
import yaml

from aoi_explorer import DISCIPLINES, PACKAGE_DIRECTORY, blocking, preemption, simulator, utils
from aoi_explorer.distributions import (
    FAMILIES,
    FAMILY_ALIASES,
    DistributionSpec,
    is_log_concave,
    moment,
    with_mean,
)
from aoi_explorer.models import ConfigurationError, MonteCarloConfig, QueueModel
from aoi_explorer.simulator import SimConfig

PRESETS_DIRECTORY = os.path.join(PACKAGE_DIRECTORY, "aoi_explorer", "data")

SWEEP_COLUMNS = ["param1", "param2", "evaluator", "age", "std_err", "terms_used", "flags"]

MEAN_TOLERANCE = 1e-9  # Relative tolerance on the common mean of compared candidates

Z_THRESHOLD = 4  # Maximum |z| between an exact evaluator and the simulation


# EVALUATORS
# ==========

# Evaluator name -> (kind, required exponential slot, function(Y, S, mc, sim))
EVALUATORS = {
    "blocking": {
        "auto": ("exact", None, lambda Y, S, mc, sim: blocking.age_blocking(Y, S, mc)),
        "gg": ("exact", None, lambda Y, S, mc, sim: blocking.age_gg_blocking(Y, S, mc)),
        "gm": ("exact", "service", lambda Y, S, mc, sim: blocking.age_gm_blocking(Y, S["rate"])),
        "gm-equiv": (
            "exact",
            "service",
            lambda Y, S, mc, sim: blocking.age_gm_blocking_equiv(Y, S["rate"], mc),
        ),
        "mg": ("exact", "arrival", lambda Y, S, mc, sim: blocking.age_mg_blocking(Y["rate"], S)),
        "lcg": ("bound", None, lambda Y, S, mc, sim: blocking.bound_lcg_blocking(Y, S, mc)),
        "lcm": ("bound", "service", lambda Y, S, mc, sim: blocking.bound_lcm_blocking(Y, S["rate"])),
        "decoupled": ("bound", None, lambda Y, S, mc, sim: blocking.bound_lcg_decoupled(Y, S)),
        "mlc": ("bound", None, lambda Y, S, mc, sim: blocking.bound_mlc_blocking(Y, S)),
        "sim": (
            "simulation",
            None,
            lambda Y, S, mc, sim: simulator.simulate_age(QueueModel(Y, S, "blocking"), sim),
        ),
    },
    "preemption": {
        "auto": ("exact", None, lambda Y, S, mc, sim: preemption.age_preemption(Y, S, mc)),
        "gg": ("exact", None, lambda Y, S, mc, sim: preemption.age_gg_preemption(Y, S, mc)),
        "gm": ("exact", "service", lambda Y, S, mc, sim: preemption.age_gm_preemption(Y, S["rate"])),
        "mg": ("exact", "arrival", lambda Y, S, mc, sim: preemption.age_mg_preemption(Y["rate"], S)),
        "pbound": ("bound", None, lambda Y, S, mc, sim: preemption.bound_gg_preemption(Y, S, mc)),
        "sim": (
            "simulation",
            None,
            lambda Y, S, mc, sim: simulator.simulate_age(QueueModel(Y, S, "preemption"), sim),
        ),
    },
}

GROUPS = {"exact": "exact", "bounds": "bound", "simulation": "simulation"}


def _applicable(requirement, arrival, service):
    if requirement == "service":
        return service.family == "exp"
    elif requirement == "arrival":
        return arrival.family == "exp"
    else:
        return True


def resolve_evaluators(discipline, names, arrival, service):
    """Expand evaluator groups and check that every evaluator applies

    Groups only keep the evaluators applicable to the distributions, while
    an explicitly named evaluator that does not apply is a configuration
    error.


    Examples
    --------
    >>> resolve_evaluators("blocking", ["exact", "bounds"], exponential(1), exponential(2))
    ['auto', 'lcg', 'lcm', 'decoupled', 'mlc']
    """
    if discipline not in EVALUATORS:
        raise ConfigurationError(f"Unknown discipline {discipline}. Please choose among {DISCIPLINES}")

    registry = EVALUATORS[discipline]
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",")]

    resolved = []
    for name in names:
        if name == "exact":
            expanded = ["auto"]
        elif name in GROUPS:
            expanded = [
                n
                for n, (kind, req, _) in registry.items()
                if kind == GROUPS[name] and _applicable(req, arrival, service)
            ]
        elif name in registry:
            kind, req, _ = registry[name]
            if not _applicable(req, arrival, service):
                raise ConfigurationError(
                    f"Evaluator {name} ({discipline}) needs exponential {req} times (got Y={arrival}, S={service})"
                )
            expanded = [name]
        else:
            raise ConfigurationError(
                f"Unknown evaluator {name} for {discipline}. Please choose among {list(registry) + list(GROUPS)}"
            )

        resolved += [n for n in expanded if n not in resolved]

    if len(resolved) == 0:
        raise ConfigurationError(f"No evaluator left in {names} for Y={arrival}, S={service}")

    return resolved


def evaluate(name, model, mc=None, sim=None):
    """Run the evaluator `name` on the queue model"""
    mc = mc or MonteCarloConfig()
    sim = sim or SimConfig()
    kind, requirement, func = EVALUATORS[model.discipline][name]
    if not _applicable(requirement, model.arrival, model.service):
        raise ConfigurationError(f"Evaluator {name} does not apply to {model}")

    return func(model.arrival, model.service, mc, sim)


def evaluator_kind(discipline, name):
    return EVALUATORS[discipline][name][0]


# SWEEPS
# ======


@dataclass(frozen=True)
class SweptParameter:
    """A distribution parameter taking the values of a grid

    Several targets share the same value (e.g. arrival.rate+service.rate).


    Examples
    --------
    >>> p = SweptParameter.parse("arrival.rate=1,2,4")
    >>> p.targets, p.grid
    (('arrival.rate',), (1.0, 2.0, 4.0))
    """

    targets: tuple
    grid: tuple

    def __post_init__(self):
        for target in self.targets:
            slot, _, name = target.partition(".")
            if slot not in ("arrival", "service") or name == "":
                raise ConfigurationError(
                    f"Swept parameters are written arrival.<name> or service.<name> (got '{target}')"
                )
        try:
            grid = utils.check_grid(self.grid, self.name)
        except ValueError as e:
            raise ConfigurationError(str(e))

        object.__setattr__(self, "grid", tuple(float(v) for v in grid))

    @property
    def name(self):
        return "+".join(self.targets)

    @classmethod
    def parse(cls, text):
        """Read `target[+target]=grid` (grid as in `utils.str_to_grid`)"""
        if isinstance(text, SweptParameter):
            return text
        if isinstance(text, dict):
            targets = text["targets"]
            grid = text["grid"]
        else:
            if "=" not in text:
                raise ConfigurationError(f"Swept parameters are written target=grid (got '{text}')")
            targets, grid = text.replace(" ", "").split("=", 1)

        if isinstance(targets, str):
            targets = targets.split("+")
        try:
            grid = utils.str_to_grid(grid)
        except ValueError as e:
            raise ConfigurationError(f"Could not read the grid of {targets}: {e}")

        return cls(tuple(t.lower() for t in targets), tuple(grid))

    def apply(self, arrival, service, value):
        """Set the parameter to `value` in the arrival and service distributions"""
        for target in self.targets:
            slot, _, name = target.partition(".")
            try:
                if slot == "arrival":
                    arrival = arrival.with_param(name, value)
                else:
                    service = service.with_param(name, value)
            except ValueError as e:
                raise ConfigurationError(str(e))

        return arrival, service


@dataclass(frozen=True)
class SweepSpec:
    """Sweep of one or two distribution parameters


    Parameters
    ----------
    discipline: str
        "blocking" or "preemption"

    arrival, service: `DistributionSpec`
        Base distributions. Swept parameters overwrite their values.

    param1: `SweptParameter`
        Main swept parameter (x-axis)

    param2: `SweptParameter`, optional
        Second swept parameter (one curve per value)

    evaluators: tuple of str
        Evaluator names or groups

    mc: `MonteCarloConfig`

    sim: `SimConfig`
    """

    discipline: str
    arrival: DistributionSpec
    service: DistributionSpec
    param1: SweptParameter
    param2: SweptParameter = None
    evaluators: tuple = ("exact",)
    mc: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if self.discipline not in DISCIPLINES:
            raise ConfigurationError(f"Unknown discipline {self.discipline}. Please choose among {DISCIPLINES}")

        # Checks targets and evaluators on the first point, before any computation
        _, _, arrival, service = next(self.points())
        object.__setattr__(
            self, "evaluators", tuple(resolve_evaluators(self.discipline, self.evaluators, arrival, service))
        )

    def points(self):
        """Iterate over (value1, value2, arrival, service), value2 in the outer loop"""
        values2 = self.param2.grid if self.param2 is not None else [np.nan]
        for value2, value1 in itertools.product(values2, self.param1.grid):
            arrival, service = self.arrival, self.service
            if self.param2 is not None:
                arrival, service = self.param2.apply(arrival, service, value2)
            arrival, service = self.param1.apply(arrival, service, value1)
            yield value1, value2, arrival, service


def _flags_text(estimate):
    return ";".join(estimate.flags)


def _sweep_point(discipline, evaluators, mc, sim, point):
    value1, value2, arrival, service = point
    model = QueueModel(arrival, service, discipline)
    rows = []
    for name in evaluators:
        estimate = evaluate(name, model, mc, sim)
        rows.append(
            [value1, value2, name, estimate.age, estimate.std_error, estimate.terms_used, _flags_text(estimate)]
        )
    return rows


def run_sweep(spec, workers=1, verbose=False):
    """Evaluate the sweep on every grid point


    Parameters
    ----------
    spec: `SweepSpec`
        Sweep to run

    workers: int
        Number of processes evaluating grid points

    verbose: bool
        Show a progress bar and the elapsed time


    Returns
    -------
    table: `pandas.DataFrame`
        Columns param1, param2, evaluator, age, std_err, terms_used, flags.
        One row per grid point and evaluator, in grid order.
    """
    start = time.time()
    points = list(spec.points())
    rows = utils.map_ordered(
        functools.partial(_sweep_point, spec.discipline, spec.evaluators, spec.mc, spec.sim),
        points,
        workers,
        verbose,
        desc=f"Sweep {spec.param1.name}",
    )
    table = pd.DataFrame(list(itertools.chain.from_iterable(rows)), columns=SWEEP_COLUMNS)
    if verbose:
        print(f"{len(table)} values computed in {round(time.time() - start, 1)} s")

    return table


# COMPARISONS AT FIXED MEAN
# =========================


def candidate_spec(candidate, mean):
    """Distribution of a candidate family with the given mean

    Candidates are family names, with the shape for gamma:
    `det`, `exp`, `uniform`, `gamma:shape=2`.


    Examples
    --------
    >>> candidate_spec("gamma:shape=2", 0.5).to_text()
    'gamma:shape=2,rate=4'
    """
    family, _, params = candidate.lower().replace(" ", "").partition(":")
    family = FAMILY_ALIASES.get(family, family)
    keyvalues = utils.str_to_keyvalues(params)
    shape = keyvalues.pop("shape", keyvalues.pop("alpha", None))
    if family not in FAMILIES or len(keyvalues) > 0:
        raise ConfigurationError(
            f"Candidates are a family name and possibly a gamma shape, the mean is set by the grid (got '{candidate}')"
        )
    try:
        spec = with_mean(family, mean, shape)
    except ValueError as e:
        raise ConfigurationError(str(e))

    if abs(moment(spec, 1) - mean) > MEAN_TOLERANCE * mean:
        raise ConfigurationError(f"Candidate {candidate} has mean {moment(spec, 1)} instead of {mean}")

    return spec


@dataclass(frozen=True)
class ComparisonSpec:
    """Comparison of interarrival distributions sharing the same mean


    Parameters
    ----------
    discipline: str
        "blocking" or "preemption"

    candidates: tuple of str
        Candidate interarrival families (see `candidate_spec`)

    service: `DistributionSpec`
        Fixed service distribution

    means: tuple of float
        Grid of mean interarrival times

    evaluator: str
        Name of the evaluator (a single one)
    """

    discipline: str
    candidates: tuple
    service: DistributionSpec
    means: tuple
    evaluator: str = "auto"
    mc: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if self.discipline not in DISCIPLINES:
            raise ConfigurationError(f"Unknown discipline {self.discipline}. Please choose among {DISCIPLINES}")
        if len(self.candidates) < 2:
            raise ConfigurationError(f"At least two candidates are needed (got {self.candidates})")
        try:
            object.__setattr__(self, "means", tuple(utils.check_grid(self.means, "mean grid")))
        except ValueError as e:
            raise ConfigurationError(str(e))

        for candidate in self.candidates:
            arrival = candidate_spec(candidate, self.means[0])
            if resolve_evaluators(self.discipline, [self.evaluator], arrival, self.service) != [self.evaluator]:
                raise ConfigurationError(f"The comparison needs a single evaluator (got {self.evaluator})")

    def log_concave_candidates(self):
        return [c for c in self.candidates if is_log_concave(candidate_spec(c, self.means[0]))]


def _comparison_point(spec, mean):
    ages, errors = [], []
    for candidate in spec.candidates:
        model = QueueModel(candidate_spec(candidate, mean), spec.service, spec.discipline)
        estimate = evaluate(spec.evaluator, model, spec.mc, spec.sim)
        ages.append(estimate.age)
        errors.append(estimate.std_error)
    return ages, errors


def compare_at_fixed_mean(spec, workers=1, verbose=False):
    """Age of each candidate interarrival distribution on a grid of means


    Returns
    -------
    table: `pandas.DataFrame`
        One row per mean: the mean, the age of each candidate (one column
        per candidate), their standard errors (std_err_<candidate>), the
        candidate of minimum age (argmin) and the log-concave candidate of
        maximum age (argmax_lc).
    """
    results = utils.map_ordered(
        functools.partial(_comparison_point, spec), spec.means, workers, verbose, desc="Comparison"
    )
    lc = spec.log_concave_candidates()
    records = []
    for mean, (ages, errors) in zip(spec.means, results):
        row = {"mean": mean}
        row.update(dict(zip(spec.candidates, ages)))
        row.update({f"std_err_{c}": e for c, e in zip(spec.candidates, errors)})
        row["argmin"] = spec.candidates[int(np.argmin(ages))]
        lc_ages = [a for c, a in zip(spec.candidates, ages) if c in lc]
        row["argmax_lc"] = lc[int(np.argmax(lc_ages))] if lc else ""
        records.append(row)

    return pd.DataFrame(records)


def argmin_switches(table):
    """Grid intervals where the optimal candidate changes


    Returns
    -------
    switches: list of tuple
        (mean before, mean after, argmin before, argmin after)
    """
    switches = []
    for (_, before), (_, after) in zip(table.iloc[:-1].iterrows(), table.iloc[1:].iterrows()):
        if before["argmin"] != after["argmin"]:
            switches.append((before["mean"], after["mean"], before["argmin"], after["argmin"]))

    return switches


# TRUNCATION AND VALIDATION
# =========================


def truncation_report(Y, S, k_values, mc=None, verbose=False):
    """Blocking age with the infinite sums truncated at each k of `k_values`


    Returns
    -------
    table: `pandas.DataFrame`
        Columns k, age, std_err, reference (converged value, same sample
        paths) and rel_error = |age - reference| / reference
    """
    mc = mc or MonteCarloConfig()
    k_values = [int(k) for k in utils.str_to_grid(k_values)]
    try:
        utils.check_grid(k_values, "grid of k")
    except ValueError as e:
        raise ConfigurationError(str(e))

    reference = blocking.age_gg_blocking(Y, S, mc)
    rows = []
    for i, k in enumerate(k_values):
        estimate = blocking.age_gg_blocking(Y, S, mc, k_forced=k)
        rows.append([k, estimate.age, estimate.std_error])
        if verbose:
            print(f"[{i}/{len(k_values)}] k={k} age={estimate.age:.6g}")

    table = pd.DataFrame(rows, columns=["k", "age", "std_err"])
    table["reference"] = reference.age
    table["rel_error"] = np.abs(table["age"] - reference.age) / reference.age
    return table


def validate(model, mc=None, sim=None, workers=1, verbose=False):
    """Compare every applicable evaluator with the simulation

    Exact evaluators fail when they differ from the simulation by more than
    4 combined standard errors. Bounds fail when they are guaranteed and
    below the simulation by more than 4 combined standard errors.


    Returns
    -------
    table: `pandas.DataFrame`
        Columns evaluator, kind, age, std_err, z, ok. The simulation is the
        last row.
    """
    mc = mc or MonteCarloConfig()
    sim = sim or SimConfig()
    names = resolve_evaluators(model.discipline, ["gg", "bounds"], model.arrival, model.service)
    names += [
        n
        for n in ("gm", "gm-equiv", "mg")
        if n in EVALUATORS[model.discipline]
        and _applicable(EVALUATORS[model.discipline][n][1], model.arrival, model.service)
    ]

    reference = simulator.simulate_age(model, sim, workers, verbose)
    rows = []
    for name in names:
        estimate = evaluate(name, model, mc, sim)
        z = estimate.scaled_error(reference)
        kind = evaluator_kind(model.discipline, name)
        if kind == "exact":
            ok = z <= Z_THRESHOLD
        else:
            ok = estimate.age >= reference.age or z <= Z_THRESHOLD or "bound-not-guaranteed" in estimate.flags
        rows.append([name, kind, estimate.age, estimate.std_error, z, ok])
        if verbose:
            print(f"{name:>10s} {estimate}  z={z:.2f}")

    rows.append(["sim", "simulation", reference.age, reference.std_error, 0.0, True])
    return pd.DataFrame(rows, columns=["evaluator", "kind", "age", "std_err", "z", "ok"])


# CONFIGURATION AND PRESETS
# =========================


def load_config(path):
    """Read a YAML or JSON configuration document as an attribute dictionary"""
    with open(path, "r") as f:
        cfg = yaml.safe_load(f)

    if not isinstance(cfg, dict):
        raise ConfigurationError(f"The configuration {path} is not a key-value document")

    return easydict.EasyDict(cfg)


def _without_none(overrides):
    return {k: v for k, v in overrides.items() if v is not None}


def mc_from_config(cfg=None, **overrides):
    """`MonteCarloConfig` from a config section, overridden by non-None keyword arguments"""
    params = dict(cfg or {})
    params.update(_without_none(overrides))
    try:
        return MonteCarloConfig(**params)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid Monte Carlo settings {params}: {e}")


def sim_from_config(cfg=None, **overrides):
    """`SimConfig` from a config section, overridden by non-None keyword arguments"""
    params = dict(cfg or {})
    params.update(_without_none(overrides))
    try:
        return SimConfig(**params)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid simulation settings {params}: {e}")


def parse_distribution(text, name):
    try:
        return DistributionSpec.parse(text)
    except (ValueError, AttributeError) as e:
        raise ConfigurationError(f"Invalid {name} distribution {text}: {e}")


def sweep_from_config(cfg, mc=None, sim=None):
    """`SweepSpec` from a config document (keys of the module docstring)"""
    for key in ("discipline", "arrival", "service", "param1"):
        if key not in cfg:
            raise ConfigurationError(f"Missing key '{key}' in the sweep configuration")

    return SweepSpec(
        discipline=cfg["discipline"],
        arrival=parse_distribution(cfg["arrival"], "arrival"),
        service=parse_distribution(cfg["service"], "service"),
        param1=SweptParameter.parse(cfg["param1"]),
        param2=SweptParameter.parse(cfg["param2"]) if cfg.get("param2") else None,
        evaluators=tuple(as_list(cfg.get("evaluators", ["exact"]))),
        mc=mc or mc_from_config(cfg.get("mc")),
        sim=sim or sim_from_config(cfg.get("sim")),
    )


def comparison_from_config(cfg, mc=None, sim=None):
    """`ComparisonSpec` from a config document (keys candidates, service, means...)"""
    for key in ("discipline", "candidates", "service", "means"):
        if key not in cfg:
            raise ConfigurationError(f"Missing key '{key}' in the comparison configuration")

    try:
        means = utils.str_to_grid(cfg["means"])
    except ValueError as e:
        raise ConfigurationError(f"Invalid mean grid: {e}")

    return ComparisonSpec(
        discipline=cfg["discipline"],
        candidates=tuple(as_list(cfg["candidates"])),
        service=parse_distribution(cfg["service"], "service"),
        means=tuple(means),
        evaluator=cfg.get("evaluator", "auto"),
        mc=mc or mc_from_config(cfg.get("mc")),
        sim=sim or sim_from_config(cfg.get("sim")),
    )


def as_list(value):
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip() != ""]
    return list(value)


def run_experiment(cfg, mc_overrides=None, sim_overrides=None, workers=1, verbose=False):
    """Run the experiment described by a config document

    The kind of experiment is given by the key `kind`: sweep, compare,
    truncation or validate. Non-None entries of `mc_overrides` and
    `sim_overrides` take precedence over the document.
    """
    mc = mc_from_config(cfg.get("mc"), **(mc_overrides or {}))
    sim = sim_from_config(cfg.get("sim"), **(sim_overrides or {}))
    kind = cfg.get("kind", "sweep")
    if kind == "sweep":
        return run_sweep(sweep_from_config(cfg, mc, sim), workers, verbose)
    elif kind == "compare":
        return compare_at_fixed_mean(comparison_from_config(cfg, mc, sim), workers, verbose)
    elif kind == "truncation":
        return truncation_report(
            parse_distribution(cfg["arrival"], "arrival"),
            parse_distribution(cfg["service"], "service"),
            cfg.get("k_values", "1:20:20"),
            mc,
            verbose,
        )
    elif kind == "validate":
        model = QueueModel(
            parse_distribution(cfg["arrival"], "arrival"),
            parse_distribution(cfg["service"], "service"),
            cfg.get("discipline", "blocking"),
        )
        return validate(model, mc, sim, workers, verbose)
    else:
        raise ConfigurationError(f"Unknown experiment kind {kind}. Please choose among sweep, compare, truncation, validate")


def list_presets():
    """Names of the presets shipped with the package"""
    return sorted(
        os.path.basename(p)[:-5] for p in glob.glob(os.path.join(PRESETS_DIRECTORY, "*.yaml"))
    )


def load_preset(name):
    """Read a preset: a description and a list of experiments"""
    path = os.path.join(PRESETS_DIRECTORY, name + ".yaml")
    if not os.path.isfile(path):
        raise ConfigurationError(f"Unknown preset {name}. Please choose among {list_presets()}")

    preset = load_config(path)
    if "experiments" not in preset:
        raise ConfigurationError(f"The preset {name} has no experiment")

    return preset


def run_preset(name, mc_overrides=None, sim_overrides=None, workers=1, verbose=False):
    """Run every experiment of a preset


    Returns
    -------
    tables: dict
        Experiment id -> `pandas.DataFrame`, in the order of the preset
    """
    preset = load_preset(name)
    tables = {}
    for i, experiment in enumerate(preset.experiments):
        if verbose:
            print(f"[{i}/{len(preset.experiments)}] {name}/{experiment.id}: {experiment.get('description', '')}")
        defaults = {k: v for k, v in preset.items() if k not in ("experiments", "description")}
        cfg = easydict.EasyDict({**defaults, **experiment})
        tables[experiment.id] = run_experiment(cfg, mc_overrides, sim_overrides, workers, verbose)

    return tables


# OUTPUT
# ======


def write_table(table, out=None, fmt="csv"):
    """Write a result table as CSV (12 significant digits) or JSON records

    Returns the text when `out` is None.
    """
    if fmt == "csv":
        return table.to_csv(out, index=False, float_format=utils.FLOAT_FORMAT)
    elif fmt == "json":
        return table.to_json(out, orient="records", double_precision=12, indent=2)
    else:
        raise ConfigurationError(f"Unknown format {fmt}. Please choose among ['csv', 'json']")


# EOF
