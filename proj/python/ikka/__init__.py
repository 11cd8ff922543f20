"""Anomaly-weighted visual servoing toolkit."""

import csv
import io
import json

from . import _core
from ._core import (
    ConfigError,
    Error,
    PreconditionError,
    SchemaError,
    bottleneck_distance,
    cliffs_delta,
    holm_bonferroni,
    kruskal_wallis,
    percentile,
    persistence_term,
    rips_pd0,
    rips_pd1,
    spearman,
    stability_kT,
    total_persistence,
    yaw_command,
)

__all__ = [
    "ConfigError",
    "Error",
    "PreconditionError",
    "SchemaError",
    "analyze",
    "bottleneck_distance",
    "cliffs_delta",
    "counterexample",
    "default_config",
    "holm_bonferroni",
    "kruskal_wallis",
    "percentile",
    "persistence_term",
    "rips_pd0",
    "rips_pd1",
    "run_scenario",
    "spearman",
    "stability_kT",
    "total_persistence",
    "yaw_command",
]


def default_config():
    return json.loads(_core.default_config_json())


def run_scenario(tracker, condition="nominal", seed=0, duration_s=10.0, group="arena", run_id="run", config=None):
    """Simulates one run; returns (rows, metrics) with rows as dicts of floats."""
    text, metrics = _core.run_scenario_csv(
        run_id, group, condition, tracker, seed, duration_s, json.dumps(config) if config else ""
    )
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        active = row.pop("active_tracker")
        parsed = {k: float(v) for k, v in row.items()}
        parsed["tracked"] = bool(parsed["tracked"])
        parsed["occluded"] = bool(parsed["occluded"])
        parsed["active_tracker"] = active
        rows.append(parsed)
    return rows, json.loads(metrics)


def analyze(metrics):
    return json.loads(_core.analyze_json([json.dumps(m) for m in metrics]))


def counterexample(seed=7, n_per_class=100):
    return dict(_core.counterexample(seed, n_per_class))
