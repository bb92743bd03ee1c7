"""
Scenario files: a versioned YAML document describing one :class:`Scenario`.

Example::

    version: 1
    name: my-run
    p: 0.5
    mx: 2
    loss: {name: L_alpha, alpha: 1.4}
    prior: {name: uniform}
    true_joint: {kind: independent}
    bayes: {n: 4, n_list: [4, 16, 64]}
    simulation: {rounds: 200, replications: 50, strategies: [ignore, bayes(uniform)]}
    seed: 0

A ``preset`` key starts from one of the built-in scenarios; every other key
overrides it. Unknown keys are rejected with their line number.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml

from credalkit.experiments import (
    CREDAL_FAMILIES,
    LOSS_NAMES,
    PRESETS,
    PRIOR_NAMES,
    TRUE_JOINTS,
    Scenario,
    StrategyId,
)

SCHEMA_VERSION = 1

# key -> nested schema (dict) or a leaf marker
SCHEMA: dict[str, Any] = {
    "version": "int",
    "preset": "str",
    "name": "str",
    "p": "float",
    "mx": "int",
    "credal": "str",
    "event": "intlist",
    "seed": "int",
    "cap": "int",
    "loss": {"name": "str", "alpha": "float", "table": "array", "observation_dependent": "bool"},
    "prior": {"name": "str", "ess": "float", "hierarchical_weight": "float"},
    "true_joint": {"kind": "str", "x_marginal": "floatlist", "table": "array"},
    "bayes": {"n": "int", "n_list": "intlist", "counts": "array", "k": "int"},
    "simulation": {"rounds": "int", "replications": "int", "strategies": "strlist"},
}


class ScenarioFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def _line_map(node: yaml.Node, path: tuple = (), out: dict | None = None) -> dict:
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            p = path + (key.value,)
            out[p] = key.start_mark.line + 1
            _line_map(value, p, out)
    return out


def _check_leaf(kind: str, value: Any, where: str, line: int | None) -> None:
    def bad(what):
        raise ScenarioFileError(f"{where} must be {what}, got {value!r}", line)

    if kind == "int" and (not isinstance(value, int) or isinstance(value, bool)):
        bad("an integer")
    if kind == "float" and (not isinstance(value, (int, float)) or isinstance(value, bool)):
        bad("a number")
    if kind == "str" and not isinstance(value, str):
        bad("a string")
    if kind == "bool" and not isinstance(value, bool):
        bad("true or false")
    if kind in ("intlist", "floatlist", "strlist", "array") and not isinstance(value, list):
        bad("a list")
    if kind == "intlist" and not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        bad("a list of integers")
    if kind == "strlist" and not all(isinstance(v, str) for v in value):
        bad("a list of strings")


def _validate(data: Any, schema: dict, lines: dict, path: tuple = ()) -> None:
    if not isinstance(data, dict):
        raise ScenarioFileError(f"{'.'.join(path) or 'document'} must be a mapping", lines.get(path))
    for key, value in data.items():
        p = path + (key,)
        line = lines.get(p)
        if key not in schema:
            raise ScenarioFileError(f"unknown key {'.'.join(map(str, p))!r}", line)
        sub = schema[key]
        if isinstance(sub, dict):
            _validate(value, sub, lines, p)
        else:
            _check_leaf(sub, value, ".".join(map(str, p)), line)


def _enum(value: str, allowed, where: str, line: int | None) -> str:
    if value not in allowed:
        raise ScenarioFileError(f"{where}: {value!r} is not one of {list(allowed)}", line)
    return value


def parse_scenario(text: str) -> Scenario:
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioFileError(f"YAML syntax error: {exc}", mark.line + 1 if mark else None) from exc
    if node is None:
        raise ScenarioFileError("empty scenario file", 1)
    lines = _line_map(node)
    _validate(data, SCHEMA, lines)
    if "version" not in data:
        raise ScenarioFileError("missing required key 'version'", 1)
    if data["version"] != SCHEMA_VERSION:
        raise ScenarioFileError(f"unsupported version {data['version']}", lines[("version",)])

    fields: dict[str, Any] = {}
    if "preset" in data:
        _enum(data["preset"], PRESETS, "preset", lines[("preset",)])
        base = PRESETS[data["preset"]]
    else:
        base = Scenario()

    for key in ("name", "p", "mx", "seed", "cap"):
        if key in data:
            fields[key] = data[key]
    if "credal" in data:
        fields["credal"] = _enum(data["credal"], CREDAL_FAMILIES, "credal", lines[("credal",)])
    if "event" in data:
        fields["event"] = tuple(data["event"])
    loss = data.get("loss", {})
    if "name" in loss:
        fields["loss"] = _enum(loss["name"], LOSS_NAMES, "loss.name", lines[("loss", "name")])
    for src, dst in (("alpha", "alpha"), ("table", "loss_table"),
                     ("observation_dependent", "observation_dependent")):
        if src in loss:
            fields[dst] = loss[src]
    prior = data.get("prior", {})
    if "name" in prior:
        fields["prior"] = _enum(prior["name"], PRIOR_NAMES, "prior.name", lines[("prior", "name")])
    for key in ("ess", "hierarchical_weight"):
        if key in prior:
            fields[key] = prior[key]
    tj = data.get("true_joint", {})
    if "kind" in tj:
        fields["true_joint"] = _enum(tj["kind"], TRUE_JOINTS, "true_joint.kind",
                                     lines[("true_joint", "kind")])
    if "x_marginal" in tj:
        fields["x_marginal"] = tuple(tj["x_marginal"])
    if "table" in tj:
        fields["true_joint_table"] = tj["table"]
    bay = data.get("bayes", {})
    for key in ("n", "counts", "k"):
        if key in bay:
            fields[key] = bay[key]
    if "n_list" in bay:
        fields["n_list"] = tuple(bay["n_list"])
    sim = data.get("simulation", {})
    for key in ("rounds", "replications"):
        if key in sim:
            fields[key] = sim[key]
    if "strategies" in sim:
        for s in sim["strategies"]:
            try:
                StrategyId.parse(s)
            except ValueError as exc:
                raise ScenarioFileError(f"simulation.strategies: {exc}",
                                        lines[("simulation", "strategies")]) from exc
        fields["strategies"] = tuple(sim["strategies"])

    try:
        return base.replace(**fields)
    except (ValueError, TypeError) as exc:
        raise ScenarioFileError(str(exc)) from exc


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))
