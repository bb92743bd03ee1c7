"""
Command-line interface.

Exit codes: 0 success, 1 a reproduced value missed its target, 2 bad usage
or an invalid scenario, 3 numerical failure.

Every number printed here is read from a result object or report produced
by the library modules; this file only parses flags and formats output.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from credalkit import __version__, bayes
from credalkit.bayes import ContingencyCounts
from credalkit.credal import detect_dilation, marginal_fixed_credal, parse_event
from credalkit.errors import CredalError, NumericalFailure
from credalkit.experiments import (
    LOSS_NAMES,
    PRIOR_NAMES,
    Scenario,
    StrategyId,
    make_loss,
    make_prior,
    reproduce_checks,
    run_scenario,
    sequential_simulation,
)
from credalkit.minimax import format_rule, global_minimax_rule, local_minimax_action
from credalkit.probspace import FiniteDistribution, correlated_joint, independent_joint
from credalkit.scenario_file import ScenarioFileError, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


# -- formatting ------------------------------------------------------------------


def _fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6f}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False, default=_jsonable) + "\n"


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for key in sorted(obj):
            out += _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key))
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, item in enumerate(obj):
            out += _flatten(item, f"{prefix}.{i}")
        return out
    return [(prefix, obj)]


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6g}"
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def render_csv(document: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(document):
        writer.writerow([key, _csv_value(value)])
    return buf.getvalue()


def scenario_document(scenario: Scenario, results: dict) -> dict:
    return {
        "scenario": dataclasses.asdict(scenario),
        "results": results,
        "provenance": {"seed": scenario.seed, "version": __version__},
    }


# -- commands --------------------------------------------------------------------


def cmd_reproduce(args: argparse.Namespace) -> int:
    checks = reproduce_checks(args.example, p=args.p, alpha=args.alpha, n=args.n, seed=args.seed)
    print(f"example {args.example} (seed {args.seed})")
    for c in checks:
        print(f"{c.label} = {_fmt(c.value)} (expected {c.expected}) {c.status}")
    failed = sum(c.passed is False for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} rows without FAIL")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = scenario.replace(seed=args.seed)
    document = scenario_document(scenario, run_scenario(scenario))
    text = render_json(document) if args.output == "json" else render_csv(document)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _credal(args):
    return marginal_fixed_credal(FiniteDistribution.binary(args.p), args.mx)


def cmd_minimax(args: argparse.Namespace) -> int:
    loss = make_loss(args.loss, args.alpha)
    sol = global_minimax_rule(_credal(args), loss)
    print(f"value {sol.value:.4f}, rule: {format_rule(sol.rule)}")
    return EXIT_OK


def cmd_local_minimax(args: argparse.Namespace) -> int:
    loss = make_loss(args.loss, args.alpha)
    credal = _credal(args)
    xs = range(args.mx) if args.x is None else [args.x]
    for x in xs:
        loc = local_minimax_action(credal, x, loss)
        mix = ",".join(f"{w:.4f}" for w in loc.mixture.weights)
        print(f"x={x} mixture [{mix}] value {loc.value:.4f}")
    return EXIT_OK


def cmd_dilation(args: argparse.Namespace) -> int:
    rep = detect_dilation(_credal(args), parse_event(args.event), weak=args.weak)
    parts = [f"prior [{rep.prior.lower:.3f},{rep.prior.upper:.3f}]"]
    parts += [f"x={x} [{iv.lower:.3f},{iv.upper:.3f}]" for x, iv in enumerate(rep.per_x)]
    parts.append("DILATED" if rep.dilated else "NOT DILATED")
    print(", ".join(parts))
    return EXIT_OK


def _parse_counts(text: str | None, mx: int) -> ContingencyCounts:
    if not text:
        return ContingencyCounts.empty(mx)
    try:
        rows = [[int(v) for v in row.split(",")] for row in text.split(";")]
    except ValueError:
        raise ValueError(f"cannot parse counts {text!r}; use 'n00,n01;n10,n11'") from None
    return ContingencyCounts(rows)


def cmd_bayes_predict(args: argparse.Namespace) -> int:
    counts = _parse_counts(args.counts, args.mx)
    prior = make_prior(args.prior, args.p, counts.m, args.ess, args.hierarchical)
    prob = bayes.predictive_probability(prior, counts, args.k)
    line = f"Pr(Y=1 | X={args.k}) = {prob:.6f}"
    if args.loss is not None:
        action = bayes.bayes_predict(prior, counts, args.k, make_loss(args.loss, args.alpha))
        line += f", action {action}"
    print(line)
    return EXIT_OK


def _true_joint(args):
    if args.true_joint == "correlated":
        return correlated_joint(args.p)
    return independent_joint(np.full(args.mx, 1.0 / args.mx), [1 - args.p, args.p])


def cmd_beta(args: argparse.Namespace) -> int:
    joint = _true_joint(args)
    prior = make_prior(args.prior, args.p, joint.mx, args.ess, args.hierarchical)
    est = bayes.beta_probability(joint, args.n, make_loss("L_alpha", args.alpha), prior,
                                 cap=args.cap, seed=args.seed)
    if est.exact:
        print(f"beta = {est.value:.6g}")
    else:
        print(f"beta = {est.value:.6g} ± {est.stderr:.2g} (monte carlo, seed {args.seed})")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    joint = _true_joint(args)
    strategies = [StrategyId.parse(s) for s in args.strategies]
    loss = make_loss("L_alpha", args.alpha)
    sim = sequential_simulation(joint, strategies, args.rounds, args.seed, loss,
                                replications=args.replications, p=args.p, ess=args.ess)
    print(f"rounds {sim.rounds}, replications {sim.replications}, seed {sim.seed}")
    print(f"{'strategy':<24} {'mean loss':>10} {'cumulative':>12}")
    for s in strategies:
        label = s.label
        print(f"{label:<24} {sim.mean_loss(label):>10.4f} {sim.cumulative[label][-1]:>12.4f}")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _add_problem(p: argparse.ArgumentParser, loss: bool = True) -> None:
    p.add_argument("--p", type=float, default=0.5, help="Pr(Y=1)")
    p.add_argument("--mx", type=int, default=2, help="number of observation values")
    if loss:
        p.add_argument("--loss", choices=LOSS_NAMES[:-1], default="zero-one")
        p.add_argument("--alpha", type=float, default=None, help="cost of a false 1 for L_alpha")


def _add_prior(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prior", choices=PRIOR_NAMES, default="uniform")
    p.add_argument("--ess", type=float, default=2.0, help="equivalent sample size for --prior ess")
    p.add_argument("--hierarchical", action="store_true", help="average over an independence model")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="credalkit", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"credalkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="rerun a worked example and check its values")
    p.add_argument("example", choices=["2.2", "3.1", "3.2", "4.1"])
    p.add_argument("--p", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("run", help="analyse a scenario file")
    p.add_argument("scenario", help="YAML scenario file")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--seed", type=int, default=None, help="override the file's seed")
    p.add_argument("--out", help="write here instead of stdout")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("minimax", help="global minimax rule over the marginal-fixed set")
    _add_problem(p)
    p.set_defaults(func=cmd_minimax)

    p = sub.add_parser("local-minimax", help="local minimax mixture at each observation")
    _add_problem(p)
    p.add_argument("--x", type=int, default=None, help="single observation (default: all)")
    p.set_defaults(func=cmd_local_minimax)

    p = sub.add_parser("dilation", help="interval of an event before and after observing X")
    _add_problem(p, loss=False)
    p.add_argument("--event", default="Y=1", help="'Y=1' or 'Y in 0,1'")
    p.add_argument("--weak", action="store_true", help="accept non-strict widening")
    p.set_defaults(func=cmd_dilation)

    p = sub.add_parser("bayes-predict", help="Bayesian predictive Pr(Y=1 | X=k)")
    _add_problem(p)
    p.set_defaults(loss=None)
    _add_prior(p)
    p.add_argument("--counts", help="counts n_jk as 'n00,n01;n10,n11' (row j = value of X)")
    p.add_argument("--k", type=int, default=0, help="next observed X")
    p.set_defaults(func=cmd_bayes_predict)

    for name, helptext in (("beta", "probability that the Bayesian predicts wrongly after n samples"),
                           ("simulate", "sequential play of several strategies")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--p", type=float, default=0.5)
        p.add_argument("--mx", type=int, default=2)
        p.add_argument("--alpha", type=float, default=1.4)
        p.add_argument("--true-joint", choices=["independent", "correlated"], default="independent")
        p.add_argument("--seed", type=int, default=0)
        _add_prior(p)
        if name == "beta":
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--cap", type=int, default=bayes.DEFAULT_ENUMERATION_CAP)
            p.set_defaults(func=cmd_beta)
        else:
            p.add_argument("--rounds", type=int, default=100)
            p.add_argument("--replications", type=int, default=1)
            p.add_argument("--strategies", nargs="+",
                           default=["ignore", "global-minimax", "local-minimax", "bayes(uniform)"])
            p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ScenarioFileError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CredalError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
