"""Command-line entry point.

Exit codes: 0 success, 1 malformed input, 2 numerical failure,
3 model-generation rejection budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .citest import Dataset, TestConfig
from .estimate import edge_estimation, estimates_from_search
from .graph import GraphError, pattern_of
from .harness import ExperimentConfig, run_experiment
from .search import V5_VARIANTS, PopulationDecider, SampleDecider, vcsgs
from .sem import (
    LinearSem,
    ModelClassParams,
    RejectionExhausted,
    SingularMatrixError,
    check_k_triangle_faithfulness,
    check_nvv,
    check_ubc,
    conditional_variances,
    max_abs_partial_correlation,
    sample,
    standardize,
)

EXIT_INPUT, EXIT_NUMERIC, EXIT_REJECTED = 1, 2, 3


def bundled_models() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("trifaith.data").iterdir() if p.name.endswith(".json"))


def bundled_model(name: str) -> LinearSem:
    path = resources.files("trifaith.data").joinpath(f"{name}.json")
    return LinearSem.from_json(json.loads(path.read_text()))


def _load_model(args) -> LinearSem:
    if args.example:
        return bundled_model(args.example)
    return LinearSem.load(args.model)


def _emit(obj, path) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _add_model_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--model", help="SEM JSON file")
    g.add_argument("--example", choices=bundled_models(), help="bundled model name")


def _add_test_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.05, help="level of each zero-correlation test")
    p.add_argument("--margin-L", dest="L", type=float, default=0.1, help="orientation margin")
    p.add_argument("--zero-tol", type=float, default=1e-9, help="population zero threshold")


def cmd_simulate(args) -> int:
    sem = _load_model(args)
    data = sample(sem, args.n, seed=args.seed)
    if args.output in (None, "-"):
        data.write_csv(sys.stdout)
    else:
        data.to_csv(args.output)
    return 0


def cmd_discover(args) -> int:
    config = TestConfig(args.alpha, args.L, args.zero_tol)
    if args.oracle:
        decider = PopulationDecider.from_sem(LinearSem.load(args.oracle), config.zero_tol)
    else:
        decider = SampleDecider(Dataset.from_csv(args.input), config.alpha)
    result = vcsgs(decider, L=config.L, v5_variant=args.v5)
    _emit(result.to_json(), args.output)
    if args.dot:
        Path(args.dot).write_text(result.graph.to_dot())
    return 0


def cmd_estimate(args) -> int:
    config = TestConfig(args.alpha, args.L, args.zero_tol)
    est = edge_estimation(Dataset.from_csv(args.input), config, v5_variant=args.v5)
    _emit(est.to_json(), args.output)
    return 0


def cmd_oracle(args) -> int:
    sem = _load_model(args)
    decider = PopulationDecider.from_sem(sem, args.zero_tol)
    result = vcsgs(decider, L=args.L, v5_variant=args.v5)
    out = {
        "pattern": pattern_of(sem.dag).to_json(),
        "extended_pattern": result.graph.to_json(),
        "nonadjacency_confirmed": result.nonadjacency_confirmed,
    }
    if args.estimates:
        out["estimates"] = estimates_from_search(result, decider.cov).to_json()
    _emit(out, args.output)
    return 0


def cmd_validate(args) -> int:
    sem = standardize(_load_model(args))
    params = ModelClassParams(args.k, args.J, args.C)
    violations = check_k_triangle_faithfulness(sem, params.k)
    nvv, ubc = check_nvv(sem, params.J), check_ubc(sem, params.C)
    ok = nvv and ubc and not violations
    _emit({
        "pass": ok,
        "k_triangle_faithful": not violations,
        "nvv": nvv,
        "ubc": ubc,
        "min_conditional_variance": min(conditional_variances(sem).values()),
        "max_abs_partial_correlation": max_abs_partial_correlation(sem),
        "violations": [
            {"triangle": [v.x, v.y, v.z], "w": list(v.w), "pcorr": v.pcorr, "bound": v.bound}
            for v in violations
        ],
    }, args.output)
    for v in violations:
        print(f"violation: {v}", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    config = ExperimentConfig.load(args.config)
    overrides = {
        k: getattr(args, k)
        for k in ("output_csv", "output_json", "output_jsonl", "workers", "replications")
        if getattr(args, k) is not None
    }
    if overrides:
        config = ExperimentConfig.from_mapping({**config.to_json(), **overrides})
    report = run_experiment(config)
    report.write()
    if not config.output_csv:
        sys.stdout.write(report.csv_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trifaith", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample a dataset from a SEM")
    _add_model_source(p)
    p.add_argument("--n", type=int, required=True, help="number of rows")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("discover", help="run the very conservative search")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="dataset CSV")
    src.add_argument("--oracle", help="SEM JSON; answers tests exactly")
    _add_test_flags(p)
    p.add_argument("--v5", choices=V5_VARIANTS, default="all",
                   help="how many disambiguations must pass the Markov check (default all)")
    p.add_argument("--output", help="JSON path (default stdout)")
    p.add_argument("--dot", help="also write the graph in DOT format")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("estimate", help="estimate edge coefficients")
    p.add_argument("--input", required=True, help="dataset CSV")
    _add_test_flags(p)
    p.add_argument("--v5", choices=V5_VARIANTS, default="all",
                   help="how many disambiguations must pass the Markov check (default all)")
    p.add_argument("--output", help="JSON path (default stdout)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", help="population pattern and search output of a SEM")
    _add_model_source(p)
    p.add_argument("--margin-L", dest="L", type=float, default=None,
                   help="orientation margin (default: exact clauses)")
    p.add_argument("--zero-tol", type=float, default=1e-9, help="population zero threshold")
    p.add_argument("--v5", choices=V5_VARIANTS, default="all",
                   help="how many disambiguations must pass the Markov check (default all)")
    p.add_argument("--estimates", action="store_true", help="include population edge estimates")
    p.add_argument("--output", help="JSON path (default stdout)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="Monte Carlo experiment from a TOML or JSON config")
    p.add_argument("--config", required=True, help="TOML or JSON settings file")
    p.add_argument("--output-csv", help="summary CSV (default stdout unless set in the config)")
    p.add_argument("--output-json", help="full report JSON")
    p.add_argument("--output-jsonl", help="one JSON record per replication and sample size")
    p.add_argument("--workers", type=int, help="worker processes (overrides the config)")
    p.add_argument("--replications", type=int, help="overrides the config")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("validate-model", help="check a SEM against the (k, J, C) model class")
    _add_model_source(p)
    p.add_argument("--k", type=float, default=0.3, help="triangle faithfulness constant (default 0.3)")
    p.add_argument("--J", type=float, default=0.05, help="lower bound on conditional variances (default 0.05)")
    p.add_argument("--C", type=float, default=0.95, help="upper bound on partial correlations (default 0.95)")
    p.add_argument("--output", help="JSON path (default stdout)")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except RejectionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (SingularMatrixError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError, KeyError, TypeError, GraphError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
