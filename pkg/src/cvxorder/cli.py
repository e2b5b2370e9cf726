"""Command-line front end.

Loads measures from JSON files (``{"atoms": [{"x", "w"}, ...]}`` or
``{"quantile_pieces": [{"u_hi", "slope", "value_hi"}, ...]}``), runs the
library operations, and emits one JSON record per line with sorted keys, so
output is byte-identical across runs for fixed inputs, seed, and flags.

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
3 violated invariant (domain precondition, audit bound, or fixture failure),
4 iteration did not converge.
"""

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedRecord, NoConvergence
from .lattice import max_convex, min_convex, sandwich_check
from .measures import DiscreteMeasure, measure_record, parse_measure_record
from .projection import (
    equaldist_check,
    is_convex_order,
    lipschitz_audit,
    project_I,
    project_J,
    wasserstein,
)
from .replay import run_replay
from .sampling import random_measure, trial_rng
from .errors import BarycenterMismatch

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_NO_CONVERGENCE = 4

COMMANDS = ("project", "distance", "order-check", "lattice", "audit", "replay-examples")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: command, numeric knobs, and file paths."""

    command: str
    inputs: tuple = ()
    p: float = 2.0
    tol: float = 1e-9
    seed: int = 0
    trials: int = 1000
    discretize_n: int = 4096
    out: str = None
    csv: str = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not (np.isfinite(self.p) and self.p >= 1.0):
            raise UsageError("--p must be a finite real >= 1")
        if not (np.isfinite(self.tol) and self.tol > 0.0):
            raise UsageError("--tol must be a positive real")
        if self.seed < 0:
            raise UsageError("--seed must be a nonnegative integer")
        if self.trials < 1:
            raise UsageError("--trials must be a positive integer")
        if self.discretize_n < 1:
            raise UsageError("--discretize-n must be a positive integer")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; route through UsageError for exit 1
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    shared = _Parser(add_help=False)
    shared.add_argument("--p", type=float, default=2.0, help="transport exponent (>= 1)")
    shared.add_argument("--tol", type=float, default=1e-9, help="comparison tolerance")
    shared.add_argument("--seed", type=int, default=0, help="base seed for randomized trials")
    shared.add_argument("--trials", type=int, default=1000, help="number of randomized trials")
    shared.add_argument(
        "--discretize-n", type=int, default=4096, help="cells for continuous-quantile inputs"
    )
    shared.add_argument("--out", default=None, help="write records to this file instead of stdout")
    shared.add_argument("--csv", default=None, help="also write plot columns as CSV to this file")

    parser = _Parser(prog="cvxorder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    two_file = {
        "project": ("first measure file", "second measure file"),
        "distance": ("first measure file", "second measure file"),
        "order-check": ("candidate dominated measure", "candidate dominating measure"),
        "lattice": ("first measure file", "second measure file"),
    }
    for name, (help_a, help_b) in two_file.items():
        cmd = sub.add_parser(name, parents=[shared])
        cmd.add_argument("file_a", help=help_a)
        cmd.add_argument("file_b", help=help_b)
    sub.add_parser("audit", parents=[shared])
    sub.add_parser("replay-examples", parents=[shared])
    return parser


def parse_args(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    inputs = tuple(getattr(ns, k) for k in ("file_a", "file_b") if hasattr(ns, k))
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        p=ns.p,
        tol=ns.tol,
        seed=ns.seed,
        trials=ns.trials,
        discretize_n=ns.discretize_n,
        out=ns.out,
        csv=ns.csv,
    )


def _load_measure(path: str, discretize_n: int) -> DiscreteMeasure:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(f"{path}: {exc}") from exc
    try:
        return parse_measure_record(obj, discretize_n=discretize_n)
    except MalformedRecord as exc:
        raise MalformedRecord(f"{path}: {exc}") from exc


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    return value


def _dump(record) -> str:
    return json.dumps(_jsonable(record), sort_keys=True)


def _emit(lines, out):
    text = "".join(line + "\n" for line in lines)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _atoms(m: DiscreteMeasure):
    return measure_record(m)["atoms"]


def cmd_project(cfg: RunConfig):
    m_mu = _load_measure(cfg.inputs[0], cfg.discretize_n)
    m_nu = _load_measure(cfg.inputs[1], cfg.discretize_n)
    res_lower = project_I(m_mu, m_nu, p=cfg.p)
    res_upper = project_J(m_mu, m_nu, p=cfg.p)
    d_lower_mu, d_upper_nu, d_lower_nu, d_upper_mu = equaldist_check(m_mu, m_nu, p=cfg.p)
    record = {
        "command": "project",
        "p": cfg.p,
        "I_atoms": _atoms(res_lower.projected),
        "J_atoms": _atoms(res_upper.projected),
        "w_mu_to_I": res_lower.distance_to_input,
        "w_J_to_nu": res_upper.distance_to_input,
        "w_I_to_nu": d_lower_nu,
        "w_J_to_mu": d_upper_mu,
        "equaldist_residual_near": abs(d_lower_mu - d_upper_nu),
        "equaldist_residual_cross": abs(d_lower_nu - d_upper_mu),
    }
    _emit([_dump(record)], cfg.out)
    return EXIT_OK


def cmd_distance(cfg: RunConfig):
    m_a = _load_measure(cfg.inputs[0], cfg.discretize_n)
    m_b = _load_measure(cfg.inputs[1], cfg.discretize_n)
    record = {"command": "distance", "p": cfg.p, "value": wasserstein(m_a, m_b, cfg.p)}
    _emit([_dump(record)], cfg.out)
    return EXIT_OK


def cmd_order_check(cfg: RunConfig):
    m_a = _load_measure(cfg.inputs[0], cfg.discretize_n)
    m_b = _load_measure(cfg.inputs[1], cfg.discretize_n)
    try:
        ordered = is_convex_order(m_a, m_b, tol=cfg.tol)
        reason = "integrated-quantile-domination" if ordered else "negative-gap"
    except BarycenterMismatch:
        # different means answer the question (no domination) rather than
        # constituting a caller error
        ordered, reason = False, "barycenter-mismatch"
    record = {"command": "order-check", "ordered": ordered, "reason": reason, "tol": cfg.tol}
    _emit([_dump(record)], cfg.out)
    return EXIT_OK


def cmd_lattice(cfg: RunConfig):
    m_a = _load_measure(cfg.inputs[0], cfg.discretize_n)
    m_b = _load_measure(cfg.inputs[1], cfg.discretize_n)
    record = {
        "command": "lattice",
        "tol": cfg.tol,
        "min_atoms": _atoms(min_convex(m_a, m_b, tol=cfg.tol)),
        "max_atoms": _atoms(max_convex(m_a, m_b, tol=cfg.tol)),
        "sandwich": sandwich_check(m_a, m_b, tol=cfg.tol),
    }
    _emit([_dump(record)], cfg.out)
    return EXIT_OK


def _ratio_field(ratio):
    return "degenerate" if ratio is None else ratio


def cmd_audit(cfg: RunConfig):
    lines = []
    violations = 0
    max_ratio_i = 0.0
    max_ratio_j = 0.0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        m_mu = random_measure(rng)
        m_mu2 = random_measure(rng)
        m_nu = random_measure(rng)
        m_nu2 = random_measure(rng)
        report = lipschitz_audit(m_mu, m_mu2, m_nu, m_nu2, p=cfg.p)
        ok = report.holds_I and report.holds_J
        violations += 0 if ok else 1
        if report.ratio_I is not None:
            max_ratio_i = max(max_ratio_i, report.ratio_I)
        if report.ratio_J is not None:
            max_ratio_j = max(max_ratio_j, report.ratio_J)
        lines.append(
            _dump(
                {
                    "trial": trial,
                    "p": cfg.p,
                    "lhs_I": report.lhs_I,
                    "rhs_I": report.rhs_I,
                    "lhs_J": report.lhs_J,
                    "rhs_J": report.rhs_J,
                    "ratio_I": _ratio_field(report.ratio_I),
                    "ratio_J": _ratio_field(report.ratio_J),
                    "holds": ok,
                }
            )
        )
    lines.append(
        _dump(
            {
                "command": "audit",
                "p": cfg.p,
                "seed": cfg.seed,
                "trials": cfg.trials,
                "violations": violations,
                "max_ratio_I": max_ratio_i,
                "max_ratio_J": max_ratio_j,
            }
        )
    )
    _emit(lines, cfg.out)
    return EXIT_OK if violations == 0 else EXIT_INVARIANT


def cmd_replay_examples(cfg: RunConfig):
    records, lattice_rows, alpha_rows = run_replay(discretize_n=cfg.discretize_n)
    failures = sum(0 if r["pass"] else 1 for r in records)
    lines = [_dump(r) for r in records]
    for n, p, ratio, exact in lattice_rows:
        lines.append(
            _dump({"table": "lattice-ratio", "n": n, "p": p, "ratio": ratio, "exact": exact})
        )
    for row in alpha_rows:
        lines.append(_dump({"table": "sharpness-sweep", **row}))
    lines.append(
        _dump(
            {
                "command": "replay-examples",
                "fixtures": len(records),
                "failures": failures,
                "discretize_n": cfg.discretize_n,
            }
        )
    )
    _emit(lines, cfg.out)
    if cfg.csv is not None:
        with open(cfg.csv, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["series", "x", "p", "value", "reference"])
            for n, p, ratio, exact in lattice_rows:
                writer.writerow(["lattice-ratio", n, p, repr(ratio), repr(exact)])
            for row in alpha_rows:
                writer.writerow(
                    ["sharpness-ratio", row["alpha"], 1.0, repr(row["ratio"]), repr(2.0)]
                )
    return EXIT_OK if failures == 0 else EXIT_INVARIANT


_HANDLERS = {
    "project": cmd_project,
    "distance": cmd_distance,
    "order-check": cmd_order_check,
    "lattice": cmd_lattice,
    "audit": cmd_audit,
    "replay-examples": cmd_replay_examples,
}


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else list(argv))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _HANDLERS[cfg.command](cfg)
    except BrokenPipeError:
        # downstream closed stdout (e.g. piped into head); not an input problem
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (OSError, MalformedRecord) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoConvergence as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ValueError as exc:
        print(f"invariant error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
