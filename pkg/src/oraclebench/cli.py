"""Command-line entry point: ``oraclebench <subcommand> [options]``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.

Seeds: ``--seed`` wins, then the ``ORACLEBENCH_SEED`` environment variable,
then ``DEFAULT_SEED``.  Every random draw in a run is derived from that one
seed (see each subcommand's help), so equal seeds give byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .errors import OracleBenchError
from .graphs import MAX_SUPERPOSITION_VERTICES, check_non_automorphic, compare_graphs, load_graph
from .grover import CSV_HEADER, MAX_GROVER_QUBITS, query_scaling_table
from .identities import IDENTITY_NAMES, MAX_IDENTITY_QUBITS, verify_identity
from .oracles import load_permutation
from .promise import DISJOINT, IDENTICAL, MAX_PROMISE_QUBITS, make_instance, promise_report

DEFAULT_SEED = 20010
SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ORACLEBENCH_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ORACLEBENCH_SEED must be an integer, got {env!r}") from None


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_verify_identities(args) -> int:
    n = 3 if args.n is None else args.n
    if not 1 <= n <= MAX_IDENTITY_QUBITS:
        raise UsageError(f"--n {n} is outside the cap 1..{MAX_IDENTITY_QUBITS} for verify-identities")
    seed = _resolve_seed(args)
    perm = None
    if args.perm:
        try:
            perm = load_permutation(args.perm)
        except (OSError, OracleBenchError) as exc:
            raise UsageError(f"cannot load permutation {args.perm}: {exc}") from None
        if args.n is not None and perm.n != n:
            raise UsageError(f"permutation file acts on n = {perm.n}, but --n {n} was given")
        n = perm.n
    results = [verify_identity(name, n, perm=perm, seed=seed, inject_fault=args.inject_fault)
               for name in IDENTITY_NAMES]
    if args.format == "csv":
        text = _csv(["identity_name", "n", "mode", "max_deviation", "tolerance", "queries_used", "passed"],
                    [[r.identity_name, r.n, r.mode, repr(r.max_deviation), repr(r.tolerance),
                      _dumps(r.queries_used), r.passed] for r in results])
    else:
        lines = []
        for r in results:
            record = dict(vars(r), schema_version=SCHEMA_VERSION, seed=seed)
            lines.append(_dumps(record) + "\n")
        text = "".join(lines)
    _emit(text, args)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_promise(args) -> int:
    n = 4 if args.n is None else args.n
    if not 1 <= n <= MAX_PROMISE_QUBITS:
        raise UsageError(f"--n {n} is outside the cap 1..{MAX_PROMISE_QUBITS} for promise")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    seed = _resolve_seed(args)
    size = args.subset_size
    limit = (1 << n) // 2 if args.case == DISJOINT else 1 << n
    if not 1 <= size <= limit:
        raise UsageError(f"--subset-size {size} invalid for case {args.case} at n = {n}; need 1..{limit}")
    # the instance draws from `seed`; sampled trial i measures with seed + 1 + i
    instance = make_instance(n, size, args.case, seed)
    report = promise_report(instance, args.trials, seed + 1)
    report["schema_version"] = SCHEMA_VERSION
    report["seed"] = seed
    if args.format == "csv":
        keys = sorted(report)
        text = _csv(keys, [[report[k] for k in keys]])
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    _emit(text, args)
    return EXIT_OK


def cmd_grover_scaling(args) -> int:
    lo, hi = args.n_min, args.n_max
    if not (1 <= lo <= hi <= MAX_GROVER_QUBITS):
        raise UsageError(f"need 1 <= --n-min <= --n-max <= {MAX_GROVER_QUBITS}, got {lo}..{hi}")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    seed = _resolve_seed(args)
    rows = query_scaling_table(range(lo, hi + 1), perms_per_n=args.trials, seed=seed)
    if args.format == "json":
        text = json.dumps({"schema_version": SCHEMA_VERSION, "seed": seed,
                           "rows": [dict(zip(CSV_HEADER, (r.n, r.N, r.iterations, r.sf_queries,
                                                          r.mean_success_probability))) for r in rows]},
                          sort_keys=True, indent=2) + "\n"
    else:
        text = _csv(CSV_HEADER, [[r.n, r.N, r.iterations, r.sf_queries, repr(r.mean_success_probability)]
                                 for r in rows])
    _emit(text, args)
    return EXIT_OK if all(r.within_bound() for r in rows) else EXIT_FAIL


def cmd_graph_iso(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    seed = _resolve_seed(args)
    graphs = []
    for path in (args.graph1, args.graph2):
        try:
            graphs.append(load_graph(path))
        except (OSError, OracleBenchError) as exc:
            raise UsageError(f"graph {path}: {exc}") from None
    for path, g in zip((args.graph1, args.graph2), graphs):
        if g.vertex_count > MAX_SUPERPOSITION_VERTICES:
            raise UsageError(f"graph {path}: {g.vertex_count} vertices exceeds the cap of {MAX_SUPERPOSITION_VERTICES}")
        if not check_non_automorphic(g):
            raise UsageError(f"graph {path}: automorphic graph (has a non-trivial automorphism)")
    try:
        result = compare_graphs(graphs[0], graphs[1], args.trials, seed)
    except OracleBenchError as exc:
        raise UsageError(str(exc)) from None
    summary = result.summary
    report = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "vertex_count": graphs[0].vertex_count,
        "overlap": result.overlap,
        "p_zero": result.p_zero,
        "p_one": result.p_one,
        "K": summary.trials,
        "zero_count": summary.zero_count,
        "verdict": result.verdict,
        "certain": summary.zero_count > 0,
        "error_bound": summary.error_bound,
    }
    if args.format == "csv":
        keys = sorted(report)
        text = _csv(keys, [[report[k] for k in keys]])
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    _emit(text, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oraclebench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default: $ORACLEBENCH_SEED or %d)" % DEFAULT_SEED)
    common.add_argument("--out", default=None, help="also write the report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-identities", parents=[common], help="check every oracle conversion identity")
    p.add_argument("--n", type=int, default=None, help=f"qubits per register (default 3, cap {MAX_IDENTITY_QUBITS})")
    p.add_argument("--perm", default=None, help="permutation file (line 1: n, line 2: images)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("promise", parents=[common], help="identical-or-disjoint images with minimal oracles")
    p.add_argument("--n", type=int, default=None, help=f"qubits per register (default 4, cap {MAX_PROMISE_QUBITS})")
    p.add_argument("--subset-size", type=int, default=4)
    p.add_argument("--case", choices=(IDENTICAL, DISJOINT), default=DISJOINT)
    p.add_argument("--trials", type=int, default=20, help="repetitions K")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_promise)

    p = sub.add_parser("grover-scaling", parents=[common], help="query counts of the Grover-based inverter")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--trials", type=int, default=1, help="random (permutation, y) instances per n")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_grover_scaling)

    p = sub.add_parser("graph-iso", parents=[common], help="compare two asymmetric graphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--trials", type=int, default=20, help="repetitions K")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_graph_iso)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"oraclebench {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleBenchError as exc:
        print(f"oraclebench {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
