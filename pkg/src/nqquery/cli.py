"""Command line entry point: ``nqquery {run,classify,compose,metrics,export,verify-paper}``.

Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage or
validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import algolib
from .algorithm import AlgorithmFormatError, QueryAlgorithm, query_count, read_algorithm, run, save_algorithm
from .classify import DEFAULT_EPSILON, classify, partition_inputs
from .compose import BlockSpec, compose_parallel
from .functions import (
    FunctionFormatError,
    MAX_D_VARS,
    decision_tree_complexity,
    parse_bits,
    resolve_function,
    sensitivity,
)
from .quantum_core import StructuralError
from .verify import format_checks, run_verification

MAX_CLASSIFY_VARS = 24


class UsageError(Exception):
    pass


def resolve_algorithm(ref: str, base: Path | None = None) -> QueryAlgorithm:
    """Builtin name, else a path to an algorithm JSON file."""
    try:
        return algolib.builtin_algorithm(ref)
    except KeyError:
        pass
    p = Path(ref)
    if base is not None and not p.is_absolute():
        p = base / p
    if not p.is_file():
        raise UsageError(f"{ref!r} is neither a builtin algorithm name nor a readable file")
    return read_algorithm(p)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_run(args) -> int:
    algo = resolve_algorithm(args.algo)
    bits = parse_bits(args.input)
    dist = run(algo, bits)
    if args.format == "json":
        print(_dump({"input": args.input, "p0": dist.p0, "p1": dist.p1,
                     "final_state": [[z.real, z.imag] for z in dist.final_state]}))
    else:
        print(f"input {args.input}  p0 = {dist.p0:.12g}  p1 = {dist.p1:.12g}")
    return 0


def cmd_classify(args) -> int:
    algo = resolve_algorithm(args.algo)
    f = resolve_function(args.function)
    if f.num_vars > MAX_CLASSIFY_VARS:
        raise UsageError(f"refusing to enumerate 2^{f.num_vars} inputs (limit n <= {MAX_CLASSIFY_VARS})")
    report = classify(algo, f, args.epsilon)
    part = partition_inputs(algo, args.epsilon)
    if args.format == "json":
        doc = report.to_dict()
        doc["queries"] = query_count(algo)
        doc["partition"] = {k: sorted(v) for k, v in
                            (("A", part.set_A), ("B", part.set_B), ("C", part.set_C))}
        print(_dump(doc))
        return 0
    print(report.table())
    print()
    print(f"queries: {query_count(algo)}   epsilon: {args.epsilon:g}")
    for cls, label in (("exact", "exact"), ("nq1", "NQ1"), ("nq0", "NQ0")):
        ok = report.verdicts()[cls]
        line = f"{label:<6} {'yes' if ok else 'no'}"
        c = report.counterexamples.get(cls)
        if c is not None:
            line += f"   counterexample {c.input}: p0={c.p0:.9g} p1={c.p1:.9g} f={c.value}"
        print(line)
    print(f"partition: |A|={len(part.set_A)} |B|={len(part.set_B)} |C|={len(part.set_C)}")
    return 0


def load_descriptor(path: Path) -> tuple[list[BlockSpec], int, int | None]:
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read descriptor {path}: {exc}") from None
    if not isinstance(doc, dict) or "blocks" not in doc or "total_vars" not in doc:
        raise UsageError("descriptor must be an object with 'blocks' and 'total_vars'")
    if not isinstance(doc["blocks"], list):
        raise UsageError("descriptor 'blocks' must be a list")
    blocks = []
    for i, raw in enumerate(doc["blocks"]):
        if not isinstance(raw, dict) or "algorithm" not in raw or "map" not in raw:
            raise UsageError(f"block {i}: needs 'algorithm' and 'map'")
        if not isinstance(raw["map"], list) or not all(isinstance(k, int) for k in raw["map"]):
            raise UsageError(f"block {i}: 'map' must be a list of integers")
        blocks.append(BlockSpec(resolve_algorithm(raw["algorithm"], base=path.parent), raw["map"]))
    return blocks, doc["total_vars"], doc.get("pad_to")


def cmd_compose(args) -> int:
    blocks, total, pad_to = load_descriptor(Path(args.descriptor))
    if args.pad_to is not None:
        pad_to = args.pad_to
    algo = compose_parallel(blocks, total, pad_to=pad_to)
    text = json.dumps(save_algorithm(algo), indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote {args.out}: dimension {algo.dimension}, {algo.num_vars} variables, "
              f"{query_count(algo)} queries")
    else:
        print(text)
    return 0


def cmd_export(args) -> int:
    algo = resolve_algorithm(args.algo)
    text = json.dumps(save_algorithm(algo), indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_metrics(args) -> int:
    f = resolve_function(args.function)
    limit = min(args.max_n, MAX_D_VARS)
    if f.num_vars > limit:
        raise UsageError(f"D(f) over 3^{f.num_vars} subcubes refused (limit n <= {limit})")
    s = sensitivity(f)
    d = decision_tree_complexity(f, max_vars=limit)
    if args.format == "json":
        print(_dump({"function": args.function, "num_vars": f.num_vars, "sensitivity": s, "decision_tree": d}))
    else:
        print(f"{args.function}: n={f.num_vars}  s={s}  D={d}")
    return 0


def cmd_verify(args) -> int:
    checks, gaps = run_verification(max_n=args.max_n, epsilon=args.epsilon)
    if args.format == "json":
        print(_dump({
            "checks": [c.to_dict() for c in checks],
            "gap_table": [g.__dict__ for g in gaps],
            "passed": all(c.passed for c in checks),
        }))
    else:
        print(format_checks(checks, gaps))
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nqquery", description="Quantum query algorithm simulator and verifier.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("run", help="run an algorithm on one input")
    sp.add_argument("--algo", required=True, help="builtin name or algorithm JSON path")
    sp.add_argument("--input", required=True, help="bitstring x1..xn")
    fmt(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("classify", help="exhaustively classify an algorithm against a function")
    sp.add_argument("--algo", required=True)
    sp.add_argument("--function", required=True, help="builtin name or truth-table path")
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    fmt(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("compose", help="parallel-compose algorithms from a JSON descriptor")
    sp.add_argument("descriptor")
    sp.add_argument("--out")
    sp.add_argument("--pad-to", type=int, default=None, help="pad with idle label-0 amplitudes up to this dimension")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("export", help="write a builtin algorithm as JSON")
    sp.add_argument("--algo", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("metrics", help="sensitivity and decision-tree complexity")
    sp.add_argument("--function", required=True)
    sp.add_argument("--max-n", type=int, default=MAX_D_VARS)
    fmt(sp)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("verify-paper", help="re-check every claim exhaustively")
    sp.add_argument("--max-n", type=int, default=9)
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    fmt(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, StructuralError, AlgorithmFormatError, FunctionFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
