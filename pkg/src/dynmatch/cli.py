"""Command-line harness: run | gen | fixture | audit."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .harness import (ALGORITHMS, EXIT_AUDIT_FAILURE, RunConfig,
                      run_experiment)
from .oracle import build_tightness_fixture
from .streams import (StreamFormatError, UpdateStream, format_stream,
                      generate_stream, parse_stream)


def _add_common_run_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--alg", required=True, choices=ALGORITHMS)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--stream", required=True, help="stream file to replay")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--audit-every", type=int, default=0,
                    help="0 = every update for T<=2000, else every 100")
    sp.add_argument("--oracle-every", type=int, default=0,
                    help="sample exact oracle every N updates (0 = never)")
    sp.add_argument("--no-timing", action="store_true",
                    help="suppress the wall-clock column for golden diffs")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dynmatch",
        description="Dynamic vertex cover / matching structures: replay "
                    "update streams, audit invariants, emit CSV metrics.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a stream and write CSV metrics")
    _add_common_run_flags(run)
    run.add_argument("--out", help="CSV output path (default: stdout)")

    gen = sub.add_parser("gen", help="generate a replay-valid stream file")
    gen.add_argument("--kind", required=True,
                     choices=("random", "sliding_window", "adversarial"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("-T", "--updates", type=int, required=True,
                     help="events (random/adversarial) or inserted edges "
                          "(sliding_window)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--p", type=float, default=0.5,
                     help="insert probability for the random kind")
    gen.add_argument("--window", type=int, default=10,
                     help="window size for the sliding_window kind")
    gen.add_argument("--target-alg", default="sqrtn", choices=ALGORITHMS,
                     help="structure the adversarial kind co-simulates")
    gen.add_argument("--target-eps", type=float, default=0.3)
    gen.add_argument("--p-delete", type=float, default=0.6)
    gen.add_argument("--out", help="stream output path (default: stdout)")

    fix = sub.add_parser("fixture",
                         help="write the kernel tightness fixture as a stream")
    fix.add_argument("--c", type=int, required=True, help="even degree budget")
    fix.add_argument("--out", required=True,
                     help="output prefix; writes <out>.stream and "
                          "<out>.expected.json")

    aud = sub.add_parser("audit",
                         help="replay a stream with auditing, no CSV output")
    _add_common_run_flags(aud)
    return ap


def _load_stream(path: str) -> UpdateStream:
    return parse_stream(Path(path).read_text())


def _cmd_run(args: argparse.Namespace, with_csv: bool) -> int:
    try:
        stream = _load_stream(args.stream)
    except (OSError, StreamFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = RunConfig(algorithm=args.alg, epsilon=args.eps, stream=stream,
                    audit_every=args.audit_every,
                    oracle_every=args.oracle_every, seed=args.seed,
                    no_timing=args.no_timing)
    result = run_experiment(cfg)
    for msg in result.diagnostics:
        print(f"audit: {msg}", file=sys.stderr)
    if with_csv:
        if args.out:
            Path(args.out).write_text(result.csv_text)
        else:
            sys.stdout.write(result.csv_text)
    else:
        verdict = "ok" if result.ok else "FAILED"
        print(f"{args.alg} eps={args.eps}: {len(stream)} updates, "
              f"audits {verdict}")
        if not result.ok and not result.diagnostics:
            print("audit: run aborted", file=sys.stderr)
    return result.exit_status


def _cmd_gen(args: argparse.Namespace) -> int:
    params = {"p": args.p, "window": args.window, "alg": args.target_alg,
              "eps": args.target_eps, "p_delete": args.p_delete}
    try:
        stream = generate_stream(args.kind, args.n, args.updates,
                                 params=params, seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = format_stream(stream)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_fixture(args: argparse.Namespace) -> int:
    try:
        fx = build_tightness_fixture(args.c)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    events = [("+", u, v) for (u, v) in fx.graph.edge_keys()]
    stream = UpdateStream(n=fx.graph.n, events=events)
    prefix = Path(args.out)
    stream_path = prefix.with_suffix(".stream")
    sidecar_path = prefix.with_suffix(".expected.json")
    stream_path.write_text(format_stream(stream))
    sidecar_path.write_text(json.dumps({
        "c": fx.c,
        "nodes": fx.graph.n,
        "kernel_matching_size": fx.c // 2,
        "max_matching_lower_bound": 2 * fx.c,
    }, indent=2) + "\n")
    print(f"wrote {stream_path} and {sidecar_path}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args, with_csv=True)
    if args.command == "audit":
        return _cmd_run(args, with_csv=False)
    if args.command == "gen":
        return _cmd_gen(args)
    if args.command == "fixture":
        return _cmd_fixture(args)
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
