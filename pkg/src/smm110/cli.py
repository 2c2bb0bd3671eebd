"""Command-line front end: ``smm110 run|gen|eca|check``."""
from __future__ import annotations

import argparse
import os
import sys
import time
from collections import Counter

from .asm import ParseError, parse, render, validate
from .codegen import gen_program
from .eca import as_row, single_on
from .graph import StorageGraph
from .harness import FAULT, MATCH, diff_run, render_spacetime, sweep
from .vm import FAULTED, Limits, MachineError, load

EXIT_OK = 0
EXIT_FAULT = 2
EXIT_MISMATCH = 3
EXIT_USAGE = 64
EXIT_FILE = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def int_range(text: str) -> list:
    """Parse '3..16', '5', or '0,30,110' into a list of ints."""
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise ValueError
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid range {text!r}") from None
    return out


def positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def rule_number(text: str) -> int:
    value = non_negative(text)
    if value > 255:
        raise argparse.ArgumentTypeError(f"rule must be in 0..255: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smm110", description="Storage modification machine toolkit for elementary cellular automata.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add_limits(p):
        p.add_argument("--max-steps", type=positive, default=Limits().max_steps)
        p.add_argument("--max-nodes", type=positive, default=Limits().max_nodes)

    def add_row(p):
        p.add_argument("--rule", type=rule_number, required=True)
        p.add_argument("--width", type=positive, required=True)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--pattern", help="initial row as a string of 0/1")
        group.add_argument("--single-on", action="store_true", help="one on cell at index width // 2 (default)")
        p.add_argument("--iters", type=non_negative, required=True)

    p = sub.add_parser("run", help="execute an .smm program")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true", help="print one line per executed instruction")
    p.add_argument("--dot", metavar="OUT", help="write the final graph as DOT")
    add_limits(p)

    p = sub.add_parser("gen", help="emit the SMM program for an ECA run")
    add_row(p)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("eca", help="generate, execute and verify against the oracle")
    add_row(p)
    p.add_argument("--diagram", metavar="OUT", help="spacetime diagram (.txt or .pbm)")
    p.add_argument("--dot", metavar="OUT")
    p.add_argument("--report", metavar="OUT", help="JSON run report")
    add_limits(p)

    p = sub.add_parser("check", help="sweep rules and random rows against the oracle")
    p.add_argument("--widths", type=int_range, default=int_range("3..16"))
    p.add_argument("--iters", type=non_negative, default=16)
    p.add_argument("--seed", default=os.environ.get("SMM110_SEED", "0"))
    p.add_argument("--rules", type=int_range, default=int_range("0..255"))
    p.add_argument("--rows", type=positive, default=4, help="random rows per (rule, width)")
    p.add_argument("--jobs", type=positive, default=1)
    return parser


def _initial_row(args) -> tuple:
    if args.pattern is None:
        return single_on(args.width)
    try:
        row = as_row(args.pattern)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(row) != args.width:
        raise UsageError(f"--pattern has {len(row)} cells, --width is {args.width}")
    return row


def _write(path: str, data) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def cmd_run(args, out) -> int:
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    try:
        program = parse(text)
    except ParseError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return EXIT_USAGE
    for diag in validate(program):
        print(f"{args.file}:{diag}", file=sys.stderr)
    try:
        machine = load(program, StorageGraph(program.alphabet))
    except MachineError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    trace = (lambda ev: print(ev, file=out)) if args.trace else None
    status = machine.run(Limits(args.max_steps, args.max_nodes), trace=trace)
    print(status, file=out)
    print(f"steps: {machine.steps}", file=out)
    print(f"nodes created: {machine.nodes_created}", file=out)
    print(f"reachable: {machine.graph.reachable_count()}", file=out)
    if args.dot:
        _write(args.dot, machine.graph.to_dot())
    return EXIT_FAULT if status.state == FAULTED else EXIT_OK


def cmd_gen(args, out) -> int:
    program = gen_program(_initial_row(args), args.rule, args.iters)
    _write(args.output, render(program))
    print(f"wrote {len(program)} instructions to {args.output}", file=out)
    return EXIT_OK


def cmd_eca(args, out) -> int:
    row = _initial_row(args)
    limits = Limits(args.max_steps, args.max_nodes)
    report, machine = diff_run(row, args.rule, args.iters, limits, keep_machine=True)
    print(f"rule {report.rule} width {report.width} iterations {report.iterations}", file=out)
    print(report.status, file=out)
    print(f"steps: {report.steps}", file=out)
    print(f"nodes created: {report.nodes_created}", file=out)
    print(f"reachable: {report.reachable}", file=out)
    print(f"verdict: {report.verdict}", file=out)
    if report.mismatch:
        print(f"detail: {report.mismatch}", file=out)
    if args.report:
        _write(args.report, report.to_json())
    if args.dot:
        _write(args.dot, machine.graph.to_dot())
    if args.diagram:
        fmt = "pbm" if args.diagram.endswith(".pbm") else "text"
        _write(args.diagram, render_spacetime(report.rows or report.expected_rows, fmt))
    if report.verdict == FAULT:
        return EXIT_FAULT
    return EXIT_OK if report.verdict == MATCH else EXIT_MISMATCH


def cmd_check(args, out) -> int:
    bad = [r for r in args.rules if not 0 <= r <= 255]
    if bad or any(w < 1 for w in args.widths):
        raise UsageError("rules must be in 0..255 and widths >= 1")
    t0 = time.perf_counter()
    results = sweep(args.rules, args.widths, args.iters, args.seed, args.rows, args.jobs)
    elapsed = time.perf_counter() - t0
    by_width = {}
    for res in results:
        by_width.setdefault(res.width, Counter())[res.verdict] += 1
    print(f"{'width':>5} {'cases':>6} {'match':>6} {'fail':>6}", file=out)
    for width in sorted(by_width):
        c = by_width[width]
        total = sum(c.values())
        print(f"{width:>5} {total:>6} {c[MATCH]:>6} {total - c[MATCH]:>6}", file=out)
    failures = [r for r in results if r.verdict != MATCH]
    for res in failures[:20]:
        print(f"FAIL rule {res.rule} row {res.row}: {res.verdict} {res.mismatch}", file=out)
    print(f"{len(results) - len(failures)}/{len(results)} cases match "
          f"(rules {len(args.rules)}, iterations {args.iters}, seed {args.seed}, {elapsed:.1f}s)", file=out)
    return EXIT_OK if not failures else EXIT_MISMATCH


COMMANDS = {"run": cmd_run, "gen": cmd_gen, "eca": cmd_eca, "check": cmd_check}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"smm110: {exc}", file=sys.stderr)
        return EXIT_FILE


if __name__ == "__main__":
    sys.exit(main())
