"""Differential runs of generated SMM programs against the array oracle."""
from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from .asm import New, Program, render
from .codegen import gen_program
from .eca import NEIGHBORHOODS, as_row, evolve, row_str
from .graph import NodeId, StorageGraph
from .vm import FAULTED, Limits, Machine, load

MATCH = "match"
MISMATCH = "mismatch"
FAULT = "fault"


class RowError(ValueError):
    """The e-walk from a start node is not a ring of the expected width."""


def extract_row(graph: StorageGraph, start: NodeId, width: int) -> tuple:
    """Read cell states along the e ring starting at ``start``."""
    bits = []
    node = start
    for i in range(width):
        if i and node == start:
            raise RowError(f"ring from node {start} closes after {i} cells, expected {width}")
        n = graph.out(node, "n")
        if n is None:
            raise RowError(f"node {node} has no n edge")
        bits.append(0 if n == node else 1)
        node = graph.out(node, "e")
        if node is None:
            raise RowError(f"e-walk from node {start} breaks after {i + 1} cells")
    if node != start:
        raise RowError(f"e-walk from node {start} does not return after {width} cells")
    return tuple(bits)


def generation_starts(graph: StorageGraph, last: NodeId, iterations: int) -> list:
    """Cell-0 node of each generation, oldest first, by following s edges."""
    starts = [last]
    for _ in range(iterations):
        prev = graph.out(starts[-1], "s")
        if prev is None:
            raise RowError(f"node {starts[-1]} has no s edge")
        starts.append(prev)
    return starts[::-1]


def program_hash(program: Program) -> str:
    return hashlib.sha256(render(program).encode()).hexdigest()[:16]


@dataclass
class RunReport:
    program: str
    rule: int
    width: int
    iterations: int
    status: str
    stop_message: Optional[str]
    steps: int
    nodes_created: int
    reachable: int
    reachable_per_generation: list
    rows: list
    expected_rows: list
    verdict: str
    mismatch: Optional[dict] = None
    timing: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == MATCH

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("timing")
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def compare_rows(got: Sequence, want: Sequence) -> Optional[dict]:
    """First (generation, cell) where two row sequences differ, or None."""
    for g, (a, b) in enumerate(zip(got, want)):
        for i, (x, y) in enumerate(zip(a, b)):
            if x != y:
                return {"generation": g, "cell": i}
        if len(a) != len(b):
            return {"generation": g, "cell": min(len(a), len(b))}
    if len(got) != len(want):
        return {"generation": min(len(got), len(want)), "cell": 0}
    return None


def diff_run(row, rule: int, iterations: int, limits: Optional[Limits] = None,
             block=None, keep_machine: bool = False):
    """Generate, execute and check one simulation.

    Returns the report, or ``(report, machine)`` with ``keep_machine``.
    """
    row = as_row(row)
    t0 = time.perf_counter()
    program = gen_program(row, rule, iterations, block=block)
    t1 = time.perf_counter()
    machine = load(program, StorageGraph())
    status = machine.run(limits)
    t2 = time.perf_counter()
    expected = [row_str(r) for r in evolve(row, rule, iterations)]
    rows, per_gen, mismatch = [], [], None
    graph = machine.graph
    if status.state == FAULTED:
        verdict = FAULT
        mismatch = {"fault": status.reason, "at": status.at}
    else:
        try:
            starts = generation_starts(graph, graph.center, iterations)
            got = [extract_row(graph, s, len(row)) for s in starts]
            rows = [row_str(r) for r in got]
            per_gen = [len(graph.reachable(s)) for s in starts]
            mismatch = compare_rows(rows, expected)
        except RowError as exc:
            mismatch = {"error": str(exc)}
        verdict = MATCH if mismatch is None else MISMATCH
    report = RunReport(
        program=program_hash(program),
        rule=rule,
        width=len(row),
        iterations=iterations,
        status=str(status),
        stop_message=status.message,
        steps=machine.steps,
        nodes_created=machine.nodes_created,
        reachable=graph.reachable_count(),
        reachable_per_generation=per_gen,
        rows=rows,
        expected_rows=expected,
        verdict=verdict,
        mismatch=mismatch,
        timing={"generate_s": round(t1 - t0, 6), "execute_s": round(t2 - t1, 6)},
    )
    return (report, machine) if keep_machine else report


def render_spacetime(rows: Iterable, fmt: str = "text") -> bytes:
    """Stack generations top to bottom as text ('.'/'#') or plain PBM."""
    rows = [as_row(r) for r in rows]
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("all rows of a spacetime diagram must have the same width")
    if fmt == "text":
        return "".join("".join(".#"[c] for c in r) + "\n" for r in rows).encode()
    if fmt == "pbm":
        width = len(rows[0]) if rows else 0
        lines = ["P1", f"{width} {len(rows)}"] + [" ".join(str(c) for c in r) for r in rows]
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown diagram format {fmt!r}")


def random_rows(seed, rule: int, width: int, count: int) -> list:
    rng = random.Random(f"{seed}:{rule}:{width}")
    return [tuple(rng.randint(0, 1) for _ in range(width)) for _ in range(count)]


@dataclass
class CaseResult:
    rule: int
    width: int
    row: str
    verdict: str
    mismatch: Optional[dict]


def check_case(args) -> CaseResult:
    rule, width, row, iterations = args
    report = diff_run(row, rule, iterations)
    return CaseResult(rule, width, row_str(row), report.verdict, report.mismatch)


def sweep(rules: Iterable[int], widths: Iterable[int], iterations: int, seed,
          rows_per_case: int = 4, jobs: int = 1) -> list:
    """Run every (rule, width, random row) case; results in input order."""
    cases = [
        (rule, width, row, iterations)
        for rule in rules
        for width in widths
        for row in random_rows(seed, rule, width, rows_per_case)
    ]
    if jobs <= 1:
        return [check_case(c) for c in cases]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(check_case, cases, chunksize=32))


def neighborhood_machine(left: int, center: int, right: int):
    """Machine standing on a fresh cell whose predecessor neighbourhood is given.

    The predecessor row is a three-cell ring W, C, E built with the raw
    graph primitives; the fresh cell is created by ``new`` from C, so its
    ``s`` edge points at C.
    """
    g = StorageGraph()
    cells = [g.add_node(g.origin, name) for name in ("W", "C", "E")]
    for k, node in enumerate(cells):
        g.set_edge(node, "e", cells[(k + 1) % 3])
        g.set_edge(node, "w", cells[k - 1])
    for node, bit in zip(cells, (left, center, right)):
        g.set_edge(node, "n", g.origin if bit else node)
    g.set_center(cells[1])
    machine = Machine(g, Program([]))
    machine.run_block([New("X")])
    return machine


def block_truth_table(block, limits: Optional[Limits] = None) -> dict:
    """Next state written by ``block`` for each (W, C, E) neighbourhood."""
    table = {}
    for l, c, r in NEIGHBORHOODS:
        m = neighborhood_machine(l, c, r)
        status = m.run_block(block, limits)
        if not status.running:
            raise RowError(f"block did not exit cleanly on {l}{c}{r}: {status}")
        x = m.graph.center
        table[(l, c, r)] = 0 if m.graph.out(x, "n") == x else 1
    return table
