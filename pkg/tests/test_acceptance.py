"""Exit criteria. Each test prints one PASS/FAIL line and asserts."""
import random
import time

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from smm110.asm import FORWARD, If, JumpTarget, Program, Stop, parse, render
from smm110.codegen import corpus_listing1, corpus_listing2, gen_program, gen_update_block
from smm110.eca import evolve, row_str, single_on, step_row
from smm110.graph import StorageGraph
from smm110.harness import MATCH, block_truth_table, diff_run, extract_row, generation_starts, neighborhood_machine, random_rows
from smm110.vm import (
    END_OF_PROGRAM,
    FAULTED,
    HALTED,
    INVALID_PATH_IN_CENTER,
    JUMP_BEFORE_START,
    NODE_LIMIT,
    STEP_LIMIT,
    STOP,
    Limits,
    load,
)

from test_asm import instructions


@pytest.fixture
def verdict(capsys):
    def emit(number, name, ok, elapsed, limit):
        ok = bool(ok) and elapsed < limit
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, limit {limit}s)")
        return ok

    return emit


def test_1_listing1_fidelity(verdict):
    t0 = time.perf_counter()
    m = load(corpus_listing1(), StorageGraph())
    status = m.run()
    g = m.graph
    checks = [
        status.state == HALTED and status.reason == STOP,
        g.reachable_count() == 8,
        g.resolve("eeeeeee") == g.center,
        all(g.resolve_from(g.resolve("e" * k), "eeeeeee") == g.resolve("e" * k) for k in range(7)),
        row_str(extract_row(g, g.center, 7)) == "0001000",
    ]
    assert verdict(1, "Listing-1 fidelity", all(checks), time.perf_counter() - t0, 1.0), checks


def test_2_listing2_truth_table(verdict):
    t0 = time.perf_counter()
    table = block_truth_table(corpus_listing2())
    expected = [int(b) for b in "01101110"]  # 111 first
    got = [table[(l, c, r)] for l in (1, 0) for c in (1, 0) for r in (1, 0)]
    hits = sum(a == b for a, b in zip(got, expected))
    assert verdict(2, f"Listing-2 truth table ({hits}/8)", hits == 8, time.perf_counter() - t0, 1.0), got


def test_3_figure2_scenario(verdict):
    t0 = time.perf_counter()
    row = single_on(21)
    m = load(gen_program(row, 110, 9), StorageGraph())
    status = m.run()
    g = m.graph
    starts = generation_starts(g, g.center, 9)
    rows = [extract_row(g, s, 21) for s in starts]
    checks = [
        status.state == HALTED and status.reason == STOP,
        rows == evolve(row, 110, 9),
        g.reachable_count() == 211 == 21 * 10 + 1,
    ]
    assert verdict(3, "Figure-2 scenario", all(checks), time.perf_counter() - t0, 1.0), checks


def test_4_all_rules_sweep(verdict):
    t0 = time.perf_counter()
    total = matched = 0
    failures = []
    for rule in range(256):
        for row in random_rows(2024, rule, 11, 4):
            rep = diff_run(row, rule, 16)
            total += 1
            if rep.verdict == MATCH:
                matched += 1
            else:
                failures.append((rule, row_str(row), rep.mismatch))
    ok = matched == total == 1024
    assert verdict(4, f"all-256-rules sweep ({matched}/{total})", ok, time.perf_counter() - t0, 60.0), failures[:5]


def _filler(k):
    return [If("", "", JumpTarget(FORWARD, 1))] * k


def test_5_property_suites(verdict):
    t0 = time.perf_counter()
    results = {}

    # parse . render idempotence: corpus + 1000 generated programs
    corpus_ok = all(parse(render(p)) == p for p in (corpus_listing1(), corpus_listing2()))
    seen = []

    @settings(max_examples=1000, deadline=None, database=None, derandomize=True,
              suppress_health_check=list(HealthCheck))
    @given(st.lists(instructions, max_size=20))
    def roundtrip(code):
        prog = Program(code)
        once = parse(render(prog))
        assert once == prog and parse(render(once)) == once
        seen.append(1)

    roundtrip()
    results["parse/render"] = corpus_ok and len(seen) >= 1000

    # relocatability: splice at random offsets
    rng = random.Random(5)
    reloc = True
    for rule in rng.sample(range(256), 32):
        block = gen_update_block(rule)
        ref = block_truth_table(block)
        for bits, state in ref.items():
            m = neighborhood_machine(*bits)
            m.program = Program(_filler(rng.randint(0, 30)) + block + _filler(rng.randint(0, 5)) + [Stop("ok")])
            m.pc = 1
            m.run()
            x = m.graph.center
            reloc &= m.status.message == "ok" and (0 if m.graph.out(x, "n") == x else 1) == state
    results["relocatability"] = reloc

    # old-generation immutability
    immut = True
    for _ in range(40):
        rule, width, t = rng.randrange(256), rng.randint(1, 10), rng.randint(0, 5)
        row = [rng.randint(0, 1) for _ in range(width)]
        a = load(gen_program(row, rule, t), StorageGraph())
        a.run()
        b = load(gen_program(row, rule, t + 1), StorageGraph())
        b.run()
        immut &= b.graph.snapshot(range(len(a.graph))) == a.graph.snapshot()
    results["immutability"] = immut

    # rotation equivariance of the oracle
    rot_ok = True
    for _ in range(2000):
        w = rng.randint(1, 20)
        row = tuple(rng.randint(0, 1) for _ in range(w))
        k, rule = rng.randrange(w), rng.randrange(256)
        rot = lambda r: r[k:] + r[:k]
        rot_ok &= step_row(rot(row), rule) == rot(step_row(row, rule))
    results["rotation"] = rot_ok

    # determinism
    det = True
    for rule in (30, 110, 150):
        row = random_rows(9, rule, 9, 1)[0]
        det &= diff_run(row, rule, 8).to_json(timing=False) == diff_run(row, rule, 8).to_json(timing=False)
    results["determinism"] = det

    ok = all(results.values())
    assert verdict(5, f"property suites {results}", ok, time.perf_counter() - t0, 60.0), results


def test_6_fault_semantics(verdict):
    t0 = time.perf_counter()
    checks = {}

    m = load(parse("ctr n"), StorageGraph())
    s = m.run()
    checks["ctr n"] = s.state == FAULTED and s.reason == INVALID_PATH_IN_CENTER

    m = load(parse("set n\nset n\nif s s -9"), StorageGraph())
    s = m.run()
    checks["jump below 1"] = s.state == FAULTED and s.reason == JUMP_BEFORE_START and s.at == 3

    m = load(parse("set n\nif s s +7\nset n"), StorageGraph())
    s = m.run()
    checks["jump past end"] = s.state == HALTED and s.reason == END_OF_PROGRAM and m.steps == 2

    m = load(parse("1 if s s 1"), StorageGraph())
    s = m.run(Limits(max_steps=100))
    checks["step limit"] = s.reason == STEP_LIMIT and m.steps == 100

    m = load(parse("new\nif . . -1"), StorageGraph())
    s = m.run(Limits(max_nodes=10))
    checks["node limit"] = s.reason == NODE_LIMIT and m.nodes_created == 10 and m.steps == 20

    ok = all(checks.values())
    assert verdict(6, "fault semantics", ok, time.perf_counter() - t0, 1.0), checks
