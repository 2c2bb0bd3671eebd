import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smm110.asm import BACKWARD, FORWARD, Center, If, JumpTarget, New, Program, Set, Stop, parse, render
from smm110.codegen import EmissionPlan, gen_init, gen_program, gen_update_block
from smm110.eca import as_row, evolve, rule_table
from smm110.graph import StorageGraph
from smm110.harness import block_truth_table, extract_row, generation_starts, neighborhood_machine
from smm110.vm import HALTED, Machine, load

READ_PATHS = {"s", "sw", "se", "sn", "swn", "sen", ""}


def run_program(program):
    m = load(program, StorageGraph())
    m.run()
    return m


@pytest.mark.parametrize("rule", range(256))
def test_update_block_shape(rule):
    block = gen_update_block(rule)
    assert block[0] == Set("", "n", "s")
    assert len(block) <= 15
    for pc, ins in enumerate(block, start=1):
        assert not isinstance(ins, (New, Center, Stop))
        if isinstance(ins, Set):
            assert (ins.x, ins.d) == ("", "n") and ins.y in ("", "s")
        else:
            assert ins.x in READ_PATHS and ins.y in READ_PATHS
            assert ins.target.kind in (FORWARD, BACKWARD)
            assert 1 <= ins.target.resolve(pc) <= len(block) + 1


def test_update_block_truth_tables():
    for rule in range(256):
        assert block_truth_table(gen_update_block(rule)) == rule_table(rule), rule


def test_update_block_matches_listing2(listing2):
    assert block_truth_table(gen_update_block(110)) == block_truth_table(listing2)


def test_trivial_rules():
    assert set(block_truth_table(gen_update_block(0)).values()) == {0}
    table = block_truth_table(gen_update_block(204))
    assert all(v == c for (l, c, r), v in table.items())


def test_gen_init_listing1_row():
    m = run_program(gen_init("0001000"))
    g = m.graph
    assert m.status.state == HALTED
    assert extract_row(g, g.center, 7) == as_row("0001000")
    assert g.reachable_count() == 8
    assert g.label(g.center) == "c0-0"


def test_gen_init_width_one():
    for bit in (0, 1):
        m = run_program(gen_init([bit]))
        g = m.graph
        c = g.center
        assert g.out(c, "e") == c and g.out(c, "w") == c
        assert extract_row(g, c, 1) == (bit,)


def test_gen_init_rejects_empty():
    with pytest.raises(ValueError):
        gen_init([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=16))
def test_gen_init_round_trip(bits):
    m = run_program(gen_init(bits))
    g = m.graph
    w = len(bits)
    assert extract_row(g, g.center, w) == tuple(bits)
    assert g.resolve("e" * w) == g.center
    for k in range(w):
        cell = g.resolve("e" * k)
        assert g.resolve_from(cell, "ew") == cell
        assert g.resolve_from(cell, "we") == cell


def test_per_iteration_count():
    for width in (1, 2, 7, 11):
        row = [0] * width
        base = len(gen_program(row, 110, 0))
        one = len(gen_program(row, 110, 1))
        plan = EmissionPlan(row, 110, 1)
        assert one - base == plan.per_iteration_length()
    # with a 15-line block (Listing 2 size) the count is 18R + 1
    plan = EmissionPlan("0001000", 110, 1)
    assert plan.per_iteration_length(block=[None] * 15) == 18 * 7 + 1 == 127


def test_gen_program_one_step():
    m = run_program(gen_program("0001000", 110, 1))
    g = m.graph
    assert m.status.message == "done"
    assert extract_row(g, g.center, 7) == as_row("0011000")


def test_figure2_scenario():
    row = [0] * 21
    row[10] = 1
    m = run_program(gen_program(row, 110, 9))
    g = m.graph
    starts = generation_starts(g, g.center, 9)
    assert [extract_row(g, s, 21) for s in starts] == evolve(row, 110, 9)
    assert g.reachable_count() == 211 == EmissionPlan(row, 110, 9).expected_reachable()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 255), st.lists(st.integers(0, 1), min_size=1, max_size=9), st.integers(0, 5))
def test_generated_matches_oracle(rule, bits, t):
    m = run_program(gen_program(bits, rule, t))
    g = m.graph
    starts = generation_starts(g, g.center, t)
    assert [extract_row(g, s, len(bits)) for s in starts] == evolve(bits, rule, t)
    assert g.reachable_count() == len(bits) * (t + 1) + 1


def test_old_generations_untouched():
    rng = random.Random(3)
    for _ in range(20):
        rule = rng.randrange(256)
        width = rng.randint(1, 9)
        row = [rng.randint(0, 1) for _ in range(width)]
        t = rng.randint(0, 4)
        before = run_program(gen_program(row, rule, t)).graph
        after = run_program(gen_program(row, rule, t + 1)).graph
        assert after.snapshot(range(len(before))) == before.snapshot()


def _filler(k):
    return [If("", "", JumpTarget(FORWARD, 1))] * k


def test_block_relocatable():
    rng = random.Random(11)
    for rule in rng.sample(range(256), 24):
        block = gen_update_block(rule)
        ref = block_truth_table(block)
        for _ in range(3):
            pre, post = rng.randint(0, 20), rng.randint(0, 5)
            for bits, state in ref.items():
                m = neighborhood_machine(*bits)
                m.program = Program(_filler(pre) + block + _filler(post) + [Stop("ok")])
                m.pc = 1
                m.run()
                assert m.status.message == "ok"
                x = m.graph.center
                assert (0 if m.graph.out(x, "n") == x else 1) == state


def test_rendered_program_reparses():
    prog = gen_program("0110", 30, 2)
    assert parse(render(prog)) == prog
