"""Compile an ECA rule and starting row into a straight-line SMM program.

Cell encoding: a cell node whose ``n`` edge is a self-loop is OFF, any
other ``n`` target means ON. Every cell of generation t+1 points its ``s``
edge at the cell with the same index in generation t; rows are rings
linked by ``e`` (rightwards) and ``w`` (leftwards).
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional, Sequence

from .asm import BACKWARD, FORWARD, Center, If, JumpTarget, New, Program, Set, Stop, parse
from .eca import as_row, check_rule, rule_table

# (path to neighbour's n target, path to neighbour) for W, C, E of the
# predecessor cell; equal ends mean the neighbour is OFF.
NEIGHBOR_TESTS = (("swn", "sw"), ("sn", "s"), ("sen", "se"))

_END = "end"
_OFF = "off"


def corpus_listing1() -> Program:
    return parse(resources.files(__package__).joinpath("data/listing1.smm").read_text())


def corpus_listing2() -> Program:
    return parse(resources.files(__package__).joinpath("data/listing2.smm").read_text())


def _tree(table: dict, prefix: tuple, items: list, counter: list) -> None:
    """Emit the decision subtree for neighbourhoods starting with ``prefix``."""
    depth = len(prefix)
    if depth == 3:
        items.append(("jump", "s", "s", _END if table[prefix] else _OFF))
        return
    on = [table[k] for k in sorted(table) if k[:depth + 1] == prefix + (1,)]
    off = [table[k] for k in sorted(table) if k[:depth + 1] == prefix + (0,)]
    if on == off:
        # this neighbour does not matter below here
        _tree(table, prefix + (1,), items, counter)
        return
    x, y = NEIGHBOR_TESTS[depth]
    if depth == 2:
        # both children are leaves: branch straight to their exits
        items.append(("jump", x, y, _END if off[0] else _OFF))
        items.append(("jump", "s", "s", _END if on[0] else _OFF))
        return
    counter[0] += 1
    label = f"L{counter[0]}"
    items.append(("jump", x, y, label))
    _tree(table, prefix + (1,), items, counter)
    items.append(("label", label))
    _tree(table, prefix + (0,), items, counter)


def _is_uncond(item) -> bool:
    return item[0] == "jump" and item[1] == item[2]


def _simplify(items: list) -> list:
    """Drop dead code, jumps to the next instruction and unused labels."""
    changed = True
    while changed:
        changed = False
        labels = {it[1]: k for k, it in enumerate(items) if it[0] == "label"}
        # reachability over item indices
        live = set()
        stack = [0]
        while stack:
            k = stack.pop()
            if k >= len(items) or k in live:
                continue
            live.add(k)
            it = items[k]
            if it[0] == "jump":
                stack.append(labels[it[3]])
                if not _is_uncond(it):
                    stack.append(k + 1)
            else:
                stack.append(k + 1)
        kept = [it for k, it in enumerate(items) if k in live or it[0] == "label"]
        if len(kept) != len(items):
            items, changed = kept, True
            continue
        for k, it in enumerate(items):
            if it[0] != "jump":
                continue
            j = k + 1
            while j < len(items) and items[j][0] == "label":
                if items[j][1] == it[3]:
                    del items[k]
                    changed = True
                    break
                j += 1
            if changed:
                break
        if changed:
            continue
        used = {it[3] for it in items if it[0] == "jump"}
        kept = [it for it in items if it[0] != "label" or it[1] in used or it[1] == _END]
        if len(kept) != len(items):
            items, changed = kept, True
    return items


def _assemble(items: list) -> list:
    code, positions = [], {}
    for it in items:
        if it[0] == "label":
            positions[it[1]] = len(code) + 1
        else:
            code.append(it)
    out = []
    for pc, it in enumerate(code, start=1):
        if it[0] == "jump":
            delta = positions[it[3]] - pc
            target = JumpTarget(FORWARD, delta) if delta > 0 else JumpTarget(BACKWARD, -delta)
            out.append(If(it[1], it[2], target))
        else:
            out.append(it[1])
    return out


def gen_update_block(rule: int) -> list:
    """Relocatable block setting the center's n edge from its predecessor row.

    Assumes the center is a fresh cell whose ``s`` edge points at the
    predecessor cell. Only relative jumps are used and every exit lands one
    past the last instruction.
    """
    check_rule(rule)
    table = rule_table(rule)
    items = [("ins", Set("", "n", "s"))]
    _tree(table, (), items, [0])
    items += [("label", _OFF), ("ins", Set("", "n", "")), ("label", _END)]
    return _assemble(_simplify(items))


@dataclass(frozen=True)
class EmissionPlan:
    row: tuple
    rule: int
    iterations: int

    def __post_init__(self):
        object.__setattr__(self, "row", as_row(self.row))
        check_rule(self.rule)
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")

    @property
    def width(self) -> int:
        return len(self.row)

    def block_length(self, block=None) -> int:
        return len(gen_update_block(self.rule) if block is None else block)

    def per_iteration_length(self, block=None) -> int:
        b = self.block_length(block)
        return (1 + b) + (self.width - 1) * (3 + b) + 3

    def expected_reachable(self) -> int:
        return self.width * (self.iterations + 1) + 1


def _close_ring(width: int) -> list:
    # center sits on the last cell; w edges of the row are already correct
    return [
        Set("", "e", "w" * (width - 1)),
        Set("w" * (width - 1), "w", ""),
        Center("e"),
    ]


def _init_code(row: tuple) -> list:
    code = []
    for i, bit in enumerate(row):
        code.append(New(f"c0-{i}"))
        if i:
            code.append(Set("w", "e", ""))
        if not bit:
            code.append(Set("", "n", ""))
    return code + _close_ring(len(row))


def gen_init(row) -> Program:
    """Program that builds ``row`` as a ring and stands on its cell 0."""
    row = as_row(row)
    return Program(_init_code(row) + [Stop("")])


def gen_program(row, rule: int, iterations: int, block: Optional[Sequence] = None) -> Program:
    """Fully unrolled program simulating ``iterations`` generations.

    ``block`` overrides the update block (used to inject faults in tests).
    """
    plan = EmissionPlan(row, rule, iterations)
    block = list(gen_update_block(rule) if block is None else block)
    code = _init_code(plan.row)
    for t in range(1, iterations + 1):
        for i in range(plan.width):
            code.append(New(f"c{t}-{i}"))
            if i:
                code += [Set("", "s", "wse"), Set("w", "e", "")]
            code += block
        code += _close_ring(plan.width)
    code.append(Stop("done"))
    return Program(code)
