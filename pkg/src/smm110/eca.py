"""Reference elementary cellular automaton on a circular row.

Rows are tuples of 0/1 ints. Rules use Wolfram numbering: the
neighbourhood (L, C, R) selects bit ``4L + 2C + R`` of the rule number.
"""
from __future__ import annotations

from typing import Iterable, Sequence

NEIGHBORHOODS = [(l, c, r) for l in (1, 0) for c in (1, 0) for r in (1, 0)]


def check_rule(rule: int) -> int:
    if isinstance(rule, bool) or not isinstance(rule, int) or not 0 <= rule <= 255:
        raise ValueError(f"rule must be an integer in 0..255, got {rule!r}")
    return rule


def as_row(cells: Iterable) -> tuple:
    """Normalize a bit string ('0010') or iterable of 0/1 into a row tuple."""
    if isinstance(cells, str):
        cells = cells.strip()
        if not cells or set(cells) - {"0", "1"}:
            raise ValueError(f"row must be a non-empty string of 0/1, got {cells!r}")
        return tuple(int(ch) for ch in cells)
    row = tuple(int(c) for c in cells)
    if not row:
        raise ValueError("row must have width >= 1")
    if any(c not in (0, 1) for c in row):
        raise ValueError(f"row cells must be 0 or 1, got {row!r}")
    return row


def row_str(row: Sequence[int]) -> str:
    return "".join(str(c) for c in row)


def rule_table(rule: int) -> dict:
    """Map each (L, C, R) neighbourhood to its next state."""
    check_rule(rule)
    return {(l, c, r): (rule >> (4 * l + 2 * c + r)) & 1 for l, c, r in NEIGHBORHOODS}


def rule_from_table(table: dict) -> int:
    return sum(bit << (4 * l + 2 * c + r) for (l, c, r), bit in table.items())


def mirror_rule(rule: int) -> int:
    """Rule with the left and right neighbours swapped."""
    table = rule_table(rule)
    return rule_from_table({(l, c, r): table[(r, c, l)] for l, c, r in table})


def step_row(row: Sequence[int], rule: int) -> tuple:
    table = rule_table(rule)
    w = len(row)
    return tuple(table[(row[i - 1], row[i], row[(i + 1) % w])] for i in range(w))


def evolve(row: Sequence[int], rule: int, iterations: int) -> list:
    """Generations 0..iterations of ``row`` under ``rule``."""
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    rows = [as_row(row)]
    for _ in range(iterations):
        rows.append(step_row(rows[-1], rule))
    return rows


def single_on(width: int) -> tuple:
    """Row of ``width`` off cells with one on cell at index width // 2."""
    if width < 1:
        raise ValueError("width must be >= 1")
    return tuple(1 if i == width // 2 else 0 for i in range(width))
