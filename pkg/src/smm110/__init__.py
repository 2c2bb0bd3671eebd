"""Storage modification machines that simulate elementary cellular automata."""
from .asm import Center, If, JumpTarget, New, ParseError, Program, Set, Stop, parse, render, validate
from .codegen import EmissionPlan, corpus_listing1, corpus_listing2, gen_init, gen_program, gen_update_block
from .eca import evolve, rule_table, single_on, step_row
from .graph import GraphError, StorageGraph, init_graph
from .harness import RunReport, diff_run, extract_row, render_spacetime
from .vm import Limits, Machine, MachineError, Status, load

__version__ = "0.1.0"

__all__ = [
    "Center", "If", "JumpTarget", "New", "ParseError", "Program", "Set", "Stop",
    "parse", "render", "validate",
    "EmissionPlan", "corpus_listing1", "corpus_listing2", "gen_init", "gen_program", "gen_update_block",
    "evolve", "rule_table", "single_on", "step_row",
    "GraphError", "StorageGraph", "init_graph",
    "RunReport", "diff_run", "extract_row", "render_spacetime",
    "Limits", "Machine", "MachineError", "Status", "load",
]
