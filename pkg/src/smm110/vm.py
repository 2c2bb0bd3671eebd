"""Stepping interpreter for SMM programs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .asm import Center, If, Instruction, New, Program, Set, Stop, render_instruction
from .graph import NodeId, StorageGraph

RUNNING = "running"
HALTED = "halted"
FAULTED = "faulted"

# halt reasons
STOP = "stop"
END_OF_PROGRAM = "end-of-program"

# fault kinds
INVALID_PATH_IN_SET = "InvalidPathInSet"
INVALID_PATH_IN_CENTER = "InvalidPathInCenter"
JUMP_BEFORE_START = "JumpBeforeStart"
STEP_LIMIT = "StepLimit"
NODE_LIMIT = "NodeLimit"

DEFAULT_MAX_STEPS = 10**7
DEFAULT_MAX_NODES = 10**6


class MachineError(RuntimeError):
    """Misuse of the machine itself (as opposed to a program fault)."""


@dataclass(frozen=True)
class Status:
    state: str = RUNNING
    reason: Optional[str] = None  # halt reason or fault kind
    message: Optional[str] = None  # stop message
    at: Optional[int] = None  # pc of the faulting instruction

    @property
    def running(self) -> bool:
        return self.state == RUNNING

    def __str__(self) -> str:
        if self.state == RUNNING:
            return "running"
        if self.state == HALTED:
            if self.reason == STOP:
                return f"halted: stop {self.message}".rstrip()
            return "halted: end of program"
        return f"faulted: {self.reason} at line {self.at}"


@dataclass(frozen=True)
class Limits:
    max_steps: int = DEFAULT_MAX_STEPS
    max_nodes: int = DEFAULT_MAX_NODES

    def __post_init__(self):
        if self.max_steps < 1 or self.max_nodes < 1:
            raise ValueError("limits must be >= 1")


@dataclass(frozen=True)
class TraceEvent:
    pc: int
    instruction: Instruction
    operands: tuple  # resolved NodeRefs, None for the empty node
    center_before: NodeId
    center_after: NodeId
    taken: Optional[bool] = None

    def __str__(self) -> str:
        ops = ",".join("nil" if o is None else str(o) for o in self.operands)
        text = f"{self.pc}\t{render_instruction(self.instruction)}\t[{ops}]\tctr {self.center_before}->{self.center_after}"
        if self.taken is not None:
            text += "\tjump" if self.taken else "\tnext"
        return text


@dataclass
class Machine:
    graph: StorageGraph
    program: Program
    pc: int = 1
    status: Status = field(default_factory=Status)
    steps: int = 0
    nodes_created: int = 0
    messages: list = field(default_factory=list)

    def _fault(self, kind: str) -> None:
        self.status = Status(FAULTED, kind, at=self.pc)

    def _execute(self, ins: Instruction, pc: int) -> tuple:
        """Apply one instruction; return (next pc, operands, taken)."""
        g = self.graph
        if isinstance(ins, New):
            prev = g.center
            g.set_center(g.add_node(prev, ins.label))
            self.nodes_created += 1
            return pc + 1, (prev,), None
        if isinstance(ins, Set):
            src, dst = g.resolve(ins.x), g.resolve(ins.y)
            if src is None or dst is None:
                self._fault(INVALID_PATH_IN_SET)
                return pc, (src, dst), None
            g.set_edge(src, ins.d, dst)
            return pc + 1, (src, dst), None
        if isinstance(ins, Center):
            dst = g.resolve(ins.x)
            if dst is None:
                self._fault(INVALID_PATH_IN_CENTER)
                return pc, (dst,), None
            g.set_center(dst)
            return pc + 1, (dst,), None
        if isinstance(ins, If):
            a, b = g.resolve(ins.x), g.resolve(ins.y)
            taken = a == b
            return (ins.target.resolve(pc) if taken else pc + 1), (a, b), taken
        if isinstance(ins, Stop):
            self.messages.append(ins.message)
            self.status = Status(HALTED, STOP, ins.message)
            return pc, (), None
        raise TypeError(f"not an instruction: {ins!r}")

    def step(self, limits: Optional[Limits] = None) -> TraceEvent:
        """Execute the instruction at pc. Rejects terminal machines."""
        if not self.status.running:
            raise MachineError(f"machine is not running ({self.status})")
        limits = limits or Limits()
        return self._step(self.program.instructions, limits, True)

    def _step(self, code: list, limits: Limits, want_event: bool = False) -> Optional[TraceEvent]:
        if self.steps >= limits.max_steps:
            self._fault(STEP_LIMIT)
            return None
        ins = code[self.pc - 1]
        if isinstance(ins, New) and self.nodes_created >= limits.max_nodes:
            self._fault(NODE_LIMIT)
            return None
        before = self.graph.center
        pc = self.pc
        nxt, operands, taken = self._execute(ins, pc)
        self.steps += 1
        event = TraceEvent(pc, ins, operands, before, self.graph.center, taken) if want_event else None
        if not self.status.running:
            return event
        if nxt < 1:
            self._fault(JUMP_BEFORE_START)
        elif nxt > len(code):
            self.pc = nxt
            self.status = Status(HALTED, END_OF_PROGRAM)
        else:
            self.pc = nxt
        return event

    def run(self, limits: Optional[Limits] = None, trace: Optional[Callable] = None) -> Status:
        """Step until the machine halts, faults, or trips a limit."""
        limits = limits or Limits()
        code = self.program.instructions
        while self.status.running:
            event = self._step(code, limits, trace is not None)
            if trace is not None and event is not None:
                trace(event)
        return self.status

    def run_block(self, block, limits: Optional[Limits] = None, trace: Optional[Callable] = None) -> Status:
        """Run ``block`` as if spliced in at the current point.

        Jumping past the block's end is a normal exit. The machine's own pc
        is restored afterwards unless the block stopped or faulted.
        """
        if not self.status.running:
            raise MachineError(f"machine is not running ({self.status})")
        code = block.instructions if isinstance(block, Program) else list(block)
        if isinstance(block, Program):
            extra = block.directions() - set(self.graph.alphabet)
            if extra:
                raise MachineError(f"block uses directions outside graph alphabet: {sorted(extra)}")
        limits = limits or Limits()
        saved_pc = self.pc
        self.pc = 1
        while self.status.running and code:
            event = self._step(code, limits, trace is not None)
            if trace is not None and event is not None:
                trace(event)
        if self.status.state == HALTED and self.status.reason == END_OF_PROGRAM:
            self.status = Status()
            self.pc = saved_pc
        return self.status


def load(program: Program, graph: StorageGraph) -> Machine:
    """Bind a program to a graph, checking the direction alphabets agree."""
    missing = set(program.alphabet) - set(graph.alphabet)
    missing |= program.directions() - set(graph.alphabet)
    if missing:
        raise MachineError(f"program directions {sorted(missing)} not in graph alphabet")
    m = Machine(graph, program)
    if not program.instructions:
        m.status = Status(HALTED, END_OF_PROGRAM)
    return m
