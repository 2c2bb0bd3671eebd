"""Graph memory of a storage modification machine.

Nodes are integer ids handed out in creation order; the Origin is always
id 0. Paths are plain strings of single-character directions. A failed
path resolution yields ``None`` (the machine's empty node).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

DEFAULT_ALPHABET = ("n", "s", "e", "w")

NodeId = int


class GraphError(ValueError):
    """Raised on misuse of the raw graph primitives."""


@dataclass
class Node:
    id: NodeId
    label: Optional[str] = None
    out: dict[str, NodeId] = field(default_factory=dict)


def check_alphabet(alphabet: Iterable[str]) -> tuple[str, ...]:
    dirs = tuple(alphabet)
    if not dirs:
        raise GraphError("direction alphabet is empty")
    for d in dirs:
        if len(d) != 1 or d.isspace() or not d.isprintable():
            raise GraphError(f"invalid direction symbol {d!r}")
        if d == "." or d in "#+-":
            raise GraphError(f"reserved character {d!r} cannot be a direction")
    if len(set(dirs)) != len(dirs):
        raise GraphError(f"duplicate directions in {''.join(dirs)!r}")
    return dirs


class StorageGraph:
    """Directed graph with direction-labelled out-edges and a center.

    Nodes are never deleted; unreachable ones simply drop out of
    :meth:`reachable_count` and :meth:`to_dot`.
    """

    def __init__(self, alphabet: Iterable[str] = DEFAULT_ALPHABET):
        self.alphabet = check_alphabet(alphabet)
        self.nodes: list[Node] = [Node(0, "Origin")]
        self.origin: NodeId = 0
        self.center: NodeId = 0

    def __len__(self) -> int:
        return len(self.nodes)

    def _node(self, node_id: NodeId) -> Node:
        if not isinstance(node_id, int) or not 0 <= node_id < len(self.nodes):
            raise GraphError(f"unknown node id {node_id!r}")
        return self.nodes[node_id]

    def _check_dir(self, d: str) -> None:
        if d not in self.alphabet:
            raise GraphError(f"direction {d!r} not in alphabet {''.join(self.alphabet)!r}")

    def label(self, node_id: NodeId) -> Optional[str]:
        return self._node(node_id).label

    def out(self, node_id: NodeId, d: str) -> Optional[NodeId]:
        """Target of the ``d`` edge of a node, or None if it has none."""
        return self._node(node_id).out.get(d)

    def edges(self, node_id: NodeId) -> list[tuple[str, NodeId]]:
        """Out-edges of a node in alphabet order."""
        out = self._node(node_id).out
        return [(d, out[d]) for d in self.alphabet if d in out]

    def add_node(self, target: NodeId, label: Optional[str] = None) -> NodeId:
        """Create a node whose every direction points at ``target``.

        The center is left alone; moving it is the machine's job.
        """
        self._node(target)
        new_id = len(self.nodes)
        self.nodes.append(Node(new_id, label, {d: target for d in self.alphabet}))
        return new_id

    def set_edge(self, node_id: NodeId, d: str, target: NodeId) -> None:
        self._check_dir(d)
        node = self._node(node_id)
        self._node(target)
        node.out[d] = target

    def set_center(self, node_id: NodeId) -> None:
        self._node(node_id)
        self.center = node_id

    def resolve_from(self, start: Optional[NodeId], path: str) -> Optional[NodeId]:
        node = start
        for d in path:
            if node is None:
                return None
            node = self.nodes[node].out.get(d)
        return node

    def resolve(self, path: str) -> Optional[NodeId]:
        """Walk ``path`` from the center; None when some edge is missing."""
        return self.resolve_from(self.center, path)

    def reachable(self, start: Optional[NodeId] = None) -> list[NodeId]:
        """Ids reachable from ``start`` (default: the center), sorted."""
        root = self.center if start is None else start
        seen = {root}
        queue = deque([root])
        while queue:
            for target in self.nodes[queue.popleft()].out.values():
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
        return sorted(seen)

    def reachable_count(self) -> int:
        return len(self.reachable())

    def snapshot(self, node_ids: Optional[Iterable[NodeId]] = None) -> dict[NodeId, dict[str, NodeId]]:
        """Copy of the edge maps of the given nodes (all nodes by default)."""
        ids = range(len(self.nodes)) if node_ids is None else node_ids
        return {i: dict(self.nodes[i].out) for i in ids}

    def to_dot(self, name: str = "smm") -> str:
        """Render the reachable subgraph as Graphviz DOT text."""
        lines = [f"digraph {name} {{", "  node [shape=circle];"]
        reach = self.reachable()
        for i in reach:
            label = self.nodes[i].label
            text = f"{i}" if label is None else f"{i}\\n{_escape(label)}"
            extra = ", shape=doublecircle, style=bold" if i == self.center else ""
            lines.append(f'  n{i} [label="{text}"{extra}];')
        for i in reach:
            for d, target in self.edges(i):
                lines.append(f'  n{i} -> n{target} [label="{_escape(d)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def init_graph(alphabet: Iterable[str] = DEFAULT_ALPHABET) -> StorageGraph:
    return StorageGraph(alphabet)
