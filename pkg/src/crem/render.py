"""Deterministic DOT and Mermaid renderings of machines and compositions.

Diagrams derive from the same values that execute, so they cannot drift
from the behavior. Output is byte-stable across runs: ordering follows the
first-appearance order of the underlying values and nothing time- or
environment-dependent is emitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Iterable

from .compose import (
    Alternative,
    Basic,
    DuplicateLeafName,
    Feedback,
    Kleisli,
    Parallel,
    Sequential,
    StateMachine,
)
from .machine import BaseMachine

FORMATS = ("dot", "mermaid")


@dataclass(frozen=True)
class Diagram:
    format: str
    text: str

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ValueError(f"unknown diagram format {self.format!r}")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _mermaid_text(text: str) -> str:
    return text.replace('"', "'")


def _mermaid_id_list(labels: Iterable[str], used: set[str]) -> list[str]:
    """Turn labels into distinct Mermaid-safe identifiers, deterministically."""
    ids: list[str] = []
    for label in labels:
        base = re.sub(r"[^0-9A-Za-z_]", "_", label) or "v"
        if base[0].isdigit():
            base = "v_" + base
        candidate = base
        suffix = 2
        while candidate in used:
            candidate = f"{base}_{suffix}"
            suffix += 1
        ids.append(candidate)
        used.add(candidate)
    return ids


def _initial_marker(taken: Iterable[str], base: str) -> str:
    """Identifier for the start-marker node, distinct from every real node."""
    taken = set(taken)
    marker = base
    while marker in taken:
        marker = "_" + marker
    return marker


def render_base(machine: BaseMachine, format: str) -> Diagram:
    """State diagram of one machine: its vertices, edges and initial marker.

    Implicit identity self-loops are not drawn; only explicit topology
    edges appear.
    """
    if format == "dot":
        return Diagram("dot", _base_dot(machine))
    if format == "mermaid":
        return Diagram("mermaid", _base_mermaid(machine))
    raise ValueError(f"unknown diagram format {format!r}")


def _base_dot(machine: BaseMachine) -> str:
    topology = machine.topology
    marker = _initial_marker(topology.vertices(), "__initial")
    lines = [
        f"digraph {_quote(machine.name)} {{",
        "  rankdir=LR;",
        "  node [shape=box, style=rounded];",
        f'  {_quote(marker)} [shape=point, label=""];',
    ]
    for vertex in topology.vertices():
        lines.append(f"  {_quote(vertex)};")
    lines.append(f"  {_quote(marker)} -> {_quote(machine.state.vertex)};")
    for source, target in topology.transitions():
        lines.append(f"  {_quote(source)} -> {_quote(target)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _base_mermaid(machine: BaseMachine) -> str:
    topology = machine.topology
    ids = dict(zip(topology.vertices(), _mermaid_id_list(topology.vertices(), set())))
    lines = ["stateDiagram-v2"]
    for vertex in topology.vertices():
        lines.append(f'    state "{_mermaid_text(vertex)}" as {ids[vertex]}')
    lines.append(f"    [*] --> {ids[machine.state.vertex]}")
    for source, target in topology.transitions():
        lines.append(f"    {ids[source]} --> {ids[target]}")
    return "\n".join(lines) + "\n"


def render_flow(machine: StateMachine, format: str) -> Diagram:
    """Architecture diagram of a composition tree.

    One cluster per leaf, containing that machine's own state diagram.
    Sequential and Kleisli contribute a labeled edge from the first
    subtree's representative cluster to the second's; Feedback contributes
    an edge in each direction; Parallel and Alternative wrap their children
    in a labeled bracketing cluster. Clusters appear depth-first,
    left to right.
    """
    names: set[str] = set()
    for leaf in machine.leaves():
        if leaf.name in names:
            raise DuplicateLeafName(f"machine name {leaf.name!r} appears more than once")
        names.add(leaf.name)
    if format == "dot":
        return Diagram("dot", _flow_dot(machine))
    if format == "mermaid":
        return Diagram("mermaid", _flow_mermaid(machine))
    raise ValueError(f"unknown diagram format {format!r}")


def _representative(node: StateMachine) -> BaseMachine:
    return next(iter(node.leaves()))


_COMBINATOR_EDGES = {Sequential: "seq", Kleisli: "kleisli"}
_BRACKET_LABELS = {Parallel: "parallel", Alternative: "alternative"}


def _flow_dot(machine: StateMachine) -> str:
    lines = [
        'digraph "architecture" {',
        "  compound=true;",
        "  rankdir=LR;",
        "  node [shape=box, style=rounded];",
    ]
    edges: list[tuple[BaseMachine, BaseMachine, str]] = []
    brackets = count(1)

    def emit(node: StateMachine, indent: str) -> None:
        if isinstance(node, Basic):
            leaf = node.machine
            lines.append(f"{indent}subgraph {_quote('cluster_' + leaf.name)} {{")
            lines.append(f"{indent}  label={_quote(leaf.name)};")
            initial = _initial_marker(
                (f"{leaf.name}__{vertex}" for vertex in leaf.topology.vertices()),
                f"{leaf.name}__initial",
            )
            lines.append(f"{indent}  {_quote(initial)} [shape=point, label=\"\"];")
            for vertex in leaf.topology.vertices():
                lines.append(
                    f"{indent}  {_quote(leaf.name + '__' + vertex)} [label={_quote(vertex)}];"
                )
            lines.append(
                f"{indent}  {_quote(initial)} -> {_quote(leaf.name + '__' + leaf.state.vertex)};"
            )
            for source, target in leaf.topology.transitions():
                lines.append(
                    f"{indent}  {_quote(leaf.name + '__' + source)} -> "
                    f"{_quote(leaf.name + '__' + target)};"
                )
            lines.append(f"{indent}}}")
        elif isinstance(node, (Sequential, Kleisli)):
            emit(node.first, indent)
            emit(node.second, indent)
            edges.append(
                (_representative(node.first), _representative(node.second),
                 _COMBINATOR_EDGES[type(node)])
            )
        elif isinstance(node, Feedback):
            emit(node.forward, indent)
            emit(node.backward, indent)
            forward, backward = _representative(node.forward), _representative(node.backward)
            edges.append((forward, backward, "feedback"))
            edges.append((backward, forward, "feedback"))
        elif isinstance(node, (Parallel, Alternative)):
            label = _BRACKET_LABELS[type(node)]
            lines.append(f"{indent}subgraph {_quote(f'cluster_{label}_{next(brackets)}')} {{")
            lines.append(f"{indent}  label={_quote(label)};")
            emit(node.first, indent + "  ")
            emit(node.second, indent + "  ")
            lines.append(f"{indent}}}")
        else:
            raise TypeError(f"not a composition tree node: {node!r}")

    emit(machine, "  ")
    for source, target, label in edges:
        source_node = f"{source.name}__{source.state.vertex}"
        target_node = f"{target.name}__{target.state.vertex}"
        lines.append(
            f"  {_quote(source_node)} -> {_quote(target_node)} "
            f"[ltail={_quote('cluster_' + source.name)}, "
            f"lhead={_quote('cluster_' + target.name)}, label={_quote(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _flow_mermaid(machine: StateMachine) -> str:
    leaves = list(machine.leaves())
    used: set[str] = set()
    cluster_ids = dict(
        zip(
            (leaf.name for leaf in leaves),
            _mermaid_id_list((f"sg_{leaf.name}" for leaf in leaves), used),
        )
    )
    # node keys are (leaf name, vertex) pairs; None marks the initial marker
    node_keys = [
        (leaf.name, vertex)
        for leaf in leaves
        for vertex in (None, *leaf.topology.vertices())
    ]
    node_ids = dict(
        zip(
            node_keys,
            _mermaid_id_list(
                (
                    f"{name}__initial" if vertex is None else f"{name}__{vertex}"
                    for name, vertex in node_keys
                ),
                used,
            ),
        )
    )

    lines = ["flowchart TD"]
    edges: list[tuple[BaseMachine, BaseMachine, str]] = []
    brackets = count(1)

    def emit(node: StateMachine, indent: str) -> None:
        if isinstance(node, Basic):
            leaf = node.machine
            lines.append(
                f'{indent}subgraph {cluster_ids[leaf.name]}["{_mermaid_text(leaf.name)}"]'
            )
            initial = node_ids[(leaf.name, None)]
            lines.append(f'{indent}    {initial}((" "))')
            for vertex in leaf.topology.vertices():
                lines.append(
                    f'{indent}    {node_ids[(leaf.name, vertex)]}'
                    f'["{_mermaid_text(vertex)}"]'
                )
            lines.append(
                f"{indent}    {initial} --> {node_ids[(leaf.name, leaf.state.vertex)]}"
            )
            for source, target in leaf.topology.transitions():
                lines.append(
                    f"{indent}    {node_ids[(leaf.name, source)]} --> "
                    f"{node_ids[(leaf.name, target)]}"
                )
            lines.append(f"{indent}end")
        elif isinstance(node, (Sequential, Kleisli)):
            emit(node.first, indent)
            emit(node.second, indent)
            edges.append(
                (_representative(node.first), _representative(node.second),
                 _COMBINATOR_EDGES[type(node)])
            )
        elif isinstance(node, Feedback):
            emit(node.forward, indent)
            emit(node.backward, indent)
            forward, backward = _representative(node.forward), _representative(node.backward)
            edges.append((forward, backward, "feedback"))
            edges.append((backward, forward, "feedback"))
        elif isinstance(node, (Parallel, Alternative)):
            label = _BRACKET_LABELS[type(node)]
            lines.append(f'{indent}subgraph bracket_{next(brackets)}["{label}"]')
            emit(node.first, indent + "    ")
            emit(node.second, indent + "    ")
            lines.append(f"{indent}end")
        else:
            raise TypeError(f"not a composition tree node: {node!r}")

    emit(machine, "    ")
    for source, target, label in edges:
        lines.append(
            f"    {cluster_ids[source.name]} -->|{label}| {cluster_ids[target.name]}"
        )
    return "\n".join(lines) + "\n"
