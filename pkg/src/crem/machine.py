"""Single Mealy machines whose every step is checked against a topology."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Callable, NamedTuple

from .topology import Topology, trivial_topology

UNIT_VERTEX = "Unit"


class EmptyName(ValueError):
    """A machine name was the empty string."""


class UnknownVertex(ValueError):
    """A machine state referenced a vertex outside its topology."""


class DisallowedTransition(Exception):
    """An action tried to move along an edge the topology forbids.

    This signals a bug in the action implementation, not bad input.
    """

    def __init__(self, machine: str, source: str, target: str) -> None:
        super().__init__(
            f"machine {machine!r}: transition {source!r} -> {target!r} "
            "is not allowed by the topology"
        )
        self.machine = machine
        self.source = source
        self.target = target


@dataclass(frozen=True)
class MachineState:
    """Current vertex plus an opaque payload carried alongside it."""

    vertex: str
    payload: Any = None


class StepResult(NamedTuple):
    output: Any
    state: MachineState


@dataclass(frozen=True)
class BaseMachine:
    """A named Mealy machine constrained by an explicit topology.

    ``action`` maps ``(state, input)`` to a :class:`StepResult` and must be
    pure. Stepping returns a new machine value; nothing is mutated.
    """

    name: str
    topology: Topology
    state: MachineState
    action: Callable[[MachineState, Any], StepResult]

    def __post_init__(self) -> None:
        if not self.name:
            raise EmptyName("machine name must be non-empty")
        object.__setattr__(self, "topology", self.topology.normalize())
        if self.state.vertex not in self.topology.vertices():
            raise UnknownVertex(
                f"vertex {self.state.vertex!r} is not in the topology of {self.name!r}"
            )

    def step(self, value: Any) -> tuple[Any, "BaseMachine"]:
        """Run the action once, enforcing the topology on the implied move."""
        output, next_state = self.action(self.state, value)
        if not self.topology.allows(self.state.vertex, next_state.vertex):
            raise DisallowedTransition(self.name, self.state.vertex, next_state.vertex)
        return output, replace(self, state=next_state)


def stateless(name: str, func: Callable[[Any], Any]) -> BaseMachine:
    """Machine with a single implicit state; the output is just ``func(input)``."""

    def act(state: MachineState, value: Any) -> StepResult:
        return StepResult(func(value), state)

    return BaseMachine(name, trivial_topology(UNIT_VERTEX), MachineState(UNIT_VERTEX), act)


def unrestricted_mealy(
    name: str,
    initial: Any,
    func: Callable[[Any, Any], tuple[Any, Any]],
) -> BaseMachine:
    """Classic unconstrained Mealy machine; its state lives in the payload.

    ``func`` maps ``(state_value, input)`` to ``(output, new_state_value)``.
    Every step is an identity move on the single vertex, so no transition
    can ever be rejected.
    """

    def act(state: MachineState, value: Any) -> StepResult:
        output, payload = func(state.payload, value)
        return StepResult(output, MachineState(UNIT_VERTEX, payload))

    return BaseMachine(
        name, trivial_topology(UNIT_VERTEX), MachineState(UNIT_VERTEX, initial), act
    )
