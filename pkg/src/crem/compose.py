"""Composition of machines: a small AST with execution semantics.

Trees are immutable; stepping returns the output and a new tree. The six
node kinds are Basic, Sequential, Parallel, Alternative, Feedback and
Kleisli. Feedback and Kleisli require list-shaped outputs from their
children because they route individual elements onward.

Feedback scheduling is FIFO: the forward machine's outputs are both
accumulated and queued; each queued element goes through the backward
machine, whose outputs are fed back into the forward machine immediately,
in order. The accumulated forward outputs, in production order, are the
result. A configurable budget bounds the loop, since nothing else
guarantees it terminates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Sequence

from .machine import BaseMachine, stateless


class DuplicateLeafName(ValueError):
    """Two leaves of one composition tree share a machine name."""


class FeedbackOverflow(Exception):
    """A feedback loop exceeded its iteration budget for one input."""

    def __init__(self, cap: int) -> None:
        super().__init__(f"feedback loop exceeded {cap} iterations without settling")
        self.cap = cap


class TraceError(Exception):
    """Wraps an error raised while folding a machine over an input trace."""

    def __init__(self, index: int, error: Exception) -> None:
        super().__init__(f"input {index}: {error}")
        self.index = index
        self.error = error


@dataclass(frozen=True)
class RunConfig:
    """Execution limits. ``feedback_cap`` bounds loop iterations per input."""

    feedback_cap: int = 1000

    def __post_init__(self) -> None:
        if self.feedback_cap < 1:
            raise ValueError("feedback_cap must be at least 1")


DEFAULT_CONFIG = RunConfig()


@dataclass(frozen=True)
class Left:
    value: Any

    def __repr__(self) -> str:
        return f"Left({self.value!r})"


@dataclass(frozen=True)
class Right:
    value: Any

    def __repr__(self) -> str:
        return f"Right({self.value!r})"


class StateMachine:
    """A node of the composition tree. Use the concrete subclasses."""

    def step(
        self, value: Any, config: RunConfig = DEFAULT_CONFIG
    ) -> tuple[Any, "StateMachine"]:
        raise NotImplementedError

    def leaves(self) -> Iterator[BaseMachine]:
        raise NotImplementedError


def _check_leaf_names(node: StateMachine) -> None:
    seen: set[str] = set()
    for leaf in node.leaves():
        if leaf.name in seen:
            raise DuplicateLeafName(f"machine name {leaf.name!r} appears more than once")
        seen.add(leaf.name)


def _require_list(value: Any, where: str) -> None:
    if not isinstance(value, list):
        raise TypeError(f"{where} must produce a list, got {type(value).__name__}")


@dataclass(frozen=True)
class Basic(StateMachine):
    machine: BaseMachine

    def step(self, value, config=DEFAULT_CONFIG):
        output, machine = self.machine.step(value)
        return output, Basic(machine)

    def leaves(self):
        yield self.machine


@dataclass(frozen=True)
class Sequential(StateMachine):
    """Feed each input through ``first``, then its output through ``second``."""

    first: StateMachine
    second: StateMachine

    def __post_init__(self):
        _check_leaf_names(self)

    def step(self, value, config=DEFAULT_CONFIG):
        intermediate, first = self.first.step(value, config)
        output, second = self.second.step(intermediate, config)
        return output, Sequential(first, second)

    def leaves(self):
        yield from self.first.leaves()
        yield from self.second.leaves()


@dataclass(frozen=True)
class Parallel(StateMachine):
    """Step both children on the two halves of a pair; first steps first."""

    first: StateMachine
    second: StateMachine

    def __post_init__(self):
        _check_leaf_names(self)

    def step(self, value, config=DEFAULT_CONFIG):
        a, c = value
        b, first = self.first.step(a, config)
        d, second = self.second.step(c, config)
        return (b, d), Parallel(first, second)

    def leaves(self):
        yield from self.first.leaves()
        yield from self.second.leaves()


@dataclass(frozen=True)
class Alternative(StateMachine):
    """Route Left inputs to ``first`` and Right inputs to ``second``.

    The child that was not addressed is returned untouched.
    """

    first: StateMachine
    second: StateMachine

    def __post_init__(self):
        _check_leaf_names(self)

    def step(self, value, config=DEFAULT_CONFIG):
        if isinstance(value, Left):
            output, first = self.first.step(value.value, config)
            return Left(output), Alternative(first, self.second)
        if isinstance(value, Right):
            output, second = self.second.step(value.value, config)
            return Right(output), Alternative(self.first, second)
        raise TypeError(f"Alternative expects Left or Right, got {value!r}")

    def leaves(self):
        yield from self.first.leaves()
        yield from self.second.leaves()


@dataclass(frozen=True)
class Feedback(StateMachine):
    """Loop two machines: forward outputs are emitted and also bounced back.

    Processing is breadth-first. Every forward output joins a FIFO queue;
    each queued element is run through the backward machine, and each of
    the backward outputs is immediately run through the forward machine,
    whose new outputs are appended to both the result and the queue. One
    external input yields the forward outputs in production order.
    """

    forward: StateMachine
    backward: StateMachine

    def __post_init__(self):
        _check_leaf_names(self)

    def step(self, value, config=DEFAULT_CONFIG):
        cap = config.feedback_cap
        spent = 0
        forward = self.forward
        backward = self.backward
        collected: list[Any] = []
        pending: deque[Any] = deque()

        def spend() -> None:
            nonlocal spent
            if spent >= cap:
                raise FeedbackOverflow(cap)
            spent += 1

        def run_forward(item) -> None:
            nonlocal forward
            spend()
            outputs, forward = forward.step(item, config)
            _require_list(outputs, "the forward machine of Feedback")
            collected.extend(outputs)
            pending.extend(outputs)

        run_forward(value)
        while pending:
            produced = pending.popleft()
            spend()
            reinjected, backward = backward.step(produced, config)
            _require_list(reinjected, "the backward machine of Feedback")
            for item in reinjected:
                run_forward(item)
        return collected, Feedback(forward, backward)

    def leaves(self):
        yield from self.forward.leaves()
        yield from self.backward.leaves()


@dataclass(frozen=True)
class Kleisli(StateMachine):
    """Flat-map ``first``'s outputs through ``second``.

    The second machine's state threads across all elements of one batch:
    it folds over the whole event stream, it is not reset per element.
    """

    first: StateMachine
    second: StateMachine

    def __post_init__(self):
        _check_leaf_names(self)

    def step(self, value, config=DEFAULT_CONFIG):
        produced, first = self.first.step(value, config)
        _require_list(produced, "the first machine of Kleisli")
        second = self.second
        collected: list[Any] = []
        for item in produced:
            outputs, second = second.step(item, config)
            _require_list(outputs, "the second machine of Kleisli")
            collected.extend(outputs)
        return collected, Kleisli(first, second)

    def leaves(self):
        yield from self.first.leaves()
        yield from self.second.leaves()


def run_trace(
    machine: StateMachine,
    inputs: Sequence[Any],
    config: RunConfig = DEFAULT_CONFIG,
) -> list[Any]:
    """Fold ``step`` over the inputs, collecting one output per input.

    The first error aborts the run; it is wrapped in a :class:`TraceError`
    carrying the 0-based index of the offending input.
    """
    outputs: list[Any] = []
    current = machine
    for index, value in enumerate(inputs):
        try:
            output, current = current.step(value, config)
        except Exception as error:
            raise TraceError(index, error) from error
        outputs.append(output)
    return outputs


def identity_machine(name: str = "identity") -> Basic:
    """Machine that passes every input through unchanged."""
    return Basic(stateless(name, lambda value: value))


def lmap(func: Callable[[Any], Any], machine: StateMachine, name: str = "lmap") -> Sequential:
    """Pre-process inputs with a pure function."""
    return Sequential(Basic(stateless(name, func)), machine)


def rmap(machine: StateMachine, func: Callable[[Any], Any], name: str = "rmap") -> Sequential:
    """Post-process outputs with a pure function."""
    return Sequential(machine, Basic(stateless(name, func)))


def split_choice(first: StateMachine, second: StateMachine) -> Alternative:
    """Route Left inputs to ``first`` and Right inputs to ``second``."""
    return Alternative(first, second)


def _collapse(value: Any) -> Any:
    if isinstance(value, (Left, Right)):
        return value.value
    raise TypeError(f"expected Left or Right, got {value!r}")


def fanin(first: StateMachine, second: StateMachine, name: str = "fanin") -> StateMachine:
    """Either-consuming machine whose two branches share one output type."""
    return rmap(Alternative(first, second), _collapse, name=name)
