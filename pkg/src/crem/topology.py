"""Transition topologies: the explicit set of moves a machine may make.

A topology is a list of directed edges grouped by source vertex. Staying on
the current vertex is always permitted and never listed; only genuine moves
between distinct vertices need an explicit edge.
"""

from __future__ import annotations

from dataclasses import dataclass


class EmptyVertexLabel(ValueError):
    """A vertex label was the empty string."""


@dataclass(frozen=True)
class Topology:
    """Allowed transitions as ``(source, targets)`` groups.

    The order in which sources and targets first appear is preserved; it is
    part of the value because it drives rendering.
    """

    edges: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self) -> None:
        groups = tuple((source, tuple(targets)) for source, targets in self.edges)
        object.__setattr__(self, "edges", groups)

    def normalize(self) -> Topology:
        """Merge duplicate source groups and drop duplicate targets.

        First-appearance order wins for both sources and targets, so the
        result is stable and normalizing twice changes nothing.
        """
        merged: dict[str, list[str]] = {}
        for source, targets in self.edges:
            _check_label(source)
            bucket = merged.setdefault(source, [])
            for target in targets:
                _check_label(target)
                if target not in bucket:
                    bucket.append(target)
        return Topology(tuple((source, tuple(targets)) for source, targets in merged.items()))

    def allows(self, source: str, target: str) -> bool:
        """True if the move ``source -> target`` is permitted.

        Identity moves are always allowed, listed or not.
        """
        if source == target:
            return True
        return any(
            group_source == source and target in targets
            for group_source, targets in self.edges
        )

    def vertices(self) -> tuple[str, ...]:
        """All vertices (sources and targets) in first-appearance order."""
        seen: dict[str, None] = {}
        for source, targets in self.edges:
            seen.setdefault(source)
            for target in targets:
                seen.setdefault(target)
        return tuple(seen)

    def transitions(self) -> tuple[tuple[str, str], ...]:
        """Explicit edges flattened to ``(source, target)`` pairs."""
        return tuple(
            (source, target) for source, targets in self.edges for target in targets
        )


def trivial_topology(vertex: str) -> Topology:
    """Topology with a single vertex and no explicit edges."""
    return Topology(((vertex, ()),)).normalize()


def _check_label(label: str) -> None:
    if not label:
        raise EmptyVertexLabel("vertex labels must be non-empty")
