"""Theta-routing: always take the edge of the cone that contains the target."""

from __future__ import annotations

from dataclasses import dataclass

from .cone_graph import THETA, ConeGraph
from .errors import Degenerate

REACHED = "Reached"
CYCLED = "Cycled"
STUCK = "Stuck"


@dataclass(frozen=True)
class RouteTrace:
    source: int
    destination: int
    visited: tuple[int, ...]
    outcome: str
    repeated: int | None = None

    @property
    def reached(self) -> bool:
        return self.outcome == REACHED


def theta_route(g: ConeGraph, s: int, t: int) -> RouteTrace:
    """Route from ``s`` to ``t``.

    The rule is memoryless, so the first revisit of a vertex proves the walk
    never reaches ``t``; the trace then ends with that vertex.
    """
    if g.flavor != THETA:
        raise ValueError("theta-routing is defined on theta graphs")
    frame = g.get_frame()
    visited = [s]
    seen = {s}
    u = s
    while u != t:
        i = frame.cone_of(u, t)
        if i < 0:
            raise Degenerate(f"target {t} lies on a cone boundary of {u}", pair=(u, t))
        v = g.out[u][i]
        if v is None:
            return RouteTrace(s, t, tuple(visited), STUCK)
        visited.append(v)
        if v in seen:
            return RouteTrace(s, t, tuple(visited), CYCLED, v)
        seen.add(v)
        u = v
    return RouteTrace(s, t, tuple(visited), REACHED)
