"""Construction of theta_m and Yao_m cone graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from sortedcontainers import SortedList

from ._kernel import BOUNDARY, Frame
from .errors import AmbiguousPredicate, Degenerate, DuplicatePoint, NotAnEdge
from .exact_geom import Point, to_rational

THETA = "theta"
YAO = "yao"
FLAVORS = (THETA, YAO)


class PointSet:
    """An ordered, duplicate-free list of points; ``id`` is the list index."""

    def __init__(self, points: Iterable, labels: Sequence[str] | None = None, mode: str = "exact"):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown coordinate mode {mode!r}")
        pts = []
        for i, p in enumerate(points):
            x, y = (p.x, p.y) if isinstance(p, Point) else p
            if mode == "exact":
                x, y = to_rational(x), to_rational(y)
            else:
                x, y = float(x), float(y)
            pts.append(Point(x, y, i))
        seen: dict = {}
        for p in pts:
            if p.xy in seen:
                raise DuplicatePoint(f"points {seen[p.xy]} and {p.id} coincide at ({p.x}, {p.y})")
            seen[p.xy] = p.id
        self.points: tuple[Point, ...] = tuple(pts)
        self.mode = mode
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != len(pts):
                raise ValueError("one label per point required")
            if len(set(labels)) != len(labels):
                raise ValueError("labels must be unique")
        self.labels: tuple[str, ...] | None = labels

    @classmethod
    def of(cls, coords, labels=None) -> "PointSet":
        return cls(coords, labels)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i) -> Point:
        return self.points[i]

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.coords == other.coords and self.mode == other.mode

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        body = ", ".join(f"({_fmt(p.x)}, {_fmt(p.y)})" for p in self.points)
        return f"PointSet([{body}])"

    @property
    def coords(self) -> tuple:
        return tuple(p.xy for p in self.points)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def resolve(self, ref) -> int:
        """Map a label or integer id to an id."""
        if self.labels and str(ref) in self.labels:
            return self.labels.index(str(ref))
        try:
            i = int(ref)
        except (TypeError, ValueError):
            raise KeyError(f"no point named {ref!r}") from None
        if not 0 <= i < len(self):
            raise KeyError(f"point id {i} out of range")
        return i

    def subset(self, ids: Iterable[int]) -> "PointSet":
        ids = list(ids)
        labels = [self.labels[i] for i in ids] if self.labels else None
        return PointSet([self.points[i].xy for i in ids], labels, self.mode)

    def frame(self, m: int) -> Frame:
        return Frame(self.coords, m, "float" if self.mode == "float" else "auto")


def _fmt(v) -> str:
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


def as_point_set(points) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(points)


class DirectedEdge(NamedTuple):
    source: int
    target: int
    cone: int


@dataclass(frozen=True, eq=False)
class ConeGraph:
    """A theta_m or Yao_m graph.

    ``directed_edges`` holds one ``(p, q, i)`` per non-empty cone ``i`` of
    ``p``: ``q`` is the closest point of that cone.  The undirected view and
    edge roles are derived from it.
    """

    flavor: str
    m: int
    points: PointSet
    directed_edges: tuple[DirectedEdge, ...]
    perturbed: bool = False
    frame: Frame | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def out(self) -> tuple[tuple[int | None, ...], ...]:
        table = [[None] * self.m for _ in range(self.n)]
        for s, t, i in self.directed_edges:
            table[s][i] = t
        return tuple(tuple(row) for row in table)

    @cached_property
    def roles(self) -> dict[frozenset, frozenset]:
        acc: dict[frozenset, set] = {}
        for s, t, i in self.directed_edges:
            acc.setdefault(frozenset((s, t)), set()).add((s, i))
        return {k: frozenset(v) for k, v in acc.items()}

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Undirected edges as sorted ``(u, v)`` pairs, sorted."""
        return tuple(sorted(tuple(sorted(e)) for e in self.roles))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def edges_of_class(self, i: int) -> list[tuple[int, int]]:
        return [(s, t) for s, t, c in self.directed_edges if c == i]

    def get_frame(self) -> Frame:
        if self.frame is None:
            object.__setattr__(self, "frame", self.points.frame(self.m))
        return self.frame

    @property
    def exact(self) -> bool:
        return self.get_frame().exact


def edge_roles(g: ConeGraph, u: int, v: int) -> frozenset:
    """The ``(endpoint, cone)`` pairs under which ``uv`` was selected."""
    try:
        return g.roles[frozenset((u, v))]
    except KeyError:
        raise NotAnEdge(f"{u}-{v} is not an edge") from None


def _degenerate(frame: Frame, message: str, pair, cone=None):
    cls = Degenerate if frame.exact else AmbiguousPredicate
    return cls(message, pair=pair, cone=cone)


def _check_flavor(flavor: str) -> str:
    flavor = flavor.lower()
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    return flavor


def build(points, m: int, flavor: str = THETA, *, lenient: bool = False) -> ConeGraph:
    """Build the graph by scanning every (point, cone) pair against all points.

    Strict mode raises :class:`Degenerate` when a point sits on a cone
    boundary of another or when the closest point of a cone is tied.
    Lenient mode assigns boundary rays to the cone that starts at them and
    breaks ties by point id, flagging the result as perturbed.
    """
    flavor = _check_flavor(flavor)
    points = as_point_set(points)
    frame = points.frame(m)
    n = len(points)
    perturbed = False
    ranks = [frame.ranks("key", i) for i in range(m)] if flavor == THETA else None
    edges: list[DirectedEdge] = []
    for rows in frame.block_rows():
        cones = frame.cone_block(rows)
        if lenient and (cones == BOUNDARY).any():
            perturbed = True
            cones = frame.cone_block(rows, lenient=True)
        if (cones == BOUNDARY).any():
            r, c = np.argwhere(cones == BOUNDARY)[0]
            raise _degenerate(frame, f"point {c} lies on a cone boundary of point {rows[r]}", (int(rows[r]), int(c)))
        dist = frame.dist2_block(rows) if flavor == YAO else None
        for i in range(m):
            mask = cones == i
            has = mask.any(axis=1)
            if not has.any():
                continue
            if flavor == THETA:
                vals = np.where(mask, ranks[i][None, :], n + 1)
                tol = 0
            else:
                big = dist.max() + 1
                vals = np.where(mask, dist, big)
                tol = frame.eps_d2
            best = vals.argmin(axis=1)
            low = vals[np.arange(len(rows)), best]
            if tol:
                tied = ((vals <= low[:, None] + tol) & mask).sum(axis=1) > 1
            else:
                tied = ((vals == low[:, None]) & mask).sum(axis=1) > 1
            tied &= has
            if tied.any():
                if not lenient:
                    r = int(np.argmax(tied))
                    others = np.flatnonzero((vals[r] == low[r]) & mask[r]) if not tol else np.flatnonzero(
                        (vals[r] <= low[r] + tol) & mask[r])
                    raise _degenerate(
                        frame,
                        f"closest point in cone {i} of point {rows[r]} is tied between {list(map(int, others))}",
                        (int(others[0]), int(others[1])), i)
                perturbed = True
            for r in np.flatnonzero(has):
                edges.append(DirectedEdge(int(rows[r]), int(best[r]), i))
    edges.sort(key=lambda e: (e.source, e.cone))
    return ConeGraph(flavor, m, points, tuple(edges), perturbed, frame)


def build_sweep(points, m: int) -> ConeGraph:
    """Theta-graph construction in O(n log n) per cone class.

    Points are processed in increasing order of projection onto the cone
    bisector.  A sorted list keeps the points whose closest neighbour is not
    yet known; they are mutually non-dominating, so the ones whose cone
    contains the new point form a contiguous run.  Strict mode only.
    """
    points = as_point_set(points)
    frame = points.frame(m)
    n = len(points)
    edges: list[DirectedEdge] = []
    for i in range(m):
        rs = frame.ranks("s", i)
        rt = frame.ranks("t", i)
        rk = frame.ranks("key", i)
        for r, label in ((rs, "upper"), (rt, "lower")):
            if n and len(np.unique(r)) < n:
                p, q = _first_tie(r)
                raise _degenerate(frame, f"points {p} and {q} are aligned with the {label} boundary of cone {i}",
                                  (p, q), i)
        by_s = [0] * n
        for p in range(n):
            by_s[rs[p]] = p
        rs_l = rs.tolist()
        rt_l = rt.tolist()
        pending_s = SortedList()  # rank of s, ascending
        pending_t = SortedList()  # rank of t, ascending (reverse of s order)
        order = np.argsort(rk, kind="stable").tolist()
        rk_l = rk.tolist()
        start = 0
        while start < n:
            stop = start
            while stop < n and rk_l[order[stop]] == rk_l[order[start]]:
                stop += 1
            group = order[start:stop]
            start = stop
            size = len(pending_s)
            if len(group) == 1:
                q = group[0]
                hi = pending_s.bisect_left(rs_l[q])
                lo = size - pending_t.bisect_left(rt_l[q])
                if lo < hi:
                    for pos in range(lo, hi):
                        edges.append(DirectedEdge(by_s[pending_s[pos]], q, i))
                    del pending_s[lo:hi]
                    del pending_t[size - hi:size - lo]
                pending_s.add(rs_l[q])
                pending_t.add(rt_l[q])
                continue
            claimed: dict[int, int] = {}
            for q in group:
                hi = pending_s.bisect_left(rs_l[q])
                lo = size - pending_t.bisect_left(rt_l[q])
                for pos in range(lo, hi):
                    p = by_s[pending_s[pos]]
                    if p in claimed:
                        raise _degenerate(
                            frame,
                            f"closest point in cone {i} of point {p} is tied between {claimed[p]} and {q}",
                            (claimed[p], q), i)
                    claimed[p] = q
            for p, q in claimed.items():
                edges.append(DirectedEdge(p, q, i))
                pending_s.remove(rs_l[p])
                pending_t.remove(rt_l[p])
            for q in group:
                pending_s.add(rs_l[q])
                pending_t.add(rt_l[q])
    edges.sort(key=lambda e: (e.source, e.cone))
    return ConeGraph(THETA, m, points, tuple(edges), False, frame)


def _first_tie(ranks) -> tuple[int, int]:
    order = np.argsort(ranks, kind="stable")
    same = np.flatnonzero(ranks[order[1:]] == ranks[order[:-1]])[0]
    return int(order[same]), int(order[same + 1])


def general_position_violations(points, m: int, flavors=FLAVORS) -> list[tuple[int, int, str]]:
    """Pairs of points that break general position for ``m`` cones.

    Theta: no two points on a line parallel to a cone boundary or
    perpendicular to a cone bisector.  Yao: additionally no two points at
    equal distance inside one cone of a third point.  Both conditions are
    inherited by every subset.
    """
    points = as_point_set(points)
    frame = points.frame(m)
    n = len(points)
    found: list[tuple[int, int, str]] = []
    if n < 2:
        return found
    for i in range(m):
        for what, reason in (("s", "boundary"), ("t", "boundary"), ("key", "projection")):
            if what == "key" and THETA not in flavors:
                continue
            r = frame.ranks(what, i)
            order = np.argsort(r, kind="stable")
            for j in np.flatnonzero(r[order[1:]] == r[order[:-1]]):
                found.append((int(order[j]), int(order[j + 1]), f"{reason} cone {i}"))
    if found or YAO not in flavors:
        return _dedupe(found)
    for rows in frame.block_rows():
        cones = frame.cone_block(rows)
        dist = frame.dist2_block(rows)
        cols = np.arange(n)
        for i in range(m):
            mask = cones == i
            if frame.exact:
                # distinct negative sentinels never tie with real distances
                vals = np.where(mask, dist, -1 - cols[None, :])
            else:
                vals = np.where(mask, dist, np.nan)
            order = np.argsort(vals, axis=1, kind="stable")
            ordered = np.take_along_axis(vals, order, axis=1)
            if frame.exact:
                tie = ordered[:, 1:] == ordered[:, :-1]
            else:
                tie = np.diff(ordered, axis=1) <= frame.eps_d2
            for r, j in np.argwhere(tie):
                found.append((int(order[r, j]), int(order[r, j + 1]), f"distance cone {i} of {int(rows[r])}"))
    return _dedupe(found)


def _dedupe(found):
    seen = set()
    out = []
    for p, q, why in found:
        key = (min(p, q), max(p, q), why)
        if key not in seen:
            seen.add(key)
            out.append((min(p, q), max(p, q), why))
    return out
