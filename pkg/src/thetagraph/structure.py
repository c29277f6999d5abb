"""i-paths, sinks, barriers, structural audits and connectivity of cone graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cone_graph import ConeGraph
from .errors import CycleDetected, Degenerate, Disconnected, PreconditionUnmet

LEFT = "Left"
RIGHT = "Right"
ON_BARRIER = "OnBarrier"


@dataclass(frozen=True)
class IPath:
    cone: int
    vertices: tuple[int, ...]
    terminal: bool = True

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def sink(self) -> int:
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class SinkReport:
    by_class: tuple[tuple[int, ...], ...]

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.by_class[i]

    def is_sink(self, p: int, i: int) -> bool:
        return p in self.by_class[i]


@dataclass
class AuditReport:
    kind: str
    witnesses: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "violated" if self.witnesses else "clean"

    @property
    def clean(self) -> bool:
        return not self.witnesses


def i_path(g: ConeGraph, start: int, i: int) -> IPath:
    """Follow the ``i``-edges from ``start`` until an ``i``-sink is reached."""
    seen = {start}
    path = [start]
    v = g.out[start][i]
    while v is not None:
        if v in seen:
            raise CycleDetected(f"{i}-path from {start} revisits {v}")
        seen.add(v)
        path.append(v)
        v = g.out[v][i]
    return IPath(i, tuple(path))


def path_is_monotone(g: ConeGraph, path: IPath) -> bool:
    """Projections onto the class bisector strictly increase along ``path``."""
    if len(path) < 2:
        return True
    v = np.array(path.vertices)
    return bool((g.get_frame().key_less(path.cone, v[:-1], v[1:]) > 0).all())


def cone_occupancy(g: ConeGraph) -> np.ndarray:
    """Boolean ``(n, m)`` table: does cone ``i`` of ``p`` contain a point?"""
    frame = g.get_frame()
    occ = np.zeros((g.n, g.m), dtype=bool)
    for rows in frame.block_rows():
        cones = frame.cone_block(rows)
        for i in range(g.m):
            occ[rows, i] = (cones == i).any(axis=1)
    return occ


def sinks(g: ConeGraph) -> SinkReport:
    """Per-class lists of points whose cone of that class is empty."""
    occ = cone_occupancy(g)
    return SinkReport(tuple(tuple(int(p) for p in np.flatnonzero(~occ[:, i])) for i in range(g.m)))


def audit_i_edge_crossings(g: ConeGraph) -> AuditReport:
    """Look for two edges of one class that cross.

    Witnesses are ``(i, (p1, q1), (p2, q2))``; collinear overlaps are
    reported with an ``"overlap"`` tag appended.
    """
    frame = g.get_frame()
    report = AuditReport("i-edge-crossing")
    for i in range(g.m):
        edges = np.array(g.edges_of_class(i), dtype=np.int64).reshape(-1, 2)
        k = len(edges)
        if k < 2:
            continue
        a, b = np.triu_indices(k, 1)
        p1, q1 = edges[a, 0], edges[a, 1]
        p2, q2 = edges[b, 0], edges[b, 1]
        o1 = frame.orient(p1, q1, p2)
        o2 = frame.orient(p1, q1, q2)
        o3 = frame.orient(p2, q2, p1)
        o4 = frame.orient(p2, q2, q1)
        cross = (o1 * o2 < 0) & (o3 * o4 < 0)
        for j in np.flatnonzero(cross):
            report.witnesses.append((i, (int(p1[j]), int(q1[j])), (int(p2[j]), int(q2[j]))))
        for j in np.flatnonzero((o1 == 0) & (o2 == 0)):
            e, f = (int(p1[j]), int(q1[j])), (int(p2[j]), int(q2[j]))
            if _collinear_overlap(frame, e, f):
                report.witnesses.append((i, e, f, "overlap"))
    return report


def _collinear_overlap(frame, e, f) -> bool:
    pts = [frame.coords(v) for v in (*e, *f)]
    axis = 0 if pts[0][0] != pts[1][0] else 1
    lo1, hi1 = sorted((pts[0][axis], pts[1][axis]))
    lo2, hi2 = sorted((pts[2][axis], pts[3][axis]))
    return min(hi1, hi2) > max(lo1, lo2)


def audit_empty_cone_crossings(g: ConeGraph, report_sinks: SinkReport | None = None) -> AuditReport:
    """Look for graph edges entering the empty cone of a sink.

    Witnesses are ``(sink, i, (u, v))``: edge ``uv`` meets the open interior
    of cone ``i`` of ``sink``.
    """
    frame = g.get_frame()
    report = AuditReport("empty-cone-crossing")
    sk = report_sinks or sinks(g)
    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    if not len(edges):
        return report
    U, V = edges[:, 0], edges[:, 1]
    wide = frame.system.width >= 180
    for i in range(g.m):
        apexes = np.array(sk[i], dtype=np.int64)
        if not len(apexes):
            continue
        lo, hi = frame.system.bounds(i)
        signs = frame.boundary_signs(apexes)
        s_sign, t_sign = signs[hi], -signs[lo]
        su, tu = s_sign[:, U], t_sign[:, U]
        sv, tv = s_sign[:, V], t_sign[:, V]
        hit = ((su > 0) & (tu > 0)) | ((sv > 0) & (tv > 0))
        if not wide:
            o = frame.orient(apexes[:, None], U[None, :], V[None, :])
            hit |= (su > 0) & (tv > 0) & (o < 0)
            hit |= (sv > 0) & (tu > 0) & (o > 0)
        incident = (U[None, :] == apexes[:, None]) | (V[None, :] == apexes[:, None])
        hit &= ~incident
        for r, e in np.argwhere(hit):
            report.witnesses.append((int(apexes[r]), i, (int(U[e]), int(V[e]))))
    return report


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _partition(labels) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for v, r in enumerate(labels):
        groups.setdefault(r, []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def connected_components(g: ConeGraph) -> list[list[int]]:
    uf = UnionFind(g.n)
    for s, t, _ in g.directed_edges:
        uf.union(s, t)
    return _partition([uf.find(v) for v in range(g.n)])


def strongly_connected_components(g: ConeGraph) -> list[list[int]]:
    """Tarjan's algorithm on the directed edges, iterative."""
    n = g.n
    succ = [[t for t in row if t is not None] for row in g.out]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while pos < len(succ[v]):
                w = succ[v][pos]
                pos += 1
                if index[w] == -1:
                    work.append((v, pos))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return _partition(comp)


# -- barriers ---------------------------------------------------------

def _ray_direction(system, i: int) -> tuple[int, int]:
    """A small integer direction strictly inside cone ``i`` and not horizontal."""
    fx, fy = system.fbisector[i]
    for scale in (8, 64, 1024, 1 << 20):
        dx, dy = round(fx * scale), round(fy * scale)
        if dy == 0:
            dy = 1 if fy >= 0 else -1
        if (dx or dy) and system.contains(i, dx, dy, 0.0 if system.exact else 1e-12):
            return dx, dy
    raise RuntimeError(f"no integer direction inside cone {i}")


def _half(u, e) -> int:
    """0 when ``e`` is at ccw angle in [0, 180) from ``u``, else 1."""
    c = u[0] * e[1] - u[1] * e[0]
    if c > 0:
        return 0
    if c < 0:
        return 1
    return 0 if u[0] * e[0] + u[1] * e[1] > 0 else 1


def _ccw_before(u, e, v) -> bool:
    """Counterclockwise from ``u``, is ``e`` reached before ``v``?"""
    he, hv = _half(u, e), _half(u, v)
    if he != hv:
        return he < hv
    return e[0] * v[1] - e[1] * v[0] > 0


@dataclass(frozen=True)
class Barrier:
    """An i-path between two sinks closed off by their empty cones.

    The separator is the bi-infinite polyline made of a ray inside the empty
    ``start_cone`` of the start, the ``i``-path, and a ray inside the empty
    ``i``-cone of its sink.  It is oriented so that it leaves through the
    ray pointing further up (ties: further left); ``Left`` and ``Right`` are
    the sides of that oriented curve.
    """

    cone: int
    start_cone: int
    path: IPath
    polyline: tuple[tuple, ...]  # scaled coordinates, in traversal order
    entry_dir: tuple[int, int]   # direction pointing back out along the entry ray
    exit_dir: tuple[int, int]
    far_right: str
    frame: object = field(repr=False, compare=False)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.path.vertices

    def side(self, q: int) -> str:
        if q in self.path.vertices:
            return ON_BARRIER
        wx, wy = self.frame.coords(q)
        crossings = 0
        pts = self.polyline
        for (ax, ay), (bx, by) in zip(pts, pts[1:]):
            if (ay > wy) != (by > wy):
                num = (ax - wx) * (by - ay) + (wy - ay) * (bx - ax)
                if num == 0:
                    raise Degenerate(f"point {q} lies on the barrier")
                if (num > 0) == (by - ay > 0):
                    crossings += 1
        for (ax, ay), (dx, dy) in ((pts[0], self.entry_dir), (pts[-1], self.exit_dir)):
            if (ay > wy) != (dy > 0):
                num = (ax - wx) * dy + (wy - ay) * dx
                if num == 0:
                    raise Degenerate(f"point {q} lies on a barrier ray")
                if (num > 0) == (dy > 0):
                    crossings += 1
        if crossings % 2 == 0:
            return self.far_right
        return LEFT if self.far_right == RIGHT else RIGHT

    def classify(self) -> dict[int, str]:
        return {q: self.side(q) for q in range(self.frame.n)}


def barrier(g: ConeGraph, i: int, start: int, start_cone: int | None = None,
            report_sinks: SinkReport | None = None) -> Barrier:
    """The ``i``-barrier through the ``i``-path from ``start``.

    ``start`` must have an empty cone of a class other than ``i``; it is
    picked as the lowest such class unless ``start_cone`` is given.
    """
    if g.m != 3:
        raise PreconditionUnmet(f"barriers are defined for m = 3, got m = {g.m}")
    sk = report_sinks or sinks(g)
    if start_cone is None:
        choices = [j for j in range(g.m) if j != i and sk.is_sink(start, j)]
        if not choices:
            raise PreconditionUnmet(f"point {start} has no empty cone other than cone {i}")
        start_cone = choices[0]
    elif start_cone == i or not sk.is_sink(start, start_cone):
        raise PreconditionUnmet(f"cone {start_cone} of point {start} is not an empty cone of another class")
    path = i_path(g, start, i)
    frame = g.get_frame()
    system = frame.system
    d_start = _ray_direction(system, start_cone)
    d_end = _ray_direction(system, i)
    pts = [frame.coords(v) for v in path.vertices]
    # traverse upward: exit through the ray with the larger y component
    if (d_end[1], -d_end[0]) >= (d_start[1], -d_start[0]):
        polyline, entry, exit_ = pts, d_start, d_end
    else:
        polyline, entry, exit_ = pts[::-1], d_end, d_start
    # left of the curve at infinity: directions ccw from exit to entry
    far_right = LEFT if _ccw_before(exit_, (1, 0), entry) else RIGHT
    return Barrier(i, start_cone, path, tuple(polyline), entry, exit_, far_right, frame)


def barrier_starts(g: ConeGraph, i: int, report_sinks: SinkReport | None = None) -> list[int]:
    """Points that can start an ``i``-barrier."""
    sk = report_sinks or sinks(g)
    return [p for p in range(g.n) if any(j != i and sk.is_sink(p, j) for j in range(g.m))]


# -- whole-graph checks ------------------------------------------------

def verify_sink_triple(g: ConeGraph, a: int, b: int, c: int,
                       components: list[list[int]] | None = None,
                       report_sinks: SinkReport | None = None) -> bool:
    """Whether three 0-sinks in the sink-triple configuration share a component.

    Requires ``a``, ``b``, ``c`` to be 0-sinks ordered left to right, and the
    1-path from ``a`` to end at a 1-sink whose 0-path ends at ``c``.
    """
    if g.m != 3:
        raise PreconditionUnmet("sink triples are defined for m = 3")
    sk = report_sinks or sinks(g)
    for v in (a, b, c):
        if not sk.is_sink(v, 0):
            raise PreconditionUnmet(f"(i) point {v} is not a 0-sink")
    xs = [g.points[v].x for v in (a, b, c)]
    if not xs[0] < xs[1] < xs[2]:
        raise PreconditionUnmet("(i) points are not strictly ordered left to right")
    a_prime = i_path(g, a, 1).sink
    if i_path(g, a_prime, 0).sink != c:
        raise PreconditionUnmet("(ii) the 0-path from the end of the 1-path from a does not end at c")
    comps = components or connected_components(g)
    label = {v: k for k, comp in enumerate(comps) for v in comp}
    return label[a] == label[b] == label[c]


def sink_triples(g: ConeGraph, report_sinks: SinkReport | None = None):
    """Every triple ``(a, b, c)`` meeting the sink-triple preconditions."""
    sk = report_sinks or sinks(g)
    zero = sorted(sk[0], key=lambda v: g.points[v].x)
    out = []
    for a in zero:
        c = i_path(g, i_path(g, a, 1).sink, 0).sink
        xa, xc = g.points[a].x, g.points[c].x
        if not xa < xc:
            continue
        for b in zero:
            if xa < g.points[b].x < xc:
                out.append((a, b, c))
    return out


def stretch_factor(g: ConeGraph) -> float:
    """Worst ratio of graph distance to straight-line distance over all pairs."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import shortest_path

    n = g.n
    if n < 2:
        return 1.0
    xy = np.array([[float(p.x), float(p.y)] for p in g.points])
    if not g.edges:
        raise Disconnected("graph has no edges")
    e = np.array(g.edges)
    w = np.hypot(*(xy[e[:, 0]] - xy[e[:, 1]]).T)
    mat = csr_matrix((w, (e[:, 0], e[:, 1])), shape=(n, n))
    dist = shortest_path(mat, directed=False)
    if np.isinf(dist).any():
        raise Disconnected("graph is not connected")
    straight = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    iu = np.triu_indices(n, 1)
    return float(np.max(dist[iu] / straight[iu]))
