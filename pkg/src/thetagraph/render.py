"""Static SVG figures of cone graphs, paths, barriers and routes.

Every drawn element carries a stable ``gid``: ``vertex-<id>``,
``edge-<u>-<v>`` (undirected edges, u < v), ``cone-<apex>-<i>``,
``sink-<i>-<id>`` and ``overlay-<kind>-<k>``.  Output is byte-identical for
identical input.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

from .cone_graph import ConeGraph, PointSet  # noqa: E402
from .routing import RouteTrace  # noqa: E402
from .structure import Barrier, IPath  # noqa: E402

CLASS_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939")
OVERLAY_COLORS = {"path": "#ff7f0e", "barrier": "#000000", "route": "#e377c2"}

_RC = {"svg.hashsalt": "thetagraph", "svg.fonttype": "none", "path.simplify": False}


@dataclass(frozen=True)
class Overlay:
    kind: str          # "path", "barrier" or "route"
    vertices: tuple[int, ...]
    barrier: Barrier | None = None

    @classmethod
    def of(cls, obj) -> "Overlay":
        if isinstance(obj, Overlay):
            return obj
        if isinstance(obj, Barrier):
            return cls("barrier", obj.vertices, obj)
        if isinstance(obj, IPath):
            return cls("path", obj.vertices)
        if isinstance(obj, RouteTrace):
            return cls("route", obj.visited)
        raise TypeError(f"cannot overlay {type(obj).__name__}")


def _bounds(xy):
    if not xy:
        return -1.0, 1.0, -1.0, 1.0
    xs = [p[0] for p in xy]
    ys = [p[1] for p in xy]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad = 0.08 * max(x1 - x0, y1 - y0, 1e-9)
    if x1 - x0 < 1e-12 and y1 - y0 < 1e-12:
        pad = max(1.0, abs(x0), abs(y0)) * 0.1
    return x0 - pad, x1 + pad, y0 - pad, y1 + pad


def render_svg(graph, overlays=(), *, cones=(), mark_sinks=None, labels: bool = True,
               title: str | None = None) -> bytes:
    """Render a graph (or a bare point set) with optional overlays.

    ``cones`` is a sequence of ``(apex, i)`` wedges to shade and
    ``mark_sinks`` an optional sink class whose sinks get a ring.
    """
    if isinstance(graph, ConeGraph):
        ps, g = graph.points, graph
    else:
        ps, g = (graph if isinstance(graph, PointSet) else PointSet(graph)), None
    xy = [(float(p.x), float(p.y)) for p in ps]
    x0, x1, y0, y1 = _bounds(xy)
    span = max(x1 - x0, y1 - y0)
    radius = span / 120

    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
        ax.set_aspect("equal", adjustable="box")
        ax.set_xticks([])
        ax.set_yticks([])
        if title:
            ax.set_title(title)

        if g is not None:
            system = g.get_frame().system
            for apex, i in cones:
                lo, hi = system.bounds(i)
                ax_, ay_ = xy[apex]
                far = 4 * span
                pts = [(ax_, ay_)]
                steps = 16
                a0 = system.azimuths[lo]
                width = system.width
                for s in range(steps + 1):
                    az = math.radians(a0 + width * s / steps)
                    pts.append((ax_ + far * math.sin(az), ay_ + far * math.cos(az)))
                wedge = Polygon(pts, closed=True, facecolor=CLASS_COLORS[i % 12], alpha=0.12,
                                edgecolor="none", zorder=0)
                wedge.set_gid(f"cone-{apex}-{i}")
                ax.add_patch(wedge)
            for u, v in g.edges:
                roles = g.roles[frozenset((u, v))]
                cls = min(c for _, c in roles) if roles else 0
                (line,) = ax.plot([xy[u][0], xy[v][0]], [xy[u][1], xy[v][1]],
                                  color=CLASS_COLORS[cls % 12], lw=1.2, zorder=1)
                line.set_gid(f"edge-{u}-{v}")
            if mark_sinks is not None:
                from .structure import sinks
                for s in sinks(g)[mark_sinks]:
                    ring = Circle(xy[s], radius * 2.2, fill=False, edgecolor=CLASS_COLORS[mark_sinks % 12],
                                  lw=1.0, zorder=3)
                    ring.set_gid(f"sink-{mark_sinks}-{s}")
                    ax.add_patch(ring)

        for k, ov in enumerate(Overlay.of(o) for o in overlays):
            color = OVERLAY_COLORS.get(ov.kind, "#000000")
            px = [xy[v][0] for v in ov.vertices]
            py = [xy[v][1] for v in ov.vertices]
            if ov.barrier is not None:
                b = ov.barrier
                scale = float(b.frame.scale)
                poly = [(px_ / scale, py_ / scale) for px_, py_ in b.polyline]
                far = 4 * span
                ex, ey = b.entry_dir
                xx, xy_ = b.exit_dir
                en = math.hypot(ex, ey) or 1.0
                xn = math.hypot(xx, xy_) or 1.0
                start = (poly[0][0] + far * ex / en, poly[0][1] + far * ey / en)
                end = (poly[-1][0] + far * xx / xn, poly[-1][1] + far * xy_ / xn)
                full = [start] + poly + [end]
                px = [p[0] for p in full]
                py = [p[1] for p in full]
            (line,) = ax.plot(px, py, color=color, lw=3.0, alpha=0.55, zorder=2,
                              linestyle="--" if ov.kind == "route" else "-")
            line.set_gid(f"overlay-{ov.kind}-{k}")

        for p in ps:
            dot = Circle(xy[p.id], radius, facecolor="#222222", edgecolor="none", zorder=4)
            dot.set_gid(f"vertex-{p.id}")
            ax.add_patch(dot)
            if labels:
                t = ax.annotate(ps.label(p.id), xy[p.id], xytext=(4, 4), textcoords="offset points",
                                fontsize=8, zorder=5)
                t.set_gid(f"label-{p.id}")

        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def render_report_svg(results, title: str = "property results") -> bytes:
    """Bar chart of trials and failures per property."""
    names = [r.name for r in results]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(names) + 2), 4))
        xs = range(len(names))
        ax.bar([x - 0.2 for x in xs], [r.trials for r in results], width=0.4, label="trials", color="#1f77b4")
        ax.bar([x + 0.2 for x in xs], [r.failures for r in results], width=0.4, label="failures", color="#d62728")
        ax.set_xticks(list(xs))
        ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()
