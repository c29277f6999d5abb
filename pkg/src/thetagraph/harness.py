"""Seeded point-set generation, structural properties and counterexample shrinking."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .cone_graph import THETA, YAO, PointSet, as_point_set, build, build_sweep, general_position_violations
from .errors import Degenerate, ExhaustedRetries, ThetaGraphError, UnknownProperty
from .exact_geom import check_arc_enclosure
from .structure import (
    LEFT,
    RIGHT,
    audit_empty_cone_crossings,
    audit_i_edge_crossings,
    barrier,
    barrier_starts,
    connected_components,
    i_path,
    sink_triples,
    sinks,
    verify_sink_triple,
)

DISTRIBUTIONS = ("uniform", "clustered", "jittered-grid", "jittered-collinear")

#: barriers checked per (flavor, class) in barrier-separates
BARRIERS_PER_CLASS = 4


@dataclass(frozen=True)
class GenSpec:
    seed: int
    n_min: int = 1
    n_max: int = 64
    distribution: str = "uniform"
    bound: int = 10**6
    clusters: int = 4
    m: int = 3
    max_retries: int = 64


def batch(seed: int, trials: int, *, n_min: int = 1, n_max: int = 64,
          distributions: Iterable[str] = DISTRIBUTIONS, bound: int = 10**6, m: int = 3) -> list[GenSpec]:
    """Per-trial specs; distributions rotate, seeds derive from ``(seed, k)``."""
    dists = tuple(distributions)
    specs = []
    for k in range(trials):
        sub = int(np.random.SeedSequence([seed, k]).generate_state(1, np.uint64)[0])
        specs.append(GenSpec(sub, n_min, n_max, dists[k % len(dists)], bound, m=m))
    return specs


def _raw_points(spec: GenSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    B = spec.bound
    kind = spec.distribution
    if kind == "uniform":
        return rng.integers(-B, B + 1, size=(n, 2))
    if kind == "clustered":
        k = max(1, spec.clusters)
        centers = rng.integers(-B * 4 // 5, B * 4 // 5 + 1, size=(k, 2))
        which = rng.integers(0, k, size=n)
        spread = max(1.0, B / 40)
        pts = centers[which] + rng.normal(0, spread, size=(n, 2))
        return np.clip(np.rint(pts), -B, B).astype(np.int64)
    if kind == "jittered-grid":
        side = max(1, math.ceil(math.sqrt(n)))
        cells = rng.choice(side * side, size=n, replace=False)
        spacing = 2 * B / (side + 1)
        gx = -B + spacing * (1 + cells % side)
        gy = -B + spacing * (1 + cells // side)
        pts = np.stack([gx, gy], axis=1) + rng.integers(-3, 4, size=(n, 2))
        return np.clip(np.rint(pts), -B, B).astype(np.int64)
    if kind == "jittered-collinear":
        angle = rng.uniform(0, math.pi)
        base = rng.uniform(-B / 4, B / 4, size=2)
        t = rng.uniform(-B / 2, B / 2, size=n)
        pts = base + np.outer(t, [math.cos(angle), math.sin(angle)]) + rng.integers(-3, 4, size=(n, 2))
        return np.clip(np.rint(pts), -B, B).astype(np.int64)
    raise ValueError(f"unknown distribution {kind!r}")


def generate(spec: GenSpec) -> PointSet:
    """Deterministic integer point set in strict general position for ``spec.m``.

    Offending points are re-jittered with a growing radius until the set is
    valid for both flavors.
    """
    if spec.bound < spec.n_max:
        raise ValueError("coordinate bound must be at least the number of points")
    rng = np.random.default_rng(spec.seed)
    n = int(rng.integers(spec.n_min, spec.n_max + 1))
    pts = _raw_points(spec, rng, n)
    B = spec.bound
    radius = 3
    for _ in range(spec.max_retries):
        bad: set[int] = set()
        seen: dict[tuple[int, int], int] = {}
        for k, (x, y) in enumerate(map(tuple, pts)):
            if (x, y) in seen:
                bad.add(k)
            seen.setdefault((x, y), k)
        if not bad:
            bad = {q for _, q, _ in general_position_violations(pts.tolist(), spec.m)}
        if not bad:
            return PointSet(pts.tolist())
        for k in sorted(bad):
            pts[k] = np.clip(pts[k] + rng.integers(-radius, radius + 1, size=2), -B, B)
        radius *= 2
    raise ExhaustedRetries(f"no valid point set for {spec} after {spec.max_retries} retries")


class Trial:
    """One input with lazily built graphs shared across properties."""

    def __init__(self, points, spec: GenSpec | None = None):
        self.points = as_point_set(points)
        self.spec = spec
        self.m = spec.m if spec else 3
        self._cache: dict = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def graph(self, flavor: str = THETA, m: int = 3):
        return self._memo(("graph", flavor, m), lambda: build(self.points, m, flavor))

    def sinks(self, flavor: str = THETA, m: int = 3):
        return self._memo(("sinks", flavor, m), lambda: sinks(self.graph(flavor, m)))

    def components(self, flavor: str = THETA, m: int = 3):
        return self._memo(("comp", flavor, m), lambda: connected_components(self.graph(flavor, m)))


def _connected(flavor: str, m: int | None = None):
    def prop(trial: Trial) -> list[str]:
        mm = m if m is not None else trial.m
        comps = trial.components(flavor, mm)
        if len(comps) > 1:
            return [f"{flavor}{mm} graph has {len(comps)} components"]
        return []
    return prop


def _even_m_connected(trial: Trial) -> list[str]:
    if trial.m % 2:
        raise ValueError(f"even-m-connected needs an even m, got {trial.m}")
    return _connected(THETA)(trial) + _connected(YAO)(trial)


def _noncrossing(trial: Trial) -> list[str]:
    out = []
    for flavor in (THETA, YAO):
        rep = audit_i_edge_crossings(trial.graph(flavor))
        out += [f"{flavor}3 crossing {w}" for w in rep.witnesses]
    return out


def _empty_cone(trial: Trial) -> list[str]:
    out = []
    for flavor in (THETA, YAO):
        rep = audit_empty_cone_crossings(trial.graph(flavor), trial.sinks(flavor))
        out += [f"{flavor}3 empty-cone {w}" for w in rep.witnesses]
    return out


def _paths(trial: Trial) -> list[str]:
    out = []
    for flavor in (THETA, YAO):
        g = trial.graph(flavor)
        sk = trial.sinks(flavor)
        frame = g.get_frame()
        for i in range(g.m):
            src = np.array([v for v in range(g.n) if g.out[v][i] is not None], dtype=np.int64)
            ok = np.ones(g.n, dtype=bool)
            if len(src):
                dst = np.array([g.out[v][i] for v in src], dtype=np.int64)
                ok[src] = frame.key_less(i, src, dst) > 0
            sink_set = set(sk[i])
            for v in range(g.n):
                try:
                    path = i_path(g, v, i)
                except ThetaGraphError as exc:
                    out.append(f"{flavor}3 {i}-path from {v}: {exc}")
                    continue
                if not all(ok[u] for u in path.vertices[:-1]):
                    out.append(f"{flavor}3 {i}-path from {v} is not monotone")
                if path.sink not in sink_set:
                    out.append(f"{flavor}3 {i}-path from {v} ends at non-sink {path.sink}")
    return out


def _barriers(trial: Trial) -> list[str]:
    out = []
    for flavor in (THETA, YAO):
        g = trial.graph(flavor)
        sk = trial.sinks(flavor)
        for i in range(g.m):
            starts = barrier_starts(g, i, sk)
            if len(starts) > BARRIERS_PER_CLASS:
                step = len(starts) / BARRIERS_PER_CLASS
                starts = [starts[int(k * step)] for k in range(BARRIERS_PER_CLASS)]
            paths = [i_path(g, v, i).vertices for v in range(g.n)]
            for a in starts:
                sides = barrier(g, i, a, report_sinks=sk).classify()
                for v, path in enumerate(paths):
                    seen = {sides[u] for u in path}
                    if LEFT in seen and RIGHT in seen:
                        out.append(f"{flavor}3 {i}-path from {v} crosses the {i}-barrier from {a}")
    return out


def _sink_triples(trial: Trial) -> list[str]:
    out = []
    for flavor in (THETA, YAO):
        g = trial.graph(flavor)
        sk = trial.sinks(flavor)
        comps = trial.components(flavor)
        for a, b, c in sink_triples(g, sk):
            if not verify_sink_triple(g, a, b, c, comps, sk):
                out.append(f"{flavor}3 sink triple {(a, b, c)} is split")
    return out


def _naive_sweep(trial: Trial) -> list[str]:
    naive = trial.graph(THETA, trial.m).directed_edges
    sweep = build_sweep(trial.points, trial.m).directed_edges
    if naive != sweep:
        diff = sorted(set(naive) ^ set(sweep))[:4]
        return [f"naive and sweep builders differ, e.g. {diff}"]
    return []


def arc_triple(seed: int, bound: float = 1e6):
    """Random (u, v, x) with u and x on a common non-vertical line."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(-bound, bound, size=2)
    angle = rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
    t = rng.uniform(-bound, bound)
    x = u + t * np.array([math.cos(angle), math.sin(angle)])
    v = rng.uniform(-bound, bound, size=2)
    return tuple(u), tuple(v), tuple(x)


def _arc(trial: Trial) -> list[str]:
    u, v, x = arc_triple(trial.spec.seed, trial.spec.bound)
    if not check_arc_enclosure(u, v, x, samples=1000):
        return [f"arc not enclosed for u={u}, v={v}, x={x}"]
    return []


PROPERTIES: dict[str, Callable[[Trial], list[str]]] = {
    "theta3-connected": _connected(THETA, 3),
    "yao3-connected": _connected(YAO, 3),
    "even-m-connected": _even_m_connected,
    "i-edge-noncrossing": _noncrossing,
    "empty-cone-uncrossed": _empty_cone,
    "i-path-monotone-sink": _paths,
    "barrier-separates": _barriers,
    "sink-triple-connected": _sink_triples,
    "naive-sweep-equal": _naive_sweep,
    "arc-enclosure": _arc,
}

#: properties whose trial input is not a point set
POINTLESS = frozenset({"arc-enclosure"})


@dataclass
class PropertyResult:
    name: str
    trials: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    messages: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "passed": self.passed,
            "elapsed_s": round(self.elapsed, 3),
            "messages": self.messages[:20],
            "witnesses": [[[str(x), str(y)] for x, y in w.coords] if isinstance(w, PointSet) else [list(map(float, p)) for p in w]
                          for w in self.witnesses],
        }


def evaluate(name: str, trial: Trial) -> list[str]:
    try:
        prop = PROPERTIES[name]
    except KeyError:
        raise UnknownProperty(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}") from None
    try:
        return prop(trial)
    except Degenerate:
        raise
    except ThetaGraphError as exc:
        return [f"{type(exc).__name__}: {exc}"]


def run_suite(names: Iterable[str], specs: Iterable[GenSpec], *, shrink: bool = True,
              on_trial: Callable | None = None) -> dict[str, PropertyResult]:
    """Run several properties over one batch, building each graph once per trial."""
    names = list(names)
    for name in names:
        if name not in PROPERTIES:
            raise UnknownProperty(f"unknown property {name!r}; known: {', '.join(PROPERTIES)}")
    results = {name: PropertyResult(name) for name in names}
    for spec in specs:
        needs_points = any(name not in POINTLESS for name in names)
        points = generate(spec) if needs_points else PointSet([])
        trial = Trial(points, spec)
        for name in names:
            res = results[name]
            t0 = time.perf_counter()
            res.trials += 1
            try:
                msgs = evaluate(name, trial)
            except Degenerate as exc:
                msgs = [f"Degenerate: {exc}"]
            if msgs:
                res.failures += 1
                res.messages.extend(f"seed {spec.seed}: {m}" for m in msgs)
                if name in POINTLESS:
                    res.witnesses.append(arc_triple(spec.seed, spec.bound))
                elif shrink:
                    res.witnesses.append(minimize(points, lambda ps, name=name, spec=spec: _fails(name, ps, spec)))
                else:
                    res.witnesses.append(points)
            res.elapsed += time.perf_counter() - t0
        if on_trial:
            on_trial(spec, trial, results)
    return results


def run_property(name: str, specs: Iterable[GenSpec], *, shrink: bool = True) -> PropertyResult:
    return run_suite([name], specs, shrink=shrink)[name]


def _fails(name: str, points: PointSet, spec: GenSpec | None) -> bool:
    try:
        return bool(evaluate(name, Trial(points, spec)))
    except Degenerate:
        return False


def minimize(points, failing: Callable[[PointSet], bool]) -> PointSet:
    """Shrink a failing point set by deleting chunks, halves first, down to single points.

    The result still fails and every single-point deletion from it passes.
    """
    ps = as_point_set(points)
    ids = list(range(len(ps)))

    def still_fails(cand):
        return bool(cand) and failing(ps.subset(cand))

    chunk = max(1, len(ids) // 2)
    while True:
        removed = False
        start = 0
        while start < len(ids):
            cand = ids[:start] + ids[start + chunk:]
            if still_fails(cand):
                ids = cand
                removed = True
            else:
                start += chunk
        if chunk == 1 and not removed:
            break
        chunk = max(1, min(chunk if removed else chunk // 2, len(ids) // 2))
    return ps.subset(ids)
