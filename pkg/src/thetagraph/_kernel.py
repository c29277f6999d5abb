"""Vectorized predicates over a whole point set.

Exact mode scales all rational coordinates by the lcm of their denominators,
which preserves every cone and orientation predicate.  Values are then
integers ``A + B*sqrt(3)`` (boundary components are stored doubled) and
their signs are exact.  int64 is used while coordinates stay below
``INT64_BOUND`` -- that keeps every squared intermediate under 2**62 -- and
Python ints in object arrays beyond it.  Float mode evaluates the same
formulas in float64 and reports any value within ``eps`` of zero as 0, which
callers treat as a boundary case.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from .exact_geom import EXACT_M, FLOAT_EPS, SQRT3, cone_system, sign_sqrt3

INT64_BOUND = 2**25

#: cells per block when materializing pairwise matrices
BLOCK_CELLS = 1 << 21

SELF = -1
BOUNDARY = -2


def _isign(a) -> np.ndarray:
    if a.dtype == object:
        return ((a > 0).astype(np.int8) - (a < 0).astype(np.int8))
    return np.sign(a).astype(np.int8)


def sign_sqrt3_array(A, B) -> np.ndarray:
    """Elementwise exact sign of ``A + B*sqrt(3)`` for integer arrays."""
    sa = _isign(A)
    sb = _isign(B)
    out = np.where(sa == 0, sb, sa)
    mixed = (sa != 0) & (sb != 0) & (sa != sb)
    if mixed.any():
        a = A[mixed]
        b = B[mixed]
        out[mixed] = sa[mixed] * _isign(a * a - 3 * b * b)
    return out


def float_sign(v, eps: float) -> np.ndarray:
    s = np.sign(v).astype(np.int8)
    s[np.abs(v) <= eps] = 0
    return s


def exact_ranks(A, B) -> np.ndarray:
    """Dense ranks of ``A + B*sqrt(3)``; equal values share a rank."""
    n = len(A)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    approx = A.astype(float) + B.astype(float) * SQRT3
    order = np.argsort(approx, kind="stable")
    steps = sign_sqrt3_array(A[order[1:]] - A[order[:-1]], B[order[1:]] - B[order[:-1]])
    if (steps < 0).any():
        # float ordering was wrong somewhere; sort with exact comparisons
        a = [int(v) for v in A]
        b = [int(v) for v in B]
        order = np.array(
            sorted(range(n), key=cmp_to_key(lambda i, j: sign_sqrt3(a[i] - a[j], b[i] - b[j]))),
            dtype=np.int64,
        )
        steps = sign_sqrt3_array(A[order[1:]] - A[order[:-1]], B[order[1:]] - B[order[:-1]])
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.concatenate(([0], np.cumsum(steps != 0)))
    return ranks


def float_ranks(values, eps: float) -> np.ndarray:
    """Dense ranks where neighbours closer than ``eps`` are merged (ambiguous)."""
    n = len(values)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.argsort(values, kind="stable")
    gaps = np.diff(values[order]) > eps
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.concatenate(([0], np.cumsum(gaps)))
    return ranks


class Frame:
    """Point coordinates prepared for batch evaluation under one cone system."""

    def __init__(self, coords, m: int, mode: str = "auto"):
        coords = list(coords)
        self.n = len(coords)
        floats = any(isinstance(c, float) for xy in coords for c in xy)
        if mode == "exact" and (floats or m not in EXACT_M):
            raise ValueError("exact mode needs rational coordinates and m in {2, 3, 4, 6, 12}")
        self.exact = mode != "float" and not floats and m in EXACT_M
        self.system = cone_system(m, self.exact)
        self.m = m
        if self.exact:
            xs = [Fraction(x) for x, _ in coords]
            ys = [Fraction(y) for _, y in coords]
            scale = 1
            for v in xs + ys:
                scale = math.lcm(scale, v.denominator)
            self.scale = scale
            ix = [int(v * scale) for v in xs]
            iy = [int(v * scale) for v in ys]
            big = max((abs(v) for v in ix + iy), default=0)
            dtype = np.int64 if big <= INT64_BOUND else object
            self.X = np.array(ix, dtype=dtype)
            self.Y = np.array(iy, dtype=dtype)
            self.eps = 0.0
            self.eps_area = 0.0
            self.eps_d2 = 0.0
        else:
            self.scale = 1
            self.X = np.array([float(x) for x, _ in coords], dtype=float)
            self.Y = np.array([float(y) for _, y in coords], dtype=float)
            diag = math.hypot(np.ptp(self.X), np.ptp(self.Y)) if self.n else 0.0
            self.eps = FLOAT_EPS * diag
            self.eps_area = self.eps * diag
            self.eps_d2 = 2 * self.eps * diag
        self._rank_cache: dict = {}

    @property
    def big(self) -> bool:
        return self.X.dtype == object

    def block_rows(self):
        """Row ranges sized so a block of pairwise matrices stays bounded."""
        step = max(1, BLOCK_CELLS // max(self.n, 1))
        for start in range(0, self.n, step):
            yield np.arange(start, min(self.n, start + step))

    # -- linear forms --------------------------------------------------
    def _cross(self, k: int, DX, DY) -> np.ndarray:
        """Sign of cross(boundary_k, d) for displacement arrays."""
        if self.exact:
            ax, bx, ay, by = self.system.boundary2[k]
            return sign_sqrt3_array(ax * DY - ay * DX, bx * DY - by * DX)
        fx, fy = self.system.fboundary[k]
        return float_sign(fx * DY - fy * DX, self.eps)

    def _dot(self, k: int, DX, DY) -> np.ndarray:
        if self.exact:
            ax, bx, ay, by = self.system.boundary2[k]
            return sign_sqrt3_array(ax * DX + ay * DY, bx * DX + by * DY)
        fx, fy = self.system.fboundary[k]
        return float_sign(fx * DX + fy * DY, self.eps)

    def displacements(self, rows, cols=None):
        X, Y = self.X, self.Y
        if cols is None:
            return X[None, :] - X[rows, None], Y[None, :] - Y[rows, None]
        return X[cols][None, :] - X[rows, None], Y[cols][None, :] - Y[rows, None]

    def boundary_signs(self, rows, cols=None) -> list[np.ndarray]:
        DX, DY = self.displacements(rows, cols)
        return [self._cross(k, DX, DY) for k in range(self.m)]

    def cone_block(self, rows, lenient: bool = False, cols=None) -> np.ndarray:
        """Cone index of every point relative to each apex in ``rows``.

        ``SELF`` marks the apex itself, ``BOUNDARY`` a point on a boundary
        ray (strict mode only).  ``cols`` restricts the targets.
        """
        DX, DY = self.displacements(rows, cols)
        signs = [self._cross(k, DX, DY) for k in range(self.m)]
        cones = np.full(DX.shape, BOUNDARY, dtype=np.int16)
        for i in range(self.m):
            lo, hi = self.system.bounds(i)
            cones[(signs[hi] > 0) & (signs[lo] < 0)] = i
        same = (DX == 0) & (DY == 0)
        if lenient:
            for k in range(self.m):
                on_ray = (cones == BOUNDARY) & (signs[k] == 0) & ~same
                if on_ray.any():
                    on_ray &= self._dot(k, DX, DY) > 0
                    cones[on_ray] = k
        cones[same] = SELF
        return cones

    def cone_of(self, p: int, q: int, lenient: bool = False) -> int:
        return int(self.cone_block(np.array([p]), lenient, np.array([q]))[0, 0])

    # -- per-point keys ------------------------------------------------
    def point_cross(self, k: int):
        """cross(boundary_k, q) per point: (A, B) integer arrays or floats."""
        if self.exact:
            ax, bx, ay, by = self.system.boundary2[k]
            return ax * self.Y - ay * self.X, bx * self.Y - by * self.X
        fx, fy = self.system.fboundary[k]
        return fx * self.Y - fy * self.X

    def theta_key(self, i: int):
        """Per-point value whose differences order projections in cone ``i``."""
        lo, hi = self.system.bounds(i)
        if self.exact:
            ha, hb = self.point_cross(hi)
            la, lb = self.point_cross(lo)
            return ha - la, hb - lb
        return self.point_cross(hi) - self.point_cross(lo)

    def ranks(self, what: str, k: int) -> np.ndarray:
        """Dense exact ranks of a per-point form.

        ``what`` is ``"key"`` (theta key of cone k), ``"s"`` (cross with
        the upper boundary of cone k) or ``"t"`` (minus cross with the lower
        boundary).
        """
        cache_key = (what, k)
        if cache_key in self._rank_cache:
            return self._rank_cache[cache_key]
        lo, hi = self.system.bounds(k)
        if what == "key":
            vals = self.theta_key(k)
        elif what == "s":
            vals = self.point_cross(hi)
        elif what == "t":
            vals = self.point_cross(lo)
            vals = tuple(-v for v in vals) if self.exact else -vals
        else:
            raise ValueError(what)
        r = exact_ranks(*vals) if self.exact else float_ranks(vals, self.eps)
        self._rank_cache[cache_key] = r
        return r

    def key_less(self, i: int, p, q) -> np.ndarray:
        """Elementwise sign(key_i(q) - key_i(p))."""
        if self.exact:
            A, B = self.theta_key(i)
            return sign_sqrt3_array(A[q] - A[p], B[q] - B[p])
        K = self.theta_key(i)
        return float_sign(K[q] - K[p], self.eps)

    def dist2_block(self, rows) -> np.ndarray:
        DX, DY = self.displacements(rows)
        return DX * DX + DY * DY

    # -- orientation ---------------------------------------------------
    def orient(self, a, b, c) -> np.ndarray:
        X, Y = self.X, self.Y
        v = (X[b] - X[a]) * (Y[c] - Y[a]) - (Y[b] - Y[a]) * (X[c] - X[a])
        if self.exact:
            return _isign(np.asarray(v))
        return float_sign(np.asarray(v, dtype=float), self.eps_area)

    def coords(self, p: int):
        """Scaled coordinates of point ``p`` as Python numbers."""
        if self.exact:
            return int(self.X[p]), int(self.Y[p])
        return float(self.X[p]), float(self.Y[p])
