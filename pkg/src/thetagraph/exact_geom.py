"""Exact scalars, points, cone predicates and distance measures.

Coordinates are rationals (``fractions.Fraction``) in exact mode and Python
floats in float mode.  Every cone boundary and bisector that occurs for
``m`` in ``EXACT_M`` sits at a multiple of 30 degrees, so all predicate
values live in the quadratic field Q(sqrt 3) and are represented by
:class:`QSqrt3`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Union

import numpy as np

from .errors import (
    AmbiguousPredicate,
    Degenerate,
    DegenerateGeometry,
    IdenticalPoints,
    Overlap,
    WrongCone,
)

SQRT3 = math.sqrt(3.0)

#: cone counts whose boundaries fall on multiples of 30 degrees
EXACT_M = frozenset({2, 3, 4, 6, 12})

#: relative epsilon for float mode, scaled by the bounding-box diagonal
FLOAT_EPS = 1e-9


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def sign_sqrt3(a, b) -> int:
    """Exact sign of ``a + b*sqrt(3)`` for rational ``a`` and ``b``."""
    if b == 0:
        return _sign(a)
    if a == 0 or (a > 0) == (b > 0):
        return _sign(b) if a == 0 else _sign(a)
    # opposite signs; a*a == 3*b*b has no rational solution with b != 0
    return _sign(a) if a * a > 3 * b * b else -_sign(a)


class QSqrt3:
    """An exact element ``a + b*sqrt(3)`` of Q(sqrt 3)."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def _coerce(cls, other) -> "QSqrt3":
        if isinstance(other, QSqrt3):
            return other
        if isinstance(other, (int, Rational)):
            return cls(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt3(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        norm = o.a * o.a - 3 * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 3)")
        return self * QSqrt3(o.a / norm, -o.b / norm)

    def sign(self) -> int:
        return sign_sqrt3(self.a, self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT3

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return f"QSqrt3({self.a})"
        return f"QSqrt3({self.a} + {self.b}*sqrt3)"


@dataclass(frozen=True)
class Approx:
    """A float-mode scalar whose sign is only trusted outside ``[-eps, eps]``."""

    value: float
    eps: float

    def sign(self) -> int:
        if abs(self.value) <= self.eps:
            raise AmbiguousPredicate(f"|{self.value!r}| is within the {self.eps:g} guard band")
        return 1 if self.value > 0 else -1

    def __float__(self):
        return self.value

    def __sub__(self, other):
        o = other.value if isinstance(other, Approx) else float(other)
        eps = max(self.eps, getattr(other, "eps", 0.0))
        return Approx(self.value - o, eps)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0


Scalar = Union[QSqrt3, Approx]


def to_rational(value) -> Fraction:
    """Parse ints, Fractions, floats and decimal or ``p/q`` strings exactly."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a coordinate")


@dataclass(frozen=True)
class Point:
    x: Fraction | float
    y: Fraction | float
    id: int = -1

    @classmethod
    def of(cls, x, y, id: int = -1) -> "Point":
        return cls(to_rational(x), to_rational(y), id)

    @property
    def xy(self):
        return (self.x, self.y)


def _xy(p):
    if isinstance(p, Point):
        return p.x, p.y
    x, y = p
    if isinstance(x, float) or isinstance(y, float):
        return float(x), float(y)
    return to_rational(x), to_rational(y)


# sin(k*30 deg) doubled, as (a, b) meaning a + b*sqrt(3)
_SIN30_2 = [(0, 0), (1, 0), (0, 1), (2, 0), (0, 1), (1, 0),
            (0, 0), (-1, 0), (0, -1), (-2, 0), (0, -1), (-1, 0)]


def _exact_direction(azimuth_deg: int) -> tuple[QSqrt3, QSqrt3]:
    """Unit vector at ``azimuth_deg`` clockwise from +y (a multiple of 30)."""
    k = (azimuth_deg // 30) % 12
    sa, sb = _SIN30_2[k]
    ca, cb = _SIN30_2[(k + 3) % 12]
    half = Fraction(1, 2)
    return QSqrt3(sa * half, sb * half), QSqrt3(ca * half, cb * half)


class ConeSystem:
    """The ``m`` cones around an apex.

    Cone ``i`` is swept clockwise from boundary ray ``i`` to boundary ray
    ``i + 1``.  Azimuths are measured clockwise from +y: for odd ``m`` the
    bisector of cone 0 points along +y, for even ``m`` +y is its left
    boundary.
    """

    def __init__(self, m: int, exact: bool | None = None):
        if m < 2:
            raise ValueError(f"need at least 2 cones, got m={m}")
        self.m = m
        self.width = 360.0 / m
        self.offset = -self.width / 2 if m % 2 else 0.0
        if exact is None:
            exact = m in EXACT_M
        if exact and m not in EXACT_M:
            raise ValueError(f"exact mode supports m in {sorted(EXACT_M)}, got {m}")
        self.exact = exact

        az = [self.offset + k * self.width for k in range(m)]
        self.azimuths = az
        self.fboundary = [(math.sin(math.radians(a)), math.cos(math.radians(a))) for a in az]
        bis = [self.offset + (i + 0.5) * self.width for i in range(m)]
        self.bisector_azimuths = bis
        self.fbisector = [(math.sin(math.radians(a)), math.cos(math.radians(a))) for a in bis]
        if m in EXACT_M:
            self.boundary = [_exact_direction(int(round(a))) for a in az]
            # doubled integer components (ax, bx, ay, by) for vectorized kernels
            self.boundary2 = [
                (int(2 * bx.a), int(2 * bx.b), int(2 * by.a), int(2 * by.b)) for bx, by in self.boundary
            ]
            self.bisector = [
                _exact_direction(int(round(a))) if float(a).is_integer() and int(round(a)) % 30 == 0 else None
                for a in bis
            ]
        else:
            self.boundary = None
            self.boundary2 = None
            self.bisector = [None] * m

    def __repr__(self):
        return f"ConeSystem(m={self.m}, exact={self.exact})"

    def bounds(self, i: int):
        """(lower, upper) boundary indices of cone ``i`` in clockwise order."""
        return i % self.m, (i + 1) % self.m

    # -- scalar predicates on a displacement (dx, dy) -----------------
    def cross(self, k: int, dx, dy, eps: float = 0.0) -> Scalar:
        """cross(boundary_k, d); negative when d is clockwise of the ray."""
        if self.exact:
            bx, by = self.boundary[k]
            return bx * dy - by * dx
        fx, fy = self.fboundary[k]
        return Approx(fx * float(dy) - fy * float(dx), eps)

    def dot(self, k: int, dx, dy, eps: float = 0.0) -> Scalar:
        if self.exact:
            bx, by = self.boundary[k]
            return bx * dx + by * dy
        fx, fy = self.fboundary[k]
        return Approx(fx * float(dx) + fy * float(dy), eps)

    def index(self, dx, dy, *, lenient: bool = False, eps: float = 0.0) -> int:
        """Cone containing the direction ``(dx, dy)``."""
        if dx == 0 and dy == 0:
            raise IdenticalPoints("direction is zero")
        m = self.m
        signs: list[int | None] = []
        for k in range(m):
            try:
                signs.append(self.cross(k, dx, dy, eps).sign())
            except AmbiguousPredicate:
                signs.append(None)
        # a cone whose two bounding signs are both decided is a certain answer,
        # even if some unrelated boundary line passes through the direction
        for i in range(m):
            lo, hi = self.bounds(i)
            if signs[hi] is not None and signs[lo] is not None and signs[hi] > 0 and signs[lo] < 0:
                return i
        if not lenient:
            if None in signs:
                raise AmbiguousPredicate(f"direction ({dx}, {dy}) is within the float guard band of a cone boundary")
            raise Degenerate(f"direction ({dx}, {dy}) lies on a cone boundary ray")
        signs = [0 if sg is None else sg for sg in signs]
        # half-open cones: ray k belongs to cone k
        for k in range(m):
            if signs[k] == 0 and float(self.dot(k, dx, dy, 0.0)) > 0:
                return k
        raise Degenerate(f"direction ({dx}, {dy}) could not be assigned a cone")

    def contains(self, i: int, dx, dy, eps: float = 0.0) -> bool:
        lo, hi = self.bounds(i)
        return self.cross(hi, dx, dy, eps).sign() > 0 and self.cross(lo, dx, dy, eps).sign() < 0

    def key(self, i: int, dx, dy, eps: float = 0.0) -> Scalar:
        """Positive multiple of the projection onto the bisector of cone ``i``.

        The multiple depends on ``m`` only, so keys of one cone class compare
        exactly like projected distances.
        """
        lo, hi = self.bounds(i)
        if self.exact:
            (lx, ly), (hx, hy) = self.boundary[lo], self.boundary[hi]
            return (hx - lx) * dy - (hy - ly) * dx
        (lx, ly), (hx, hy) = self.fboundary[lo], self.fboundary[hi]
        return Approx((hx - lx) * float(dy) - (hy - ly) * float(dx), eps)

    def projected_distance(self, i: int, dx, dy, eps: float = 0.0) -> Scalar:
        u = self.bisector[i]
        if self.exact and u is not None:
            return u[0] * dx + u[1] * dy
        fx, fy = self.fbisector[i]
        return Approx(fx * float(dx) + fy * float(dy), eps)


@lru_cache(maxsize=64)
def cone_system(m: int, exact: bool | None = None) -> ConeSystem:
    return ConeSystem(m, exact)


@dataclass(frozen=True)
class ConeSpec:
    apex: Point
    index: int
    m: int

    def __post_init__(self):
        if not 0 <= self.index < self.m:
            raise ValueError(f"cone index {self.index} outside [0, {self.m})")

    def contains(self, q, mode: str = "auto") -> bool:
        system, eps = _system_for(self.m, mode, self.apex, q)
        ax, ay = _xy(self.apex)
        qx, qy = _xy(q)
        return system.contains(self.index, qx - ax, qy - ay, eps)


def _system_for(m: int, mode: str, *pts, eps: float | None = None):
    if mode not in ("auto", "exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    floats = any(isinstance(c, float) for p in pts for c in _xy(p))
    exact = mode == "exact" or (mode == "auto" and m in EXACT_M and not floats)
    system = cone_system(m, exact)
    if exact:
        return system, 0.0
    if eps is None:
        xs = [float(_xy(p)[0]) for p in pts]
        ys = [float(_xy(p)[1]) for p in pts]
        eps = FLOAT_EPS * math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    return system, eps


def cone_index(apex, q, m: int, *, mode: str = "auto", lenient: bool = False, eps: float | None = None) -> int:
    """Index of the cone of ``apex`` whose open interior contains ``q``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    ax, ay = _xy(apex)
    qx, qy = _xy(q)
    if ax == qx and ay == qy:
        raise IdenticalPoints("q coincides with the apex")
    system, eps = _system_for(m, mode, apex, q, eps=eps)
    return system.index(qx - ax, qy - ay, lenient=lenient, eps=eps)


def projected_distance(apex, q, cone: int, m: int, *, mode: str = "auto") -> Scalar:
    """Length of the projection of ``q - apex`` onto the bisector of ``cone``.

    Exact whenever the unit bisector lies in Q(sqrt 3) (m in {2, 3, 6});
    otherwise returned as :class:`Approx`.
    """
    ax, ay = _xy(apex)
    qx, qy = _xy(q)
    system, eps = _system_for(m, mode, apex, q)
    if not system.contains(cone, qx - ax, qy - ay, eps):
        raise WrongCone(f"point is not inside cone {cone}")
    return system.projected_distance(cone, qx - ax, qy - ay, eps)


def euclidean_distance_sq(p, q) -> Scalar:
    px, py = _xy(p)
    qx, qy = _xy(q)
    d2 = (qx - px) ** 2 + (qy - py) ** 2
    if isinstance(d2, float):
        return Approx(d2, 0.0)
    return QSqrt3(d2)


def orient(a, b, c) -> int:
    """Sign of the signed area of triangle ``abc`` (positive: counterclockwise)."""
    ax, ay = _xy(a)
    bx, by = _xy(b)
    cx, cy = _xy(c)
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def segments_cross(s1, s2) -> bool:
    """Proper crossing test: a single shared point interior to both segments."""
    p1, q1 = (_xy(p) for p in s1)
    p2, q2 = (_xy(p) for p in s2)
    if p1 == q1 or p2 == q2:
        raise ValueError("segment endpoints must be distinct")
    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    if o1 == o2 == 0:
        # collinear: overlap iff the projections share more than a point
        axis = 0 if p1[0] != q1[0] else 1
        lo1, hi1 = sorted((p1[axis], q1[axis]))
        lo2, hi2 = sorted((p2[axis], q2[axis]))
        if min(hi1, hi2) > max(lo1, lo2):
            raise Overlap(f"collinear segments {s1!r} and {s2!r} overlap")
        return False
    return o1 * o2 < 0 and o3 * o4 < 0


def segment_crosses_cone(s, cone: ConeSpec, *, mode: str = "auto") -> bool:
    """True iff segment ``s`` meets the open interior of ``cone``.

    An endpoint strictly inside the cone counts as crossing.
    """
    apex = cone.apex
    ax, ay = _xy(apex)
    (px, py), (qx, qy) = (_xy(p) for p in s)
    if (px, py) == (ax, ay) or (qx, qy) == (ax, ay):
        raise IdenticalPoints("segment endpoint coincides with the cone apex")
    system, eps = _system_for(cone.m, mode, apex, *s)
    lo, hi = system.bounds(cone.index)

    def st(dx, dy):
        return system.cross(hi, dx, dy, eps).sign(), -system.cross(lo, dx, dy, eps).sign()

    sp, tp = st(px - ax, py - ay)
    sq, tq = st(qx - ax, qy - ay)
    if (sp > 0 and tp > 0) or (sq > 0 and tq > 0):
        return True
    if system.width >= 180:
        return False
    o = orient((ax, ay), (px, py), (qx, qy))
    if sp > 0 and tq > 0:
        return o < 0
    if sq > 0 and tp > 0:
        return o > 0
    return False


def check_arc_enclosure(u, v, x, samples: int = 1000, eps: float = FLOAT_EPS) -> bool:
    """Numeric check that an arc of one circle stays inside another.

    Circle C is centred at ``u`` through ``v``; circle D is centred at ``x``
    (on the line b through ``u`` and ``x``) through ``v``; ``z`` mirrors ``v``
    in b.  Samples the arc of D between ``v`` and ``z`` on the side of b
    facing away from ``x`` relative to ``u`` and checks each sample lies in C
    up to relative tolerance ``eps``.
    """
    if samples < 3:
        raise ValueError("need at least 3 samples")
    ux, uy = (float(c) for c in _xy(u))
    vx, vy = (float(c) for c in _xy(v))
    xx, xy_ = (float(c) for c in _xy(x))
    if (ux, uy) == (xx, xy_):
        return True
    if ux == xx:
        raise DegenerateGeometry("line through u and x is vertical")
    r_c = math.hypot(vx - ux, vy - uy)
    r_d = math.hypot(vx - xx, vy - xy_)
    if r_d == 0:
        raise DegenerateGeometry("v coincides with x")
    # direction of b pointing right (positive x)
    bx, by = xx - ux, xy_ - uy
    if bx < 0:
        bx, by = -bx, -by
    theta_right = math.atan2(by, bx)
    theta_mid = theta_right if xx < ux else theta_right + math.pi
    theta_v = math.atan2(vy - xy_, vx - xx)
    half = (theta_v - theta_mid + math.pi) % (2 * math.pi) - math.pi
    if abs(abs(half) - math.pi) < 1e-15:
        raise DegenerateGeometry("v lies on b on the far side; arc is the whole circle")
    t = np.linspace(-1.0, 1.0, samples)
    ang = theta_mid + t * half
    px = xx + r_d * np.cos(ang)
    py = xy_ + r_d * np.sin(ang)
    dist = np.hypot(px - ux, py - uy)
    return bool(np.all(dist <= r_c * (1 + eps)))


def reflect(v, u, x):
    """Mirror image of ``v`` in the line through ``u`` and ``x`` (floats)."""
    ux, uy = (float(c) for c in _xy(u))
    vx, vy = (float(c) for c in _xy(v))
    xx, xy_ = (float(c) for c in _xy(x))
    dx, dy = xx - ux, xy_ - uy
    n2 = dx * dx + dy * dy
    t = ((vx - ux) * dx + (vy - uy) * dy) / n2
    fx, fy = ux + t * dx, uy + t * dy
    return 2 * fx - vx, 2 * fy - vy


def bounding_diagonal(points: Iterable) -> float:
    pts = [tuple(float(c) for c in _xy(p)) for p in points]
    if not pts:
        return 0.0
    xs, ys = zip(*pts)
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))
