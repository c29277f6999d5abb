"""JSON point-set documents with exact coordinates.

Canonical form::

    {
      "version": 1,
      "m": 3,
      "flavor": "theta",
      "mode": "exact",
      "points": [
        [0, 0, "a"],
        ["0.1", "1/3", "b"]
      ]
    }

Integers are JSON integers; other rationals are strings, written as a finite
decimal when one exists and as ``p/q`` otherwise.  Labels are optional but
all-or-none.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .cone_graph import FLAVORS, THETA, PointSet, general_position_violations
from .errors import Degenerate, DuplicatePoint, ParseError
from .exact_geom import to_rational

VERSION = 1
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$|^[+-]?\d+/\d+$")


@dataclass(frozen=True)
class Document:
    points: PointSet
    m: int = 3
    flavor: str = THETA
    mode: str = "exact"
    version: int = VERSION


def format_coordinate(v) -> int | str:
    if isinstance(v, float):
        return repr(v)
    v = Fraction(v)
    if v.denominator == 1:
        return v.numerator
    d = v.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{v.numerator}/{v.denominator}"
    places = max(twos, fives)
    digits = v.numerator * 10**places // v.denominator
    text = str(Decimal(digits).scaleb(-places))
    assert Fraction(text) == v
    return text


def serialize(doc: Document) -> str:
    ps = doc.points
    rows = []
    for p in ps:
        row = [format_coordinate(p.x), format_coordinate(p.y)]
        if ps.labels:
            row.append(ps.labels[p.id])
        rows.append("    " + json.dumps(row))
    head = [
        "{",
        f'  "version": {doc.version},',
        f'  "m": {doc.m},',
        f'  "flavor": {json.dumps(doc.flavor)},',
        f'  "mode": {json.dumps(doc.mode)},',
    ]
    if rows:
        body = ['  "points": ['] + [r + "," for r in rows[:-1]] + [rows[-1], "  ]"]
    else:
        body = ['  "points": []']
    return "\n".join(head + body + ["}"]) + "\n"


def _point_line(text: str, k: int) -> int | None:
    lines = text.splitlines()
    for no, line in enumerate(lines, 1):
        if '"points"' in line:
            return no + 1 + k if no + 1 + k <= len(lines) else no
    return None


def _coordinate(value, mode: str, field: str, line):
    if isinstance(value, bool) or not isinstance(value, (int, str, float)):
        raise ParseError(f"{field}: expected a number or numeric string, got {value!r}", line=line, field=field)
    if isinstance(value, float):
        if mode == "exact":
            raise ParseError(f"{field}: bare JSON floats are not exact; quote the decimal", line=line, field=field)
        return value
    if isinstance(value, str) and not _NUMBER.match(value.strip()):
        raise ParseError(f"{field}: {value!r} is not a decimal or p/q rational", line=line, field=field)
    try:
        r = to_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{field}: {exc}", line=line, field=field) from None
    return float(r) if mode == "float" else r


def parse(text: str, *, validate: bool = False) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise ParseError("document must be a JSON object", line=1)
    version = raw.get("version", VERSION)
    if version != VERSION:
        raise ParseError(f"unsupported version {version!r}", field="version")
    m = raw.get("m", 3)
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ParseError(f"m must be a positive integer, got {m!r}", field="m")
    flavor = raw.get("flavor", THETA)
    if flavor not in FLAVORS:
        raise ParseError(f"flavor must be one of {FLAVORS}, got {flavor!r}", field="flavor")
    mode = raw.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise ParseError(f"mode must be exact or float, got {mode!r}", field="mode")
    pts = raw.get("points")
    if not isinstance(pts, list):
        raise ParseError("points must be an array", field="points")
    coords, labels = [], []
    for k, row in enumerate(pts):
        line = _point_line(text, k)
        name = f"points[{k}]"
        if not isinstance(row, list) or len(row) not in (2, 3):
            raise ParseError(f"{name}: expected [x, y] or [x, y, label]", line=line, field=name)
        coords.append((_coordinate(row[0], mode, name + "[0]", line), _coordinate(row[1], mode, name + "[1]", line)))
        if len(row) == 3:
            if not isinstance(row[2], str):
                raise ParseError(f"{name}: label must be a string", line=line, field=name + "[2]")
            labels.append(row[2])
    if labels and len(labels) != len(coords):
        raise ParseError("either every point has a label or none does", field="points")
    if len(set(labels)) != len(labels):
        raise ParseError("labels must be unique", field="points")
    ps = PointSet(coords, labels or None, mode)  # DuplicatePoint propagates
    if validate:
        bad = general_position_violations(ps, m)
        if bad:
            p, q, why = bad[0]
            raise Degenerate(f"points {ps.label(p)} and {ps.label(q)} violate general position ({why})", pair=(p, q))
    return Document(ps, m, flavor, mode, version)


def load(path, *, validate: bool = False) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), validate=validate)


def dump(doc: Document, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(doc))


__all__ = ["Document", "DuplicatePoint", "dump", "format_coordinate", "load", "parse", "serialize"]
