from __future__ import annotations

import io
import json
import re
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetagraph import Degenerate, DuplicatePoint, ParseError, PointSet, build, theta_route
from thetagraph.cli import main
from thetagraph.document import Document, parse, serialize
from thetagraph.render import render_svg

TRIO_DOC = """{
  "version": 1,
  "m": 3,
  "flavor": "theta",
  "mode": "exact",
  "points": [
    [0, 0, "a"],
    [10, 1, "b"],
    [6, -20, "c"]
  ]
}
"""


@pytest.fixture
def trio_file(tmp_path):
    p = tmp_path / "trio.json"
    p.write_text(TRIO_DOC)
    return str(p)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


# --- documents ---------------------------------------------------------

def test_canonical_round_trip_is_byte_identical():
    assert serialize(parse(TRIO_DOC)) == TRIO_DOC


def test_decimal_strings_are_exact():
    doc = parse('{"points": [["0.1", "1/3"], ["-2.50", "7"]]}')
    assert doc.points[0].xy == (Fraction(1, 10), Fraction(1, 3))
    assert doc.points[1].x == Fraction(-5, 2)
    assert serialize(parse(serialize(doc))) == serialize(doc)


def test_duplicates_and_malformed_input():
    with pytest.raises(DuplicatePoint):
        parse('{"points": [[1, 2], ["1.0", 2]]}')
    with pytest.raises(ParseError) as info:
        parse('{\n  "points": [\n    [0, 0],\n    [1, "one"]\n  ]\n}')
    assert info.value.line == 4 and info.value.field == "points[1][1]"
    with pytest.raises(ParseError) as info:
        parse('{"points": [0, 0]')
    assert info.value.line == 1
    with pytest.raises(ParseError):
        parse('{"points": [[0.5, 1]]}')  # bare floats would not be exact
    with pytest.raises(ParseError):
        parse('{"flavor": "delaunay", "points": []}')


def test_optional_validation():
    text = '{"points": [[0, 0], [0, 5]]}'
    assert len(parse(text).points) == 2
    with pytest.raises(Degenerate):
        parse(text, validate=True)


fracs = st.fractions(max_denominator=1000).filter(lambda f: abs(f) < 10**9)


@given(st.lists(st.tuples(fracs, fracs), max_size=12, unique=True), st.integers(2, 12), st.sampled_from(["theta", "yao"]))
@settings(max_examples=200)
def test_round_trip_property(coords, m, flavor):
    doc = Document(PointSet(coords), m, flavor)
    text = serialize(doc)
    back = parse(text)
    assert back.points == doc.points and back.m == m and back.flavor == flavor
    assert serialize(back) == text


# --- rendering ---------------------------------------------------------

def test_render_empty_set_has_only_frame():
    svg = render_svg(PointSet([]))
    assert svg.startswith(b"<?xml")
    assert b"<svg" in svg
    assert not re.search(rb'id="(vertex|edge)-', svg)


def test_render_is_deterministic_and_counts_elements():
    g = build(PointSet([(0, 0), (10, 1), (6, -20)], ["a", "b", "c"]), 3)
    route = theta_route(g, 0, 2)
    svg = render_svg(g, [route])
    assert svg == render_svg(g, [route])
    assert len(re.findall(rb'id="vertex-\d+"', svg)) == 3
    assert len(re.findall(rb'id="edge-\d+-\d+"', svg)) == 2
    assert len(re.findall(rb'id="overlay-route-\d+"', svg)) == 1


# --- commands ----------------------------------------------------------

def test_components_command(trio_file):
    code, out = run("components", trio_file)
    assert code == 0 and out.splitlines()[0] == "1 component"
    code, out = run("components", trio_file, "--directed")
    assert code == 0 and out.splitlines()[0] == "2 SCCs"


def test_route_command_cycles(trio_file):
    code, out = run("route", trio_file, "--from", "a", "--to", "c")
    assert code == 3
    assert out.splitlines() == ["a,b,a", "Cycled"]
    code, out = run("route", trio_file, "--from", "c", "--to", "a")
    assert code == 0 and out.splitlines()[0] == "c,a"


def test_build_sinks_path_barrier(trio_file):
    code, out = run("build", trio_file, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["edges"] == [["a", "b"], ["a", "c"]]
    code, out = run("build", trio_file, "--sweep")
    assert code == 0 and "c -> a cone 0" in out
    code, out = run("sinks", trio_file)
    assert out.splitlines()[0] == "0-sinks: a b"
    code, out = run("path", trio_file, "--from", "c", "--class", "0")
    assert out.strip() == "c,a"
    code, out = run("barrier", trio_file, "--from", "c", "--class", "0")
    assert code == 0 and "a OnBarrier" in out


def test_audit_and_fuzz(trio_file, tmp_path):
    rep = tmp_path / "rep"
    code, out = run("audit", trio_file, "--report-dir", str(rep))
    assert code == 0 and "FAIL" not in out
    assert (rep / "audit.csv").read_text().startswith("property,trials,failures")
    assert (rep / "theta.svg").exists()
    code, out = run("fuzz", "--property", "theta3-connected", "--trials", "100", "--seed", "1",
                    "--report-dir", str(rep))
    assert code == 0
    assert json.loads(out)[0]["failures"] == 0
    assert (rep / "fuzz.csv").exists() and (rep / "fuzz.svg").exists()


def test_render_command(trio_file, tmp_path):
    out_svg = tmp_path / "f.svg"
    code, _ = run("render", trio_file, "--out", str(out_svg), "--overlay", "route", "--from", "a", "--to", "c",
                  "--cone", "a:0", "--sinks", "0")
    assert code == 0
    svg = out_svg.read_bytes()
    assert b'id="cone-0-0"' in svg and b'id="sink-0-0"' in svg


def test_exit_codes(tmp_path, trio_file, capsys):
    deg = tmp_path / "deg.json"
    deg.write_text('{"points": [[0, 0], [0, 5]]}')
    code, _ = run("build", str(deg))
    assert code == 4
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "Degenerate" and sorted(err["pair"]) == [0, 1]
    dup = tmp_path / "dup.json"
    dup.write_text('{"points": [[0, 0], [0, 0]]}')
    assert run("build", str(dup))[0] == 2
    assert run("route", trio_file, "--from", "a", "--to", "nowhere")[0] == 2
    assert run("fuzz", "--property", "nonsense", "--seed", "1")[0] == 2
    with pytest.raises(SystemExit) as info:
        run("build")
    assert info.value.code == 2
