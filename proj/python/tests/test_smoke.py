import math

import pytest

import gsipy


def test_minimize_on_disk():
    r = gsipy.minimize(["x", "y"], "x^2 + y^2 - 2*x", ineq=["1 - x^2 - y^2"])
    assert r["status"] == "optimal"
    assert r["value"] == pytest.approx(-1.0, abs=1e-6)
    assert len(r["minimizers"]) == 1
    assert r["minimizers"][0] == pytest.approx([1.0, 0.0], abs=1e-3)


def test_corpus_listing():
    ids = gsipy.corpus_ids("sec6")
    assert len(ids) == 10 and "ex6.1" in ids
    with pytest.raises(ValueError):
        gsipy.corpus_ids("nope")
    with pytest.raises(KeyError):
        gsipy.corpus_text("nope")


def test_canonical_round_trip():
    text = gsipy.corpus_text("ex6.1")
    once = gsipy.canonical(text)
    assert gsipy.canonical(once) == once


def test_parse_error_has_position():
    text = gsipy.corpus_text("ex6.1").replace("<= x1 <=", "< x1 <=", 1)
    with pytest.raises(gsipy.ParseError, match="line"):
        gsipy.canonical(text)


def test_run_corpus_instance():
    r = gsipy.run_corpus("ex6.3-case1")
    assert r["verdict"] == "pass"
    assert r["f"] == pytest.approx(-0.5, abs=1e-3)
    assert r["loops"] <= 4


def test_solve_text():
    text = """name: interval
x: x
u: u
objective: -x
X:
  x >= 0
  1 - x >= 0
U:
  u >= 0
  x - u >= 0
g:
  1 - x - u^2 >= 0
"""
    r = gsipy.solve(text)
    assert r["status"] == "optimal"
    # feasible iff 1 - x - x^2 >= 0, so x* is the positive root of x^2 + x - 1
    assert r["f"] == pytest.approx(-(math.sqrt(5) - 1) / 2, abs=1e-4)
