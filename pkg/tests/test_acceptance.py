"""Acceptance gate: the ten release criteria, each reported as one PASS/FAIL line.

The corpus scan (seed 42, 200 instances, Tor bound 8) runs once per session
through the same code path as ``torfib run``; criterion 10 runs it a second
time and compares the JSON reports byte for byte, timing excluded.
"""

import json
import time

import pytest

from torfib.cli import Flags, deterministic_part, dumps, parse, run
from torfib.gradedhyp import verify_dvr_example
from torfib.theorems import BOUND

pytestmark = pytest.mark.slow

SCAN_SCRIPT = "field 5\nscan theorems seed 42 count 200\n"
SCAN_LIMIT_SECONDS = 300


def _scan():
    t = time.perf_counter()
    doc, code = run(parse(SCAN_SCRIPT), Flags(resolution_bound=BOUND))
    return doc, code, time.perf_counter() - t


@pytest.fixture(scope="module")
def scan():
    doc, code, seconds = _scan()
    return {"doc": doc, "code": code, "seconds": seconds, "summary": doc["results"][0]["scan"]}


@pytest.fixture(scope="module")
def dvr():
    t = time.perf_counter()
    rep = verify_dvr_example(12, 10)
    return rep, time.perf_counter() - t


def _counts(summary, name):
    c = summary["checks"][name]
    return c["pass"], c["fail"], c["inapplicable"], c["hits"]


def _clean(summary, names):
    """Every named check ran on every instance and none failed."""
    rows = {n: _counts(summary, n) for n in names}
    ok = all(f == 0 and p + i == summary["count"] for p, f, i, _ in rows.values())
    detail = "; ".join(f"{n}: pass {p}, fail {f}, n/a {i}, hits {h}" for n, (p, f, i, h) in rows.items())
    return ok, detail


def test_criterion_01_dvr_patterns(dvr, criterion):
    rep, seconds = dvr
    tor = rep.detail["tor"]
    ok = (
        tor["S,S"]["dims"] == [1, 0] * 5
        and tor["S,T"]["dims"] == [0, 1] * 5
        and tor["T,T"]["dims"] == tor["S,S"]["dims"]
        and all(c["exact"] and c["minimal"] for c in rep.detail["complexes"].values())
        and seconds < 5
    )
    detail = f"S,S {tor['S,S']['dims']} S,T {tor['S,T']['dims']} T,T {tor['T,T']['dims']} in {seconds:.2f}s"
    criterion(1, "DVR example Tor patterns, exact periodic complexes, < 5 s", ok, detail)


def test_criterion_02_tor4_witness(dvr, criterion):
    w = dvr[0].detail["tor4_witness"]
    ok = w["tor4_SS"] == 0 and len(w["betti_S"]) == 11 and all(w["betti_S"]) and all(w["betti_T"])
    criterion(2, "Tor_4(S,S) = 0 while S and T have no zero Betti number through degree 10", ok, str(w))


def test_criterion_03_balance(scan, criterion):
    s = scan["summary"]
    ok, detail = _clean(s, ["tor_balance"])
    ok = ok and _counts(s, "tor_balance")[0] == s["count"] == 200 and scan["seconds"] < SCAN_LIMIT_SECONDS
    criterion(3, "left- and right-resolved Tor agree on 200 instances, i <= 6, < 5 min", ok, f"{detail}; scan {scan['seconds']:.0f}s")


def test_criterion_04_syzygy_lemma(scan, criterion):
    s = scan["summary"]
    ok, detail = _clean(s, ["syzygy_decomposition"])
    iso = s["iso"]
    ratio = iso["instances_all_isomorphic"] / iso["instances"]
    ok = ok and _counts(s, "syzygy_decomposition")[0] == 200 and ratio >= 0.95 and iso["verdicts"]["not_isomorphic"] == 0
    criterion(4, "syzygy dimension identity on all instances, iso on >= 95%", ok, f"{detail}; iso {iso}")


def test_criterion_05_tor1_formulas(scan, criterion):
    s = scan["summary"]
    names = ["tor1_same_side", "tor1_mixed", "tor1_free_factor", "tor1_freeness", "tor1_free_pair"]
    ok, detail = _clean(s, names)
    ok = ok and all(_counts(s, n)[0] == 200 for n in names[:3])
    criterion(5, "Tor_1 formulas and dim Tor_1(S^a, Z) = a beta_1(Z) match the oracle", ok, detail)


def test_criterion_06_vanishing(scan, criterion):
    s = scan["summary"]
    names = [n for n in s["checks"] if n.startswith("vanishing.")]
    ok, detail = _clean(s, names)
    ok = ok and len(names) == 8 and _counts(s, "vanishing.tor1_factors")[0] == 200
    ok = ok and all(_counts(s, n)[3] > 0 for n in ("vanishing.same_side", "vanishing.even_mixed", "vanishing.odd_mixed"))
    criterion(6, "vanishing contrapositives for nonzero X, Y, Z and Tor_1(S,T) = 0", ok, detail)


def test_criterion_07_dk_split(scan, criterion):
    s = scan["summary"]
    ok, detail = _clean(s, ["dk_split"])
    ok = ok and _counts(s, "dk_split")[0] == 200
    criterion(7, "second syzygy splits as (W cap IF) + (W cap JF) on every module", ok, detail)


def test_criterion_08_pd_rigidity(scan, criterion):
    s = scan["summary"]
    ok, detail = _clean(s, ["pd_rigidity"])
    criterion(8, "finite projective dimension implies free over every fiber product", ok, detail)


def test_criterion_09_higher_theorems(scan, criterion):
    s = scan["summary"]
    names = ["tor4_rigidity", "tor5_alternatives", "tor6_rigidity", "tor6_split_rigidity", "even_odd_rigidity", "torsionless_tor4"]
    ok, detail = _clean(s, names)
    ok = ok and not s["failures"] and s["status"] == "pass" and scan["code"] == 0
    criterion(9, "higher rigidity implications hold on all 200 instances", ok, detail)


def test_criterion_10_determinism(scan, criterion):
    again, code, seconds = _scan()
    a = dumps(deterministic_part(scan["doc"]))
    b = dumps(deterministic_part(again))
    ok = a == b and code == scan["code"] and "timing" in again
    digest = json.loads(a)["results"][0]["scan"]["corpus_digest"]
    criterion(10, "repeated scan gives a byte-identical report (timing excluded)", ok, f"corpus {digest}, {len(a)} bytes, rerun {seconds:.0f}s")
