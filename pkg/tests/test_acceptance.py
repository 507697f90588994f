"""Acceptance criteria 1-9; each prints one pass/fail line (also shown in the terminal summary)."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import acceptance_reports as ar

pytestmark = pytest.mark.acceptance


@pytest.fixture
def record(acceptance_log):
    def emit(n, title, ok, detail, seconds):
        line = f"criterion {n} {title}: {'PASS' if ok else 'FAIL'} | {detail} | {seconds:.1f}s"
        print(line)
        acceptance_log.append(line)

    return emit


def radii(rep):
    return " ".join(f"r{k[7:]}x{v}" for k, v in sorted(rep.counters.items()) if k.startswith("radius_"))


def test_criterion_1_membership_vs_oracle(record):
    rep, secs = ar.timed("1", ar.BUILDERS["1"])
    c = rep.counters
    ok = rep.ok and c["trials"] == 100 and c["mismatches"] == 0 and secs < 60
    record(1, "membership vs oracle", ok, f"{c['trials']} subgroups, {c['words_checked']} words, {c['mismatches']} mismatches, trusted radii {radii(rep)}", secs)
    assert ok, rep.text()


def test_criterion_2_intersection_vs_oracle(record):
    rep, secs = ar.timed("2", ar.BUILDERS["2"])
    c = rep.counters
    ok = rep.ok and c["trials"] == 100 and c["mismatches"] == 0 and secs < 120
    detail = f"{c['trials']} pairs ({c.get('nontrivial', 0)} nontrivial), {c['words_checked']} words, {c['mismatches']} mismatches, trusted radii {radii(rep)}"
    record(2, "intersection vs oracle", ok, detail, secs)
    assert ok, rep.text()


def test_criterion_3_reduction_terminates(record):
    (rep, _), secs = ar.timed("3+4", ar.BUILDERS["3+4"])
    c = rep.counters
    ok = rep.ok and c["trials"] == 100 and c["ok"] == 100 and c["blowups"] > 0
    detail = f"{c['ok']}/{c['trials']} reduced with max valence <= 3, {c['blowups']} blowups all decreasing, balance at {c['tree_blowups']} tree blowups"
    record(3, "reduction termination and measure", ok, detail, secs)
    assert ok, rep.text()


def test_criterion_4_move_invariants(record):
    (_, inv), secs = ar.timed("3+4", ar.BUILDERS["3+4"])
    c = inv.counters
    moves = " ".join(f"{k[6:]}x{v}" for k, v in sorted(c.items()) if k.startswith("moves_"))
    ok = inv.ok and c["violations"] == 0 and c["checks"] > 0
    record(4, "move invariants", ok, f"{c['checks']} checks over moves {moves}, {c['violations']} violations", secs)
    assert ok, inv.text()


def test_criterion_5_identity(record):
    reps, secs = ar.timed("5+7", ar.BUILDERS["5+7"])
    qualifying = sum(r.counters["qualifying"] for r in reps)
    fails = sum(r.counters["identity_fail"] for r in reps)
    excluded = {}
    for r in reps:
        for k, v in r.counters.items():
            if k.startswith("excluded_"):
                excluded[k[9:]] = excluded.get(k[9:], 0) + v
    ok = qualifying >= 50 and fails == 0 and all(r.ok for r in reps) and secs < 120
    ex = " ".join(f"{k}={v}" for k, v in sorted(excluded.items())) or "none"
    record(5, "identity on trivalent terminal states", ok, f"{qualifying} instances, {fails} failures, excluded {ex}", secs)
    assert ok, "".join(r.text() for r in reps)


def test_criterion_6_culler_shalen(record):
    rep, secs = ar.timed("6", ar.BUILDERS["6"])
    c = rep.counters
    ok = rep.ok and c["rank_le_1"] == 30 and c["census_ok"] == 30
    record(6, "rank-2 pairs with rank-3 join", ok, f"rank(M) <= 1 in {c['rank_le_1']}/30, census {c['census_ok']}/30", secs)
    assert ok, rep.text()


def test_criterion_7_inequality(record):
    reps, secs = ar.timed("5+7", ar.BUILDERS["5+7"])
    n = sum(r.counters["qualifying"] for r in reps)
    bad = sum(r.counters["shnc_violations"] for r in reps)
    ok = n >= 50 and bad == 0
    record(7, "inequality sweep", ok, f"{n} instances, {bad} violations", secs)
    assert ok, "\n".join(f for r in reps for f in r.failures)


def test_criterion_8_bigons(record):
    rep, secs = ar.timed("8", ar.BUILDERS["8"])
    c = rep.counters
    ok = rep.ok and c.get("ok") == 20 and c.get("case_same") == 10 and c.get("case_distinct") == 10
    record(8, "bigon resolution", ok, f"{c.get('ok', 0)}/20 resolved ({c.get('case_same', 0)} same, {c.get('case_distinct', 0)} distinct component)", secs)
    assert ok, rep.text()


def test_criterion_9_determinism(record):
    first = ar.all_digests()
    env = dict(os.environ, PYTHONHASHSEED="12345")
    here = Path(__file__).parent
    import time

    t0 = time.perf_counter()
    out = subprocess.run(
        [sys.executable, str(here / "acceptance_reports.py")], capture_output=True, text=True, env=env, cwd=here, check=True
    )
    secs = time.perf_counter() - t0
    second = json.loads(out.stdout)
    differ = sorted(k for k in first if first[k] != second.get(k))
    ok = not differ
    detail = f"{len(first)} report groups rerun in a fresh process with another hash seed, differing: {','.join(differ) or 'none'}"
    record(9, "determinism", ok, detail, secs)
    assert ok
