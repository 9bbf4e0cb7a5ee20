"""Acceptance suite: one test, and one printed PASS/FAIL line, per criterion.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
"""
import os
import sys
import time

import pytest

from twgklo import poisson as P
from twgklo import relations as RL
from twgklo.gklo import MUTATIONS, build_shape
from twgklo.relcheck import EXPECTED_FAILURE, negative_control, run_suite, semiclassical_suite

JOBS = os.cpu_count() or 1
MATRIX = [
    (2, [2], [0]), (2, [4], [0]), (2, [2], [2]), (3, [1, 1], [0, 0]),
    (3, [2, 2], [0, 0]), (3, [2, 2], [1, 1]), (4, [1, 0, 1], [0, 0, 0]),
]
UNSHIFTED = [s for s in MATRIX if not any(s[2])]
AUX = ["aux-five", "aux-reformulated", "aux-mixed3", "aux-xxxST"]

RESULTS = {}


def announce(k, ok, title, detail, seconds):
    line = "ACCEPTANCE %d %s  %s (%s; %.1fs)" % (k, "PASS" if ok else "FAIL", title, detail, seconds)
    RESULTS[k] = line
    sys.__stdout__.write("\n" + line + "\n")
    sys.__stdout__.flush()


def shapes(rows):
    return [build_shape(n, lam, mu) for n, lam, mu in rows]


def families_ok(reps):
    bad = [(r.shape, r.relation, r.note) for r in reps if not r.passed]
    cases = sum(len(r.cases) for r in reps)
    return not bad, cases, bad


def test_criterion_1_gklo_homomorphism():
    t0 = time.perf_counter()
    reps = []
    for S in shapes(MATRIX):
        reps += run_suite(S, list(RL.DEFINING), jobs=JOBS)
    ok, cases, bad = families_ok(reps)
    ok = ok and len(reps) == 7 * len(MATRIX)
    announce(1, ok, "defining relations on the 7-shape matrix",
             "%d families, %d exact cases" % (len(reps), cases), time.perf_counter() - t0)
    assert ok, bad


def test_criterion_2_auxiliary_lemmas():
    t0 = time.perf_counter()
    reps = []
    for S in shapes(MATRIX):
        reps += run_suite(S, AUX, jobs=1)
    ok, cases, bad = families_ok(reps)
    names = {c.relation for r in reps for c in r.cases}
    announce(2, ok, "auxiliary operator lemmas",
             "%d distinct identities, %d cases" % (len(names), cases), time.perf_counter() - t0)
    assert ok, bad


def test_criterion_3_kernel():
    t0 = time.perf_counter()
    reps = []
    for S in shapes(UNSHIFTED):
        reps += run_suite(S, ["kernel"], jobs=1)
    ok, cases, bad = families_ok(reps)
    tops = [c for r in reps for c in r.cases if c.relation == "kernel-A-top"]
    ok = ok and all(c.passed and c.note.startswith("witness") for c in tops)
    announce(3, ok, "kernel vanishing and nonzero top A-mode",
             "%d shapes, %d cases" % (len(UNSHIFTED), cases), time.perf_counter() - t0)
    assert ok, bad


def test_criterion_4_abcd():
    t0 = time.perf_counter()
    rows = [s for s in UNSHIFTED if s[0] in (2, 3)]
    reps = []
    for S in shapes(rows):
        reps += run_suite(S, ["abcd-subset"], jobs=1)
    ok, cases, bad = families_ok(reps)
    announce(4, ok, "ABCD relations without D", "n=2,3, %d cases" % cases, time.perf_counter() - t0)
    assert ok, bad


def test_criterion_5_centrality():
    t0 = time.perf_counter()
    rows = [s for s in UNSHIFTED if s[0] in (2, 3)]
    reps = []
    for S in shapes(rows):
        reps += run_suite(S, ["central"], jobs=1)
    ok, cases, bad = families_ok(reps)
    announce(5, ok, "c(u) commutes with b_j(v), h_j(v)", "n=2,3, %d cases" % cases,
             time.perf_counter() - t0)
    assert ok, bad


def test_criterion_6_poisson_engine():
    t0 = time.perf_counter()
    reps = [
        P.check_identity("rtt-poisson", 2, 6),
        P.check_identity("rtt-poisson", 3, 4),
        P.check_identity("desnanot-jacobi", 3, 4),
        P.check_identity("desnanot-jacobi", 4, 4),
        P.check_identity("jacobi", 2, 5),
        P.check_ideal_identities(3, 5, (2, 4)),
    ]
    ok = all(r.passed for r in reps)
    verbatim = [c for c in reps[-1].cases if c.relation in ("ideal-1", "ideal-2")]
    ok = ok and bool(verbatim) and all(c.status == "pass" for c in verbatim) \
        and {c.indices[0] for c in verbatim} == {2, 4}
    detail = ", ".join("%s %s: %d" % (r.relation, r.shape, len(r.cases)) for r in reps)
    announce(6, ok, "RTT, Desnanot-Jacobi, Jacobi, ideal brackets", detail, time.perf_counter() - t0)
    assert ok, [(r.relation, r.shape, r.witness) for r in reps if not r.passed]


def test_criterion_7_semiclassical():
    t0 = time.perf_counter()
    reps = [semiclassical_suite(S, count=50) for S in shapes(MATRIX)]
    ok = all(r.passed and len(r.cases) >= 50 for r in reps)
    announce(7, ok, "semiclassical limit", "%d shapes x >= 50 pairs" % len(reps), time.perf_counter() - t0)
    assert ok, [(r.shape, r.witness) for r in reps if not r.passed]


def test_criterion_8_negative_controls():
    t0 = time.perf_counter()
    S = build_shape(2, [2])
    reps = [negative_control(S, m) for m in MUTATIONS]
    ok = all(r.status == "expected-fail" and EXPECTED_FAILURE[m] + "[" in r.note
             for m, r in zip(MUTATIONS, reps))
    # the unmutated images must pass the same relations, so the controls are not vacuous
    clean = run_suite(S, list(RL.DEFINING))
    ok = ok and all(r.passed for r in clean)
    announce(8, ok, "mutations break b-b-same", "; ".join("%s: %s" % (m, r.note) for m, r in zip(MUTATIONS, reps)),
             time.perf_counter() - t0)
    assert ok


def test_criterion_9_conjecture_evidence():
    t0 = time.perf_counter()
    ev = P.conjecture_evidence(2, 6, [2])
    ok = ev["degree"] == 3 and ev["dim_without_B"] == 0 and ev["dim_with_B"] >= 1
    announce(9, ok, "ideal closure at n=2, N=6, r1=2",
             "degree 3: dim %d without B, %d with B" % (ev["dim_without_B"], ev["dim_with_B"]),
             time.perf_counter() - t0)
    assert ok, ev


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
