"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test logs one PASS/FAIL line (shown in the terminal summary) before
asserting, so a red criterion still reports what it measured.
"""

import json
import time
import timeit

from lzcgf.cli import main
from lzcgf.seq import SymbolSequence
from lzcgf.sideinfo import joint_incremental_parse
from lzcgf.verify import (suite_achievability, suite_collapse, suite_monotone, suite_oracle, suite_roundtrip,
                          suite_sandwich, suite_universality)

SEED = 20240601


def _log(log, k, title, ok, detail):
    line = f"criterion {k} ({title}): {'PASS' if ok else 'FAIL'}; {detail}"
    log.append(line)
    print(line)
    return ok


def _summary(checks):
    return ", ".join(f"{c.name} [{c.violations}/{c.cases}]" for c in checks)


def test_c1_example_reproduction(criterion_log):
    x, u = SymbolSequence.from_string("010001"), SymbolSequence.from_string("010101")
    jp = joint_incremental_parse(x, u)
    got = (jp.c, jp.c_u, ["".join(map(str, w)) for w in jp.u_phrases], list(jp.counts))
    per_call = min(timeit.repeat(lambda: joint_incremental_parse(x, u), number=100, repeat=5)) / 100
    ok = got == (4, 3, ["0", "1", "01"], [1, 1, 2]) and per_call < 1e-3
    _log(criterion_log, 1, "worked example", ok, f"got c, c(u), u-phrases, c_k = {got}; {per_call * 1e6:.1f} us per call")
    assert got == (4, 3, ["0", "1", "01"], [1, 1, 2])
    assert per_call < 1e-3


def test_c2_thm3_sandwich(criterion_log):
    t = time.perf_counter()
    checks = suite_sandwich(SEED, 500, [100, 1000, 10000], [2, 3, 4])
    dt = time.perf_counter() - t
    lo = next(c for c in checks if c.name.startswith("thm2_lower_bound"))
    up = next(c for c in checks if c.name.startswith("exp_sum <= thm3"))
    ok = lo.holds and up.holds and lo.cases == up.cases == 500 * 5 and dt < 60
    _log(criterion_log, 2, "thm3 sandwich", ok, f"{_summary([lo, up])}; {dt:.1f} s")
    assert lo.cases == up.cases == 2500
    assert lo.holds and up.holds
    assert dt < 60


def test_c3_encoder_universality(criterion_log):
    t = time.perf_counter()
    checks = suite_universality(SEED, n_sequences=50, max_states=2, max_output_len=2, depth=8, ells=(2, 4, 8))
    dt = time.perf_counter() - t
    ok = all(c.holds and c.cases > 0 for c in checks) and dt < 600
    _log(criterion_log, 3, "encoder universality", ok, f"{_summary(checks)}; {dt:.1f} s")
    assert all(c.cases > 0 for c in checks)
    assert all(c.holds for c in checks), [c.failures for c in checks]
    assert dt < 600


def test_c4_achievability_and_kraft(criterion_log):
    checks = suite_achievability(SEED, 300)
    ok = all(c.holds and c.cases > 0 for c in checks)
    _log(criterion_log, 4, "tilted-block achievability and Kraft", ok, _summary(checks))
    assert ok, [c.failures for c in checks]


def test_c5_lambda_to_zero(criterion_log):
    checks = suite_collapse(SEED, 100, lam=1e-4, tol=1e-3)
    worst = max(c.worst["lhs"] for c in checks)
    ok = all(c.holds and c.cases == 100 for c in checks)
    _log(criterion_log, 5, "lambda -> 0 collapses", ok, f"{_summary(checks)}; largest gap {worst:.2e}")
    assert ok, [c.failures for c in checks]


def test_c6_round_trips(criterion_log):
    checks = suite_roundtrip(SEED, 1000, 200, 200, max_n=1000)
    ok = [c.cases for c in checks] == [1000, 200, 200] and all(c.holds for c in checks)
    _log(criterion_log, 6, "codec round trips", ok, _summary(checks))
    assert [c.cases for c in checks] == [1000, 200, 200]
    assert all(c.holds for c in checks), [c.failures for c in checks]


def test_c7_greedy_vs_brute_force(criterion_log):
    t = time.perf_counter()
    valid, dominates, agree = suite_oracle(12)
    dt = time.perf_counter() - t
    ok = valid.holds and dominates.holds and agree.holds and agree.cases == 2 ** 13 - 2 and dt < 300
    examples = "; ".join(f"{f['x']}: greedy {f['greedy']} vs max {f['brute']}" for f in agree.failures)
    _log(criterion_log, 7, "greedy vs exhaustive max-distinct", ok,
         f"{agree.violations} of {agree.cases} strings disagree (e.g. {examples}); "
         f"brute force valid on all: {valid.holds}; greedy never above max: {dominates.holds}; {dt:.1f} s")
    assert valid.holds and dominates.holds
    assert dt < 300
    assert agree.holds, f"{agree.violations} discrepancies, first: {agree.failures}"


def test_c8_monotonicity_and_jensen(criterion_log):
    checks = suite_monotone(SEED, 300)
    ok = all(c.holds and c.cases > 0 for c in checks)
    _log(criterion_log, 8, "monotonicity and Jensen", ok, _summary(checks))
    assert ok, [c.failures for c in checks]


def test_c9_verify_determinism(criterion_log, tmp_path, capsys):
    outs = [tmp_path / f"verify{i}.json" for i in range(2)]
    codes = [main(["verify", "--seed", str(SEED), "--trials", "20", "--out", str(p)]) for p in outs]
    capsys.readouterr()
    a, b = (p.read_bytes() for p in outs)
    rep = json.loads(a)
    ok = a == b and codes == [0, 0] and rep["config"]["seed"] == SEED
    _log(criterion_log, 9, "verify determinism", ok,
         f"exit codes {codes}; {len(rep['checks'])} checks; reports identical: {a == b} ({len(a)} bytes)")
    assert codes == [0, 0]
    assert a == b
