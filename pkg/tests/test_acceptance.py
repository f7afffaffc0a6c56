"""Acceptance criteria, one PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) for the report alone, or
through pytest, which prints the same lines in its terminal summary.  Two
items are known to be unattainable as literally stated; their tests are
strict xfails so they stay visible.
"""

import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from groupoid_galois import catalog  # noqa: E402
from groupoid_galois.algebra import BaseRing, bracket_parse  # noqa: E402
from groupoid_galois.constructions import orthogonalize  # noqa: E402
from groupoid_galois.correspondence import (  # noqa: E402
    is_strongly_galois,
    render_table,
    run_global_correspondence,
    run_strong_correspondence,
)
from groupoid_galois.galois import GaloisCoordinates, is_galois, verify_coordinates  # noqa: E402
from groupoid_galois.groupoid import cyclic_group, enumerate_wide_subgroupoids, generated_wide_subgroupoid  # noqa: E402
from groupoid_galois.properties import (  # noqa: E402
    FuzzConfig,
    instance,
    run_check,
    separable_and_strong,
)
from s8_rows import ROWS  # noqa: E402

GOLDEN = Path(__file__).parent / "golden" / "s8_strong.txt"
RESULTS = []


def report(key, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {key}: {detail}"
    if line not in RESULTS:
        RESULTS.append(line)
    return ok


def sweep(checks, need, cfg, seed0, limit):
    """Run ``checks`` on consecutive seeds until each has run ``need`` times."""
    stats = {c: {"ran": 0, "skipped": 0, "failed": 0} for c in checks}
    failures = []
    seed = seed0
    while min(s["ran"] for s in stats.values()) < need and seed < seed0 + limit:
        a = instance(seed, cfg)
        for c in checks:
            if stats[c]["ran"] >= need:
                continue
            status, detail = run_check(c, a, seed)
            stats[c][status] += 1
            if status == "failed":
                stats[c]["ran"] += 1
                failures.append((seed, c, detail))
        seed += 1
    return stats, failures


# -- 1. S8 reproduction ---------------------------------------------------------

@lru_cache(maxsize=None)
def s8_run():
    t0 = time.perf_counter()
    a = catalog.s8_example()
    W = enumerate_wide_subgroupoids(a.groupoid)
    table = run_strong_correspondence(a)
    text = render_table(table)
    return a, W, table, text, time.perf_counter() - t0


@pytest.mark.xfail(strict=True, reason="36 wide subgroupoids exist; the published table omits 3 connected ones")
def test_c1_count_33():
    _, W, *_ = s8_run()
    ok = report("1a wide subgroupoids of A2 x V4 = 33", len(W) == 33, f"enumerated {len(W)}")
    assert ok


def test_c1_rows():
    a, _, table, _, _ = s8_run()
    fwd = table.forward()
    bad = [g for g, br in ROWS if fwd[generated_wide_subgroupoid(a.groupoid, g)] != bracket_parse(br, a.algebra)]
    distinct = len({generated_wide_subgroupoid(a.groupoid, g) for g, _ in ROWS})
    ok = not bad and distinct == 33
    report("1b all 33 published rows reproduced", ok, f"{33 - len(bad)}/33 match, {distinct} distinct")
    assert ok


def test_c1_golden_and_time():
    *_, text, secs = s8_run()
    again = render_table(run_strong_correspondence(catalog.s8_example()))
    ok = text == GOLDEN.read_text(encoding="utf-8") == again and secs < 10
    report("1c golden file byte-stable, runtime < 10 s", ok, f"{secs:.2f} s")
    assert ok


# -- 2. the small global action ---------------------------------------------------

def test_c2():
    beta = catalog.non_galois_global()
    res = is_galois(beta)
    obs = None if res else (beta.groupoid.names[res.obstruction[0]], res.obstruction[1] + 1)
    eps = orthogonalize(beta).action
    E = eps.algebra
    four = GaloisCoordinates.diagonal([E.e(0), E.e(1), E.e(2), E.e(3)])
    ok = obs == ("g", 2) and bool(is_galois(eps)) and verify_coordinates(eps, four)
    report("2 beta not Galois at (g, 2); eps Galois; 4-pair system exact", ok,
           f"obstruction {obs}, eps Galois {bool(is_galois(eps))}")
    assert ok


# -- 3. two copies of Z2 ------------------------------------------------------------

def test_c3():
    beta = catalog.not_strongly_galois()
    res = is_galois(beta)
    diag = res and [tuple(x.coeffs) for x, y in res.witness.pairs] == [(1, 0), (0, 1)] and \
        all(x == y for x, y in res.witness.pairs)
    rep = is_strongly_galois(beta)
    pair = [sorted(H.names) for H in rep.pair] if rep.pair else None
    rows = [(r.subgroupoid.label(), r.subalgebra.to_json()) for r in run_global_correspondence(beta).rows]
    ok = bool(diag) and not rep and pair == [["f1", "f2", "g"], ["f1", "f2", "h"]] and \
        rows == [("𝒢₀", [[1], [2]]), ("𝒢", [[1, 2]])]
    report("3 Galois with e_i, not strongly Galois, 2 global rows", ok, f"pair {pair}, rows {rows}")
    assert ok


# -- 4. oracle equivalences -----------------------------------------------------------

def test_c4_abc():
    checks = ("galois_gram", "invariants_kernel", "alpha_strong_oracle")
    stats, failures = sweep(checks, 500, FuzzConfig(max_m=8, max_morphisms=16), 40000, 600)
    ok = not failures and all(s["ran"] >= 500 for s in stats.values())
    report("4abc Galois/Gram, invariants/kernel, strength/exhaustive", ok,
           ", ".join(f"{c} {s['ran']} ran {s['failed']} failed" for c, s in stats.items()))
    assert ok, failures[:3]


def test_c4_d():
    stats, failures = sweep(("wide_enumeration_brute_force",), 500,
                            FuzzConfig(max_m=8, max_morphisms=10), 50000, 2000)
    s = stats["wide_enumeration_brute_force"]
    ok = not failures and s["ran"] >= 500
    report("4d enumeration = brute force (|G| <= 10)", ok, f"{s['ran']} ran, {s['failed']} failed")
    assert ok, failures[:3]


# -- 5. property suites ------------------------------------------------------------------

SUITES = {
    "inverse_domains": {},
    "orthogonal_galois_iff_globalization": {"orthogonal": True},
    "orthogonalization_keeps_galois": {"free": True},
    "globalization_keeps_galois": {"free": True},
    "trace_of_invariants": {},
    "galois_implies_separable_strong": {},
    "galois_iff_separable_strong_faithful": {},
    "orthogonal_roundtrip": {"orthogonal": True, "free": True},
    "strong_roundtrip": {"free": True},
    "global_roundtrip": {"global_": True, "free": True},
    "join_keeps_invariants": {"global_": True},
}


@pytest.mark.parametrize("name", list(SUITES))
def test_c5(name):
    cfg = FuzzConfig(max_m=8, max_morphisms=16, **SUITES[name])
    stats, failures = sweep((name,), 200, cfg, 60000, 1500)
    s = stats[name]
    ok = not failures and s["ran"] >= 200
    report(f"5 {name}", ok, f"{s['ran']} ran, {s['skipped']} skipped, {s['failed']} failed")
    assert ok, failures[:3]


def literal_converse_counterexamples():
    found = []
    z2 = catalog.trivial_action(cyclic_group(2), 1)
    if separable_and_strong(z2) != bool(is_galois(z2)):
        found.append("trivial Z2 action on R")
    cfg = FuzzConfig(max_m=8, max_morphisms=16)
    for seed in range(61000, 61200):
        a = instance(seed, cfg)
        if separable_and_strong(a) != bool(is_galois(a)):
            found.append(f"seed {seed}")
    return found


@pytest.mark.xfail(strict=True, reason="the literal converse ignores non-identities acting trivially on A")
def test_c5_separable_strong_literal_converse():
    found = literal_converse_counterexamples()
    report("5 galois iff separable and strong (literal)", not found,
           f"{len(found)} counterexamples, first: {found[:2]}")
    assert not found


# -- 6. globalization contract -------------------------------------------------------------

def test_c6():
    stats, failures = sweep(("globalize_contract", "globalize_fixed_point"), 500,
                            FuzzConfig(max_m=8, max_morphisms=16, global_=None), 70000, 500)
    stats2, failures2 = sweep(("globalize_fixed_point",), 200,
                              FuzzConfig(max_m=8, max_morphisms=16, global_=True, orthogonal=True), 71000, 400)
    c, f = stats["globalize_contract"], stats2["globalize_fixed_point"]
    ok = not failures and not failures2 and c["ran"] == 500 and f["ran"] >= 200
    report("6 globalize passes G1-G4; global fixed point", ok,
           f"contract {c['ran']}/500, fixed point {f['ran']} orthogonal global + "
           f"{stats['globalize_fixed_point']['ran']} mixed")
    assert ok, (failures + failures2)[:3]


# -- 7. base independence -------------------------------------------------------------------

def test_c7():
    tables = {}
    for base in ("Q", "Fp:2", "Fp:5"):
        t = run_strong_correspondence(catalog.s8_example(BaseRing.parse(base)))
        tables[base] = [(r.subgroupoid.names, r.subalgebra.blocks) for r in t.rows]
    ok = tables["Q"] == tables["Fp:2"] == tables["Fp:5"]
    report("7 S8 table identical over Q, F2, F5", ok, f"{len(tables['Q'])} rows each")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
