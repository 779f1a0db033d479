"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run under pytest (lines appear in the "acceptance criteria" summary
section) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402

from freespace_lab.attainment import verify_na_equals_sna  # noqa: E402
from freespace_lab.certificates import check_row, check_verdict  # noqa: E402
from freespace_lab.elements import FreeElement, LipFunction, all_molecules  # noqa: E402
from freespace_lab.extremal import (  # noqa: E402
    DEFAULT_EPS_GRID,
    classify_all,
    is_extreme,
    oracle_extreme_points,
)
from freespace_lab.free_space import kr_norm_dual, kr_norm_primal, slice_diameter  # noqa: E402
from freespace_lab.gallery import FAMILIES, gallery  # noqa: E402
from freespace_lab.lipschitz import (  # noqa: E402
    build_f_xy,
    build_fdent,
    lip_norm,
    pair,
    pair_molecule,
)
from freespace_lab.metric import MetricSpace, random_space, segment_is_trivial, snowflake, square_space  # noqa: E402

EMITTED_ROWS: list = []  # (space, row) pairs collected by every criterion


def _spaces(seed, count, lo, hi, mode=None):
    rng = random.Random(seed)
    return [random_space(rng, rng.randint(lo, hi), mode) for _ in range(count)]


ORACLE_SPACES = _spaces(20251, 200, 4, 8)


def _record(number: int, title: str, ok: bool, detail: str, started: float) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] AC{number:<2} {title}: {detail} ({time.perf_counter() - started:.1f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


# -- 1 --------------------------------------------------------------------------

def test_ac01_oracle_equivalence():
    t0 = time.perf_counter()
    mismatches = 0
    molecules = 0
    for sp in ORACLE_SPACES:
        oracle = set(oracle_extreme_points(sp))
        trivial = {m for m in all_molecules(sp) if segment_is_trivial(sp, m.x, m.y)}
        proven = {m for m in all_molecules(sp) if is_extreme(sp, m.x, m.y).proven}
        molecules += len(trivial | oracle)
        mismatches += (oracle != trivial) + (proven != trivial)
    ok = mismatches == 0
    _record(1, "oracle equivalence", ok,
            f"{len(ORACLE_SPACES)} spaces (4-8 points), trivial-segment set == oracle vertices, "
            f"{mismatches} mismatches", t0)
    assert ok


# -- 2 --------------------------------------------------------------------------

def test_ac02_norm_duality():
    t0 = time.perf_counter()
    rng = random.Random(2)
    spaces = _spaces(202, 100, 2, 8)
    elements = 0
    bad = 0
    for k in range(500):
        sp = spaces[k % len(spaces)]
        support = rng.sample(range(1, sp.n), rng.randint(1, sp.n - 1))
        mu = FreeElement.from_mapping(sp, {i: F(rng.randint(-7, 7), rng.randint(1, 5)) for i in support})
        dual, primal = kr_norm_dual(mu), kr_norm_primal(mu)
        bad += dual.value != primal.value or pair(dual.witness, mu) != dual.value
        elements += 1
    iso_pairs = iso_bad = 0
    for sp in spaces:
        for x, y in sp.pairs():
            if x < y:
                e = FreeElement.delta(sp, x) - FreeElement.delta(sp, y)
                iso_bad += kr_norm_primal(e).value != sp.dist[x][y] or kr_norm_dual(e).value != sp.dist[x][y]
                iso_pairs += 1
    ok = bad == 0 and iso_bad == 0
    _record(2, "norm duality", ok,
            f"{elements} elements dual == primal ({bad} failures); isometry on {iso_pairs} pairs "
            f"({iso_bad} failures)", t0)
    assert ok


# -- 3 --------------------------------------------------------------------------

def test_ac03_peak_function_properties():
    t0 = time.perf_counter()
    eps_values = (F(1, 2), F(1, 4), F(1, 10), F(1, 100))
    fails = {"a": 0, "b": 0, "c": 0, "d": 0}
    pairs = 0
    for sp in ORACLE_SPACES:
        D = sp.dist
        mols = all_molecules(sp)
        for x, y in sp.pairs():
            pairs += 1
            f = build_f_xy(sp, x, y)
            fails["b"] += lip_norm(f).value > 1
            for m in mols:
                u, v = m.x, m.y
                p = pair_molecule(f, u, v)
                worst = max(D[x][u] + D[u][y], D[x][v] + D[v][y])
                fails["a"] += p > D[x][y] / worst
                for eps in eps_values:
                    if p > 1 - eps:
                        fails["c"] += not (1 - eps) * worst < D[x][y]
                if p == 1:
                    fails["d"] += not (D[x][u] + D[u][y] == D[x][y] and D[x][v] + D[v][y] == D[x][y])
    ok = not any(fails.values())
    _record(3, "peak function properties (a)-(d)", ok,
            f"{pairs} pairs on {len(ORACLE_SPACES)} spaces, failures {fails}", t0)
    assert ok


# -- 4 --------------------------------------------------------------------------

def test_ac04_slice_diameter_inequality():
    t0 = time.perf_counter()
    rng = random.Random(4)
    instances = fails = 0
    worst_slack = None
    for sp in _spaces(404, 40, 3, 5):
        verts = oracle_extreme_points(sp)
        for _ in range(3):
            if rng.random() < 0.5:
                x, y = rng.choice(sp.pairs())
                f = build_f_xy(sp, x, y)
            else:
                raw = LipFunction.from_values(sp, [F(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(sp.n)])
                norm = lip_norm(raw).value
                if norm == 0:
                    continue
                f = raw.scaled(1 / norm)
            alpha = rng.choice((F(1, 2), F(1, 3), F(3, 4), F(1, 5)))
            eps = rng.choice((F(1, 2), F(1, 4), F(1, 8), F(1, 3)))
            lhs = slice_diameter(sp, f, eps * alpha, restrict_to_molecules=False, vertices=verts)
            rhs = 2 * slice_diameter(sp, f, alpha) + 4 * eps
            instances += 1
            fails += lhs > rhs
            slack = rhs - lhs
            worst_slack = slack if worst_slack is None else min(worst_slack, slack)
    ok = fails == 0 and instances >= 100
    _record(4, "slice diameter inequality", ok,
            f"{instances} instances, {fails} violations, smallest slack {worst_slack}", t0)
    assert ok


# -- 5 --------------------------------------------------------------------------

def _clustered_space(rng):
    """l1 distances of rational points in the plane: x = (0,0), y = (1,0)
    with a few points crowded around each and a few far away."""
    pts = [(F(0), F(0)), (F(1), F(0))]
    for cx in (F(0), F(1)):
        for _ in range(rng.randint(1, 3)):
            pts.append((cx + F(rng.randint(-10, 10), 100), F(rng.randint(-10, 10), 100)))
    for _ in range(rng.randint(0, 2)):
        pts.append((F(rng.randint(-20, 40), 20), F(rng.randint(-20, 20), 20)))
    pts = list(dict.fromkeys(pts))
    D = [[abs(a[0] - b[0]) + abs(a[1] - b[1]) for b in pts] for a in pts]
    labels = ["0", "y"] + [f"q{i}" for i in range(2, len(pts))]
    return MetricSpace.from_matrix(labels, D)


def test_ac05_fdent_contract():
    t0 = time.perf_counter()
    rng = random.Random(5)
    instances = 0
    fails = {"norm": 0, "peak": 0, "balls": 0}
    ball_pairs = 0
    for k in range(60):
        if k % 3 == 0:
            sp = random_space(rng, rng.randint(3, 7), "graph_frac")
            x, y = rng.choice(sp.pairs())
        else:
            sp = _clustered_space(rng)
            x, y = 0, 1
        eps = F(rng.randint(1, 24), 100)
        tau = F(rng.randint(1, 99), 100)
        f = build_fdent(sp, x, y, eps, tau)
        instances += 1
        fails["norm"] += lip_norm(f).value > 1
        p = pair_molecule(f, x, y)
        fails["peak"] += not (p == 1 / (1 + 4 * eps * tau) and p > 1 - 4 * eps * tau)
        r = eps * sp.dist[x][y]
        for c in (x, y):
            ball = [t for t in range(sp.n) if sp.dist[c][t] <= r]
            for u in ball:
                for v in ball:
                    if u != v:
                        ball_pairs += 1
                        fails["balls"] += pair_molecule(f, u, v) > 1 - tau
    ok = instances >= 50 and not any(fails.values())
    _record(5, "fdent contract", ok,
            f"{instances} instances, {ball_pairs} same-ball molecules, failures {fails}", t0)
    assert ok


# -- 6 --------------------------------------------------------------------------

def test_ac06_ag_space():
    t0 = time.perf_counter()
    sp = gallery("ag", 8)
    (row,) = classify_all(sp, pairs=[(sp.index("0"), sp.index("x1"))])
    EMITTED_ROWS.append((sp, row))
    problems = []
    if not row.extreme.proven:
        problems.append("extreme not Proven")
    d = row.denting
    if not d.refuted:
        problems.append("denting not Refuted")
    else:
        for it in d.evidence["items"]:
            m = it["t"]
            if F(it["excess"]) != F(2, m) or F(it["min_dist"]) != 1 + F(1, m):
                problems.append(f"witness x{m} values")
    s = row.strongly_exposed
    if not s.refuted:
        problems.append("strongly exposed not Refuted")
    sched = s.evidence.get("schedule_items", [])
    if len(sched) != 20 or any(it["t"] < 2 * it["n"] for it in sched):
        problems.append("(Z) schedule m >= 2n missing")
    for v in (d, s, row.extreme):
        res = check_verdict(sp, v)
        if not res.ok:
            problems.append(f"checker rejected {v.claim}: {res.problems[:2]}")
    ok = not problems
    _record(6, "ag pair (0, x1)", ok,
            f"extreme {row.extreme.status.value}, denting {d.status.value} (excess 2/m, min 1+1/m, "
            f"{len(d.evidence.get('items', []))} witnesses), strongly exposed {s.status.value} "
            f"with {len(sched)} (Z)-witnesses m >= 2n; {problems or 'evidence re-verified'}", t0)
    assert ok


# -- 7 --------------------------------------------------------------------------

def test_ac07_tree_space():
    t0 = time.perf_counter()
    sp = gallery("tree_omega", 8)
    (row,) = classify_all(sp, pairs=[(sp.index("xinf"), sp.index("0"))])
    EMITTED_ROWS.append((sp, row))
    problems = []
    d, s = row.denting, row.strongly_exposed
    table = d.evidence.get("delta_table", [])
    if not d.proven:
        problems.append("denting not Proven")
    if [r["eps"] for r in table] != [str(e) for e in DEFAULT_EPS_GRID] or any(F(r["delta"]) <= 0 for r in table):
        problems.append("delta table incomplete")
    if not s.refuted:
        problems.append("strongly exposed not Refuted")
    items = s.evidence.get("items", [])
    for it in items:
        m = it["t"] if "t" in it else int(it["witness"][1:])
        if m < 2 * it["n"] - 1:
            problems.append(f"witness for n={it['n']} below 2n-1")
    if len(items) != 20:
        problems.append("need witnesses for n <= 20")
    for v in (d, s, row.extreme):
        res = check_verdict(sp, v)
        if not res.ok:
            problems.append(f"checker rejected {v.claim}: {res.problems[:2]}")
    ok = not problems
    deltas = ", ".join(f"{r['eps']}:{r['delta']}" for r in table)
    _record(7, "tree pair (xinf, 0)", ok,
            f"denting {d.status.value} with delta table [{deltas}], strongly exposed {s.status.value} "
            f"with {len(items)} (Z)-witnesses m >= 2n-1; {problems or 'evidence re-verified'}", t0)
    assert ok


# -- 8 --------------------------------------------------------------------------

def test_ac08_snowflake():
    t0 = time.perf_counter()
    spaces = _spaces(808, 50, 3, 6)
    checked = fails = 0
    min_gap = None
    for sp in spaces:
        for p in (F(1, 4), F(1, 2), F(3, 4)):
            flake = snowflake(sp, p)
            verts = set(oracle_extreme_points(flake))
            fails += verts != set(all_molecules(flake))
            D = flake.dist
            for x, y in flake.pairs():
                for z in range(flake.n):
                    if z not in (x, y):
                        gap = D[x][z] + D[z][y] - D[x][y]
                        min_gap = gap if min_gap is None else min(min_gap, gap)
            checked += 1
    ok = fails == 0 and min_gap is not None and min_gap > 1e-9
    _record(8, "snowflake molecules all extreme", ok,
            f"{checked} snowflakes (50 spaces x p in 1/4,1/2,3/4), {fails} with a non-vertex molecule, "
            f"smallest segment gap {float(min_gap):.3g} > 1e-9", t0)
    assert ok


# -- 9 --------------------------------------------------------------------------

def test_ac09_norm_attainment():
    t0 = time.perf_counter()
    spaces = _spaces(909, 50, 2, 7)
    total = 0
    counterexamples = []
    for k, sp in enumerate(spaces):
        rep = verify_na_equals_sna(sp, 10, seed=9000 + k)
        total += len(rep.samples)
        verts = set(oracle_extreme_points(sp))
        for s in rep.samples:
            if s.vertex not in verts or not rep.passed:
                counterexamples.append(s.to_json())
        if not rep.passed:
            counterexamples.append(rep.counterexample)
    ok = total == 500 and not counterexamples
    _record(9, "norm attainment", ok,
            f"{total} random functions on {len(spaces)} spaces (n <= 7), {len(counterexamples)} counterexamples", t0)
    assert ok


# -- 10 -------------------------------------------------------------------------

def test_ac10_chain_invariant():
    t0 = time.perf_counter()
    rows = list(EMITTED_ROWS)
    for name in sorted(FAMILIES):
        sp = gallery(name, 8)
        rows += [(sp, r) for r in classify_all(sp)]
    sq = square_space()
    rows += [(sq, r) for r in classify_all(sq)]
    rows += [(snowflake(sq, F(1, 2)), r) for r in classify_all(snowflake(sq, F(1, 2)))]
    for sp in ORACLE_SPACES[:40]:
        rows += [(sp, r) for r in classify_all(sp)]
    chain_bad = sum(not r.chain_holds() for _, r in rows)
    check_bad = sum(not check_row(sp, r).ok for sp, r in rows)
    denting_not_strexp = sum(r.denting.proven and r.strongly_exposed.refuted for _, r in rows)
    ok = chain_bad == 0 and check_bad == 0 and denting_not_strexp > 0
    _record(10, "chain invariant", ok,
            f"{len(rows)} rows, {chain_bad} chain violations, {check_bad} evidence failures, "
            f"{denting_not_strexp} denting but not strongly exposed", t0)
    assert ok


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_ac")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
