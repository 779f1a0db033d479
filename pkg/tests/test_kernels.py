from __future__ import annotations

import random
from fractions import Fraction

import pytest

from freespace_lab import _pykernels, kernels
from freespace_lab.metric import random_space


def _int_metric(rng, n):
    sp = random_space(rng, n, "graph")
    return sp.int_dist


def test_backend_selected_at_import():
    assert kernels.BACKEND in ("python", "cython")
    assert "python" in kernels.available_backends()


def test_triangle_violations_known(backend):
    D = ((0, 1, 3), (1, 0, 1), (3, 1, 0))
    assert backend.triangle_violations(D, 0) == [(0, 1, 2)]
    D_ok = ((0, 1, 2), (1, 0, 1), (2, 1, 0))
    assert backend.triangle_violations(D_ok, 0) == []


def test_segment_and_excess(backend):
    D = ((0, 1, 2, 1), (1, 0, 1, 2), (2, 1, 0, 1), (1, 2, 1, 0))
    assert sorted(backend.segment_members(D, 0, 2, 0)) == [0, 1, 2, 3]
    assert sorted(backend.segment_members(D, 0, 1, 0)) == [0, 1]
    assert list(backend.excess_row(D, 0, 1)) == [0, 0, 2, 2]


def test_max_ratio_ties_and_zero(backend):
    D = ((0, 1, 2), (1, 0, 1), (2, 1, 0))
    num, den, i, j = backend.max_ratio([0, 1, 2], D)
    assert Fraction(num, den) == 1 and (i, j) == (0, 1)
    assert backend.max_ratio([0, 0, 0], D)[2:] == (-1, -1)


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    backends = kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled backend not built")
    rng = random.Random(seed)
    D = _int_metric(rng, 9)
    bad = tuple(tuple(v + (3 if (i, j) in ((0, 5), (5, 0)) else 0) for j, v in enumerate(r))
                for i, r in enumerate(D))
    vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(9)]
    py, cy = backends["python"], backends["cython"]
    assert py.triangle_violations(bad, 0) == cy.triangle_violations(bad, 0)
    for x in range(9):
        for y in range(9):
            if x != y:
                assert sorted(py.segment_members(D, x, y, 0)) == sorted(cy.segment_members(D, x, y, 0))
                assert list(py.excess_row(D, x, y)) == list(cy.excess_row(D, x, y))
    assert tuple(py.max_ratio(vals, D)) == tuple(cy.max_ratio(vals, D))


def test_pivot_matches_between_backends():
    backends = kernels.available_backends()
    T0 = [[2, 1, 1, 0, 8], [1, 3, 0, 1, 9], [-3, -2, 0, 0, 0]]
    results = []
    for mod in backends.values():
        T = [row[:] for row in T0]
        det = mod.pivot(T, 0, 0, 1)
        results.append((T, det, mod.ratio_test(T, 1, 4, [0, 3], [0, 1])))
    assert all(r == results[0] for r in results)


def test_pure_module_importable():
    assert callable(_pykernels.pivot)


def test_benchmark_script_runs():
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    proc = subprocess.run([sys.executable, str(script), "--repeat", "1", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert "RESULTS DIFFER" not in proc.stdout
