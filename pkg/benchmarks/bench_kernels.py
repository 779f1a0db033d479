"""Compare the compiled and pure-Python kernel backends.

Each workload runs once per available backend on identical inputs; the
results are also compared so a speed-up never hides a wrong answer.

    python benchmarks/bench_kernels.py --repeat 3
"""

from __future__ import annotations

import argparse
import contextlib
import json
import random
import time
from fractions import Fraction

from freespace_lab import kernels
from freespace_lab.extremal import oracle_extreme_points
from freespace_lab.free_space import kr_norm_dual
from freespace_lab.elements import FreeElement
from freespace_lab.metric import random_space

NAMES = ("triangle_violations", "segment_members", "excess_row", "max_ratio", "pivot", "ratio_test")


@contextlib.contextmanager
def use_backend(module):
    saved = {n: getattr(kernels, n) for n in NAMES}
    try:
        for n in NAMES:
            setattr(kernels, n, getattr(module, n))
        yield
    finally:
        for n, fn in saved.items():
            setattr(kernels, n, fn)


def _int_matrix(rng, n):
    # shortest-path closure of random integer weights: a valid metric
    D = [[0 if i == j else rng.randint(1, 9) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            D[i][j] = D[j][i]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return tuple(tuple(r) for r in D)


def workloads(seed: int):
    rng = random.Random(seed)
    D = _int_matrix(rng, 60)
    vals = [rng.randint(-50, 50) for _ in range(60)]
    spaces = [random_space(rng, 8, "band") for _ in range(4)]
    elems = [FreeElement.from_mapping(sp, {i: Fraction(rng.randint(-5, 5), 3) for i in range(1, sp.n)})
             for sp in spaces]

    def triangles(mod):
        return mod.triangle_violations(D, 0)

    def segments(mod):
        return [mod.segment_members(D, x, y, 0) for x in range(20) for y in range(20) if x != y]

    def ratio(mod):
        return [mod.max_ratio(vals, D) for _ in range(5)]

    def oracle(mod):
        with use_backend(mod):
            return [oracle_extreme_points(sp) for sp in spaces]

    def dual_lp(mod):
        with use_backend(mod):
            return [kr_norm_dual(mu).value for mu in elems]

    return {"triangle_violations(60)": triangles, "segment_members(60)": segments,
            "max_ratio(60)": ratio, "oracle(8 points x4)": oracle, "kr_norm_dual(8 points x4)": dual_lp}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="print machine-readable results")
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    results = []
    for name, fn in workloads(args.seed).items():
        row = {"workload": name}
        answers = {}
        for bname, mod in backends.items():
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                answers[bname] = fn(mod)
                best = min(best, time.perf_counter() - t0)
            row[bname] = best
        row["agree"] = len({repr(a) for a in answers.values()}) == 1
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        results.append(row)

    if args.json:
        print(json.dumps(results, indent=2))
    else:
        print(f"backends: {', '.join(backends)} (selected at import: {kernels.BACKEND})")
        for r in results:
            line = f"{r['workload']:<28} python {r['python'] * 1e3:9.2f} ms"
            if "cython" in r:
                line += f"   cython {r['cython'] * 1e3:9.2f} ms   x{r['speedup']:.2f}"
            line += "" if r["agree"] else "   RESULTS DIFFER"
            print(line)
    return 0 if all(r["agree"] for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
