"""Strong norm attainment of real Lipschitz functions on finite spaces.

A function strongly attains its norm when some pair ``x != y`` has
``|f(x) - f(y)| = ||f||_L d(x, y)``.  As a functional on ``F(M)`` it attains
its norm on the ball, which is the hull of the molecules, hence at a vertex;
the check below confirms that the vertex found is a molecule whose pair
strongly attains, for every sampled function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .elements import LipFunction, Molecule
from .errors import DegenerateInput
from .extremal import oracle_extreme_points
from .lipschitz import lip_norm, pair_molecule
from .metric import MetricSpace, metric_segment
from .rational import fmt


@dataclass(frozen=True)
class AttainmentReport:
    function: LipFunction
    lip_norm: Fraction
    attaining_pairs: tuple[tuple[int, int], ...]
    trivial_segment_pair: tuple[int, int] | None

    def to_json(self) -> dict:
        labels = self.function.space.labels
        return {
            "function": self.function.to_json(),
            "lip_norm": fmt(self.lip_norm),
            "attaining_pairs": [[labels[i], labels[j]] for i, j in self.attaining_pairs],
            "trivial_segment_pair": (None if self.trivial_segment_pair is None
                                     else [labels[i] for i in self.trivial_segment_pair]),
        }


def strongly_attains(space: MetricSpace, f: LipFunction) -> AttainmentReport:
    """All ordered pairs ``(x, y)`` with ``f(x) - f(y) = ||f|| d(x, y)``."""
    if f.is_zero():
        raise DegenerateInput("the zero function attains its norm trivially")
    L = lip_norm(f).value
    tol = space.tol
    vals, D = f.values, space.dist
    pairs = []
    for x, y in space.pairs():
        diff = vals[x] - vals[y]
        if diff > 0 and abs(diff - L * D[x][y]) <= tol * max(1, L):
            pairs.append((x, y))
    trivial = next((p for p in pairs if len(metric_segment(space, *p)) == 2), None)
    return AttainmentReport(f, L, tuple(pairs), trivial)


def random_function(space: MetricSpace, rng: random.Random, grid: int = 8, denom: int = 4) -> LipFunction:
    """Independent values uniform on ``{-grid, ..., grid} / denom``,
    base-shifted; redrawn when identically zero."""
    while True:
        vals = [Fraction(rng.randint(-grid, grid), denom) for _ in range(space.n)]
        f = LipFunction.from_values(space, vals)
        if not f.is_zero():
            return f


@dataclass
class SampleResult:
    function: LipFunction
    norm: Fraction
    vertex: Molecule
    attaining: AttainmentReport

    def to_json(self) -> dict:
        space = self.function.space
        return {
            "function": self.function.to_json(),
            "norm": fmt(self.norm),
            "vertex": list(self.vertex.labels(space)),
            "attaining_pairs": self.attaining.to_json()["attaining_pairs"],
        }


@dataclass
class NAReport:
    passed: bool
    seed: int | None
    samples: list[SampleResult] = field(default_factory=list)
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "seed": self.seed,
            "sample_count": len(self.samples),
            "samples": [s.to_json() for s in self.samples],
            "counterexample": self.counterexample,
        }


def check_function(space: MetricSpace, f: LipFunction, vertices: list[Molecule]) -> SampleResult | dict:
    """Maximise ``<f, .>`` over the oracle vertices; returns a SampleResult,
    or a counterexample dict if attainment fails anywhere."""
    report = strongly_attains(space, f)
    best, arg = None, None
    for m in vertices:
        v = pair_molecule(f, m.x, m.y)
        if best is None or v > best:
            best, arg = v, m
    tol = space.tol * max(1, report.lip_norm)
    problem = None
    if arg is None:
        problem = "no oracle vertices"
    elif abs(best - report.lip_norm) > tol:
        problem = "functional norm over the ball differs from the Lipschitz norm"
    elif (arg.x, arg.y) not in report.attaining_pairs:
        problem = "maximising vertex does not strongly attain"
    if problem is not None:
        return {"function": f.to_json(), "reason": problem}
    return SampleResult(f, best, arg, report)


def verify_na_equals_sna(space: MetricSpace, sample_count: int, seed: int | None = 0,
                         rng: random.Random | None = None,
                         vertices: list[Molecule] | None = None) -> NAReport:
    """Sample random functions and confirm each norm-attaining functional
    attains at a molecule that strongly attains.  ``passed`` is False with
    the first failure in ``counterexample`` otherwise."""
    space.require_molecules()
    if rng is None:
        rng = random.Random(seed)
    if vertices is None:
        vertices = oracle_extreme_points(space)
    report = NAReport(True, seed)
    for _ in range(sample_count):
        f = random_function(space, rng)
        out = check_function(space, f, vertices)
        if isinstance(out, dict):
            report.passed = False
            report.counterexample = out
            break
        report.samples.append(out)
    return report
