"""Extremal structure of the unit ball of ``F(M)`` at molecules.

Each decision returns a :class:`Verdict` whose evidence is plain JSON data
(rationals as ``"p/q"`` strings) that :mod:`freespace_lab.certificates`
re-checks from raw distances.

Metric characterisations used (``e(z) = d(x,z) + d(z,y) - d(x,y)`` is the
excess of ``z`` over the pair, ``mn(z) = min(d(x,z), d(y,z))``):

* extreme            <=> no ``z`` outside ``{x, y}`` has ``e(z) = 0``
                          (uniformly discrete bounded or compact spaces);
* denting/preserved  <=> for every eps there is delta > 0 with
                          ``(1-delta)(d(x,z)+d(z,y)) < d(x,y)  =>  mn(z) < eps``;
* strongly exposed   <=> property (Z) fails, where (Z) asks for every n a
                          ``z`` outside ``{x, y}`` with ``e(z) <= mn(z) / n``.

On a finite space all three collapse to "segment trivial"; on gallery
spaces the tail polynomials from :mod:`freespace_lab.gallery` decide what
happens beyond the truncation.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import lp
from .elements import Molecule, all_molecules
from .errors import ConsistencyError, TooLarge
from .gallery import TailCertificate, family, space_keys, tail_certificate
from .lipschitz import build_f_xy, pair_molecule
from .metric import MetricSpace
from .rational import fmt

F = Fraction
DEFAULT_EPS_GRID = (F(1), F(1, 2), F(1, 4), F(1, 8), F(1, 16))
DEFAULT_DEPTH = 20
ORACLE_CAP = 10


class Status(str, Enum):
    PROVEN = "Proven"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"

    def negate(self) -> "Status":
        if self is Status.PROVEN:
            return Status.REFUTED
        if self is Status.REFUTED:
            return Status.PROVEN
        return self


@dataclass(frozen=True)
class Verdict:
    status: Status
    claim: str
    pair: tuple[str, str]
    evidence: dict = field(default_factory=dict)

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def to_json(self) -> dict:
        return {"claim": self.claim, "pair": list(self.pair), "status": self.status.value,
                "evidence": self.evidence}

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        return cls(Status(data["status"]), data["claim"], tuple(data["pair"]), data.get("evidence", {}))


@dataclass(frozen=True)
class ClassificationRow:
    molecule: tuple[str, str]
    extreme: Verdict
    exposed_by_fxy: Verdict
    denting: Verdict
    strongly_exposed: Verdict
    oracle_extreme: bool | None = None

    def verdicts(self) -> list[Verdict]:
        return [self.extreme, self.exposed_by_fxy, self.denting, self.strongly_exposed]

    def chain_holds(self) -> bool:
        """strongly exposed => denting => extreme, read on Proven verdicts,
        and Refuted propagating the other way."""
        s, d, e = self.strongly_exposed, self.denting, self.extreme
        if s.proven and not d.proven:
            return False
        if d.proven and not e.proven:
            return False
        if e.refuted and not d.refuted:
            return False
        if d.refuted and not s.refuted:
            return False
        return True

    def to_json(self) -> dict:
        out = {
            "molecule": list(self.molecule),
            "extreme": self.extreme.to_json(),
            "exposed_by_fxy": self.exposed_by_fxy.to_json(),
            "denting": self.denting.to_json(),
            "strongly_exposed": self.strongly_exposed.to_json(),
        }
        if self.oracle_extreme is not None:
            out["oracle_extreme"] = self.oracle_extreme
        return out


# -- shared helpers ----------------------------------------------------------

@dataclass(frozen=True)
class _Z:
    z: int
    to_x: object
    to_y: object
    excess: object
    mn: object

    @property
    def total(self):
        return self.to_x + self.to_y


def _others(space: MetricSpace, x: int, y: int) -> list[_Z]:
    D = space.dist
    dxy = D[x][y]
    out = []
    for z in range(space.n):
        if z in (x, y):
            continue
        a, b = D[x][z], D[z][y]
        out.append(_Z(z, a, b, a + b - dxy, min(a, b)))
    return out


def _in_segment(space: MetricSpace, excess) -> bool:
    return excess <= space.tol


def _labels(space: MetricSpace, x: int, y: int) -> tuple[str, str]:
    return space.labels[x], space.labels[y]


def _segment_witness(space: MetricSpace, x: int, y: int) -> _Z | None:
    return next((z for z in _others(space, x, y) if _in_segment(space, z.excess)), None)


def _basis(space: MetricSpace) -> str:
    if space.gallery is None:
        return "finite"
    return family(space.gallery.name).regime


def _tail_label(space: MetricSpace, branch: str, t: int) -> str:
    fam = family(space.gallery.name)
    return fam.label(fam.tail_key(branch, t))


# -- extreme -----------------------------------------------------------------

def is_extreme(space: MetricSpace, x, y) -> Verdict:
    """Extreme iff the metric segment ``[x, y]`` is ``{x, y}``."""
    x, y = space.check_pair(x, y)
    lab = _labels(space, x, y)
    dxy = space.dist[x][y]
    w = _segment_witness(space, x, y)
    ev = {"basis": _basis(space)}
    if w is not None:
        ev["items"] = [{"claim": "segment_member", "witness": space.labels[w.z],
                        "lhs": fmt(w.total), "rhs": fmt(dxy), "relation": "=="}]
        return Verdict(Status.REFUTED, "extreme", lab, ev)
    ev["items"] = [{"claim": "strict_excess", "witness": space.labels[z.z], "lhs": fmt(z.total),
                    "rhs": fmt(dxy), "relation": ">"} for z in _others(space, x, y)]
    if space.gallery is None:
        return Verdict(Status.PROVEN, "extreme", lab, ev)

    cert = tail_certificate(space, x, y)
    fam = family(space.gallery.name)
    ev["tail"] = [bt.to_json(fam) for bt in cert.branches]
    if all(bt.excess.positive_on_open_closed(bt.s_max) for bt in cert.branches):
        return Verdict(Status.PROVEN, "extreme", lab, ev)
    for bt in cert.branches:
        if bt.excess.order() == 3:  # every tail point lies on the segment
            t = bt.t_first
            a, b, _ = _tail_dists(space, x, y, bt.branch, t)
            ev["items"] = [{"claim": "segment_member", "witness": _tail_label(space, bt.branch, t),
                            "branch": bt.branch, "t": t, "lhs": fmt(a + b), "rhs": fmt(dxy),
                            "relation": "=="}]
            return Verdict(Status.REFUTED, "extreme", lab, ev)
    ev["reason"] = "tail excess not certified positive"
    return Verdict(Status.INCONCLUSIVE, "extreme", lab, ev)


def _tail_dists(space, x, y, branch, t):
    from .gallery import tail_point_distances

    return tail_point_distances(space, x, y, branch, t)


# -- denting -----------------------------------------------------------------

def _delta_row(space, x, y, eps, tail: TailCertificate | None):
    """delta(eps) = 1 - d(x,y) / min_sum over z with mn(z) >= eps."""
    dxy = space.dist[x][y]
    best_excess, arg = None, None
    for z in _others(space, x, y):
        if z.mn >= eps and (best_excess is None or z.excess < best_excess):
            best_excess, arg = z.excess, space.labels[z.z]
    if tail is not None:
        tb = tail.excess_lower_bound(eps)
        if tb is not None and (best_excess is None or tb < best_excess):
            best_excess, arg = tb, "tail"
    if best_excess is None:
        return {"eps": fmt(eps), "delta": "1", "witness": None, "min_sum": None}
    min_sum = dxy + best_excess
    delta = 1 - dxy / min_sum
    return {"eps": fmt(eps), "delta": fmt(delta), "witness": arg, "min_sum": fmt(min_sum)}


def is_denting(space: MetricSpace, x, y, eps_grid: Sequence = DEFAULT_EPS_GRID,
               depth: int = DEFAULT_DEPTH) -> Verdict:
    """Decide the eps-delta metric condition for denting (= preserved
    extreme) molecules, with a delta(eps) table as evidence."""
    x, y = space.check_pair(x, y)
    lab = _labels(space, x, y)
    eps_grid = sorted((F(e) for e in eps_grid), reverse=True)
    ev: dict = {"basis": _basis(space), "eps_grid": [fmt(e) for e in eps_grid]}
    w = _segment_witness(space, x, y)
    if w is not None:
        ev["eps"] = fmt(w.mn)
        ev["items"] = [{"claim": "dent_fail", "witness": space.labels[w.z], "excess": fmt(w.excess),
                        "min_dist": fmt(w.mn), "eps": fmt(w.mn)}]
        return Verdict(Status.REFUTED, "denting", lab, ev)

    if space.gallery is None:
        ev["delta_table"] = [_delta_row(space, x, y, e, None) for e in eps_grid]
        ev["argument"] = "finite space: every eps has finitely many candidates, all with positive excess"
        return Verdict(Status.PROVEN, "denting", lab, ev)

    cert = tail_certificate(space, x, y)
    fam = family(space.gallery.name)
    ev["tail"] = [bt.to_json(fam) for bt in cert.branches]
    if not all(bt.excess.positive_on_open_closed(bt.s_max) for bt in cert.branches):
        ev["reason"] = "extremality not certified on the tail"
        return Verdict(Status.INCONCLUSIVE, "denting", lab, ev)

    # branches whose excess tends to 0 while staying away from x and y
    bad = [bt for bt in cert.branches if bt.excess.c0 == 0 and bt.min_dist.c0 > 0]
    if bad:
        bt = bad[0]
        mu0 = bt.min_dist.c0
        grid_ok = [e for e in eps_grid if bt.qualifying_cutoff(e) is None]
        eps = grid_ok[0] if grid_ok else mu0 / 2
        ev["eps"] = fmt(eps)
        ev["eps_in_grid"] = bool(grid_ok)
        ev["limit"] = {"branch": bt.branch, "excess_limit": fmt(bt.excess.c0), "min_dist_limit": fmt(mu0)}
        items = []
        count = max(1, min(depth, 12))
        for k in range(count):
            t = bt.t_first * 2**k
            a, b, dxy = _tail_dists(space, x, y, bt.branch, t)
            items.append({"claim": "dent_fail", "witness": _tail_label(space, bt.branch, t),
                          "branch": bt.branch, "t": t, "excess": fmt(a + b - dxy),
                          "min_dist": fmt(min(a, b)), "eps": fmt(eps)})
        ev["items"] = items
        return Verdict(Status.REFUTED, "denting", lab, ev)

    ev["delta_table"] = [_delta_row(space, x, y, e, cert) for e in eps_grid]
    ev["argument"] = ("every tail branch either keeps excess bounded below or converges to x or y, "
                      "so each eps admits only finitely many candidates or a uniform excess gap")
    if any(F(r["delta"]) <= 0 for r in ev["delta_table"]):
        raise ConsistencyError("non-positive delta on a certified branch")
    return Verdict(Status.PROVEN, "denting", lab, ev)


# -- property (Z) / strongly exposed -------------------------------------------

def _z_item(n, label, to_x, to_y, dxy, extra=None):
    lhs = to_x + to_y
    rhs = dxy + min(to_x, to_y) / n
    item = {"claim": "Z_witness", "n": n, "witness": label, "lhs": fmt(lhs), "rhs": fmt(rhs),
            "relation": "<="}
    if extra:
        item.update(extra)
    return item


def _ratio_lower_bound(bt) -> Fraction | None:
    """Positive lower bound for ``excess / min_dist`` on the branch, or None."""
    mn = bt.min_dist
    k = min(bt.excess.order(), mn.order())
    if k == 3:
        return None
    num, den = bt.excess.divide_s(k), mn.divide_s(k)
    lo = num.min_on(0, bt.s_max)
    hi = den.max_on(0, bt.s_max)
    if lo <= 0 or hi <= 0:
        return None
    return lo / hi


def has_property_Z(space: MetricSpace, x, y, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Property (Z) of the pair, with witnesses for ``n = 1..depth``."""
    x, y = space.check_pair(x, y)
    lab = _labels(space, x, y)
    dxy = space.dist[x][y]
    others = _others(space, x, y)
    ev: dict = {"basis": _basis(space), "depth": depth}

    w = _segment_witness(space, x, y)
    if w is not None:
        ev["schedule"] = "constant"
        ev["items"] = [_z_item(n, space.labels[w.z], w.to_x, w.to_y, dxy) for n in range(1, depth + 1)]
        return Verdict(Status.PROVEN, "property_Z", lab, ev)

    if space.tol:
        ratios = [(z.excess / z.mn, z) for z in others]
    else:
        ratios = [(F(z.excess) / z.mn, z) for z in others]
    finite_lb = min((r for r, _ in ratios), default=None)

    if space.gallery is None:
        if finite_lb is None:  # two-point space: no candidate z at all
            ev["n_star"] = 1
            ev["ratio_lower_bound"] = None
            ev["items"] = []
            return Verdict(Status.REFUTED, "property_Z", lab, ev)
        n_star = math.floor(1 / finite_lb) + 1
        ev["n_star"] = n_star
        ev["ratio_lower_bound"] = fmt(finite_lb)
        ev["items"] = [{"claim": "Z_ratio", "witness": space.labels[z.z], "excess": fmt(z.excess),
                        "min_dist": fmt(z.mn)} for _, z in ratios]
        return Verdict(Status.REFUTED, "property_Z", lab, ev)

    cert = tail_certificate(space, x, y)
    fam = family(space.gallery.name)
    ev["tail"] = [bt.to_json(fam) for bt in cert.branches]
    vanishing = [bt for bt in cert.branches
                 if bt.excess.order() > bt.min_dist.order() and bt.excess.order() < 3]
    if vanishing:
        ev["schedule"] = "scan"
        ev["limit"] = {"branch": vanishing[0].branch, "excess_order": vanishing[0].excess.order(),
                       "min_dist_order": vanishing[0].min_dist.order(), "ratio_limit": "0"}
        ev["items"] = _scan_Z(space, x, y, cert, depth)
        sched = fam.schedule(space_keys(space)[x], space_keys(space)[y])
        if sched is not None:
            ev["schedule_items"] = _schedule_Z(space, x, y, sched, depth)
        return Verdict(Status.PROVEN, "property_Z", lab, ev)

    bounds = [_ratio_lower_bound(bt) for bt in cert.branches]
    if all(b is not None for b in bounds):
        lb = min(bounds + ([finite_lb] if finite_lb is not None else []))
        n_star = math.floor(1 / lb) + 1
        ev["n_star"] = n_star
        ev["ratio_lower_bound"] = fmt(lb)
        ev["tail_ratio_bounds"] = [fmt(b) for b in bounds]
        ev["items"] = [{"claim": "Z_ratio", "witness": space.labels[z.z], "excess": fmt(z.excess),
                        "min_dist": fmt(z.mn)} for _, z in ratios]
        return Verdict(Status.REFUTED, "property_Z", lab, ev)
    ev["reason"] = "could not bound excess/min-distance on the tail"
    return Verdict(Status.INCONCLUSIVE, "property_Z", lab, ev)


def _scan_Z(space, x, y, cert, depth, scan_limit=100000):
    """First witness per n: truncated points by index, then tail indices
    upwards (branches interleaved by index)."""
    dxy = space.dist[x][y]
    others = _others(space, x, y)
    items = []
    for n in range(1, depth + 1):
        found = None
        for z in others:
            if n * z.excess <= z.mn:
                found = _z_item(n, space.labels[z.z], z.to_x, z.to_y, dxy)
                break
        if found is None:
            t0 = min(bt.t_first for bt in cert.branches)
            for t in range(t0, t0 + scan_limit):
                for bt in cert.branches:
                    if t < bt.t_first:
                        continue
                    a, b, _ = _tail_dists(space, x, y, bt.branch, t)
                    if n * (a + b - dxy) <= min(a, b):
                        found = _z_item(n, _tail_label(space, bt.branch, t), a, b, dxy,
                                        {"branch": bt.branch, "t": t})
                        break
                if found is not None:
                    break
        if found is None:
            raise ConsistencyError(f"no (Z) witness for n={n} within scan limit")
        items.append(found)
    return items


def _schedule_Z(space, x, y, sched, depth):
    fam = family(space.gallery.name)
    keys = space_keys(space)
    dxy = space.dist[x][y]
    out = []
    for n in range(1, depth + 1):
        z = sched(n)
        a, b = fam.d(keys[x], z), fam.d(z, keys[y])
        bt = fam.tail_index(z)
        extra = {"branch": bt[0], "t": bt[1]} if bt else None
        out.append(_z_item(n, fam.label(z), a, b, dxy, extra))
    return out


def is_strongly_exposed(space: MetricSpace, x, y, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Strongly exposed iff the pair fails property (Z)."""
    z = has_property_Z(space, x, y, depth)
    ev = dict(z.evidence)
    ev["via"] = "property_Z"
    return Verdict(z.status.negate(), "strongly_exposed", z.pair, ev)


# -- exposed by f_xy -----------------------------------------------------------

def is_exposed_by_fxy(space: MetricSpace, x, y) -> Verdict:
    """Is ``m_xy`` the only molecule on which ``f_xy`` reaches 1?  On a
    finite space the face ``{f_xy = 1}`` of the ball is the hull of those
    molecules, so this decides exposedness by ``f_xy``."""
    x, y = space.check_pair(x, y)
    lab = _labels(space, x, y)
    if space.gallery is not None:
        return Verdict(Status.INCONCLUSIVE, "exposed_by_fxy", lab,
                       {"reason": "decided on finite spaces only"})
    f = build_f_xy(space, x, y)
    tol = space.tol
    maxim = []
    for m in all_molecules(space):
        v = pair_molecule(f, m.x, m.y)
        if v >= 1 - tol:
            maxim.append((m, v))
    others = [(m, v) for m, v in maxim if (m.x, m.y) != (x, y)]
    ev = {"maximizers": [list(m.labels(space)) for m, _ in maxim]}
    if others:
        ev["items"] = [{"claim": "fxy_maximizer", "witness": list(m.labels(space)), "lhs": fmt(v),
                        "rhs": "1", "relation": "=="} for m, v in others]
        return Verdict(Status.REFUTED, "exposed_by_fxy", lab, ev)
    return Verdict(Status.PROVEN, "exposed_by_fxy", lab, ev)


# -- brute-force oracle ----------------------------------------------------------

def _molecule_vectors(space: MetricSpace, mols: list[Molecule]):
    return [m.element(space).dense() for m in mols]


def oracle_extreme_points(space: MetricSpace, cap: int = ORACLE_CAP) -> list[Molecule]:
    """Vertices of ``conv(V)`` by exact LP: ``m`` is a vertex iff it is not
    a convex combination of the other molecules.  Uses the ball's symmetry
    (``m_yx = -m_xy``) to test one orientation per pair."""
    if space.n > cap:
        raise TooLarge(f"oracle limited to {cap} points, space has {space.n}")
    mols = all_molecules(space)
    vecs = _molecule_vectors(space, mols)
    index = {(m.x, m.y): k for k, m in enumerate(mols)}
    dim = space.n - 1
    out = []
    for k, m in enumerate(mols):
        if m.x > m.y:
            continue
        others = [j for j in range(len(mols)) if j != k]
        A = [[vecs[j][i] for j in others] for i in range(dim)]
        A.append([1] * len(others))
        b = list(vecs[k]) + [1]
        if not lp.is_feasible(A, b).ok:
            out.append(m)
            out.append(mols[index[(m.y, m.x)]])
    return sorted(out)


# -- full classification -----------------------------------------------------------

def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FREESPACE_LAB_THREADS", "1")))
    except ValueError:
        return 1


def classify_pair(space: MetricSpace, x, y, depth: int = DEFAULT_DEPTH,
                  eps_grid: Sequence = DEFAULT_EPS_GRID, oracle: set | None = None) -> ClassificationRow:
    x, y = space.check_pair(x, y)
    row = ClassificationRow(
        molecule=_labels(space, x, y),
        extreme=is_extreme(space, x, y),
        exposed_by_fxy=is_exposed_by_fxy(space, x, y),
        denting=is_denting(space, x, y, eps_grid, depth),
        strongly_exposed=is_strongly_exposed(space, x, y, depth),
        oracle_extreme=None if oracle is None else Molecule(x, y) in oracle,
    )
    if not row.chain_holds():
        raise ConsistencyError(f"implication chain violated for {row.molecule}")
    if oracle is not None:
        statuses = {v.status for v in row.verdicts()}
        if row.oracle_extreme != row.extreme.proven or len(statuses) != 1:
            raise ConsistencyError(f"finite-space collapse violated for {row.molecule}")
    return row


def classify_all(space: MetricSpace, depth: int = DEFAULT_DEPTH, eps_grid: Sequence = DEFAULT_EPS_GRID,
                 pairs=None, use_oracle: bool | None = None) -> list[ClassificationRow]:
    """One row per ordered molecule (or per requested pair).  On finite
    spaces the oracle is consulted and the collapse of all four notions is
    asserted."""
    space.require_molecules()
    if use_oracle is None:
        use_oracle = space.gallery is None and space.n <= ORACLE_CAP
    oracle = set(oracle_extreme_points(space)) if use_oracle else None
    todo = list(pairs) if pairs is not None else space.pairs()
    work = [lambda p=p: classify_pair(space, p[0], p[1], depth, eps_grid, oracle) for p in todo]
    threads = _threads()
    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(lambda fn: fn(), work))
    return [fn() for fn in work]
