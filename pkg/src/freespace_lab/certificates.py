"""Independent re-verification of verdict evidence.

The checker never trusts numbers written in the evidence: it recomputes
every distance from the space (or from the gallery closed form for points
beyond the truncation), compares them with the recorded values, and then
re-tests the inequality each item claims.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .elements import all_molecules
from .gallery import (
    family,
    space_keys,
    tail_certificate,
    tail_point_distances,
    validate_tail_model,
)
from .lipschitz import build_f_xy, pair_molecule
from .metric import MetricSpace
from .rational import to_fraction


@dataclass
class CheckResult:
    ok: bool = True
    problems: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.problems.append(msg)

    def merge(self, other: "CheckResult", prefix: str = "") -> None:
        for p in other.problems:
            self.fail(prefix + p)


class _Ctx:
    def __init__(self, space: MetricSpace, x: int, y: int, res: CheckResult):
        self.space, self.x, self.y, self.res = space, x, y, res
        self.tol = space.tol
        self.dxy = space.dist[x][y]

    def num(self, s):
        if s is None:
            return None
        if self.tol:
            return float(Fraction(s)) if isinstance(s, str) else float(s)
        return to_fraction(s)

    def eq(self, a, b) -> bool:
        return abs(a - b) <= self.tol if self.tol else a == b

    def le(self, a, b) -> bool:
        return a <= b + self.tol

    def lt(self, a, b) -> bool:
        return a < b - self.tol if self.tol else a < b

    def dists(self, item):
        """``(d(x,z), d(z,y))`` for the item's witness, recomputed."""
        if "branch" in item and self.space.gallery is not None:
            a, b, _ = tail_point_distances(self.space, self.x, self.y, item["branch"], int(item["t"]))
            fam = family(self.space.gallery.name)
            if fam.label(fam.tail_key(item["branch"], int(item["t"]))) != item["witness"]:
                self.res.fail(f"witness label {item['witness']} does not match tail index")
            return a, b
        z = self.space.index(item["witness"])
        if z in (self.x, self.y):
            self.res.fail(f"witness {item['witness']} is an endpoint of the pair")
        return self.space.dist[self.x][z], self.space.dist[z][self.y]

    def others(self):
        D = self.space.dist
        for z in range(self.space.n):
            if z not in (self.x, self.y):
                yield z, D[self.x][z], D[z][self.y]


def check_verdict(space: MetricSpace, verdict) -> CheckResult:
    """Re-verify one :class:`~freespace_lab.extremal.Verdict` against ``space``."""
    res = CheckResult()
    status = verdict.status.value if hasattr(verdict.status, "value") else verdict.status
    try:
        x, y = space.check_pair(*verdict.pair)
    except Exception as exc:  # noqa: BLE001 - report, do not raise
        res.fail(f"bad pair {verdict.pair}: {exc}")
        return res
    ctx = _Ctx(space, x, y, res)
    ev = verdict.evidence or {}
    if status == "Inconclusive":
        if space.gallery is None and verdict.claim != "exposed_by_fxy":
            res.fail("Inconclusive verdict on a finite space")
        return res
    if space.gallery is not None and "tail" in ev:
        _check_tail_json(ctx, ev["tail"])
    handler = {
        "extreme": _check_extreme,
        "denting": _check_denting,
        "property_Z": _check_Z,
        "strongly_exposed": _check_strongly_exposed,
        "exposed_by_fxy": _check_fxy,
    }.get(verdict.claim)
    if handler is None:
        res.fail(f"unknown claim {verdict.claim!r}")
        return res
    try:
        handler(ctx, status, ev)
    except (KeyError, TypeError, ValueError) as exc:
        res.fail(f"{verdict.claim}: malformed evidence ({exc!r})")
    return res


def check_row(space: MetricSpace, row) -> CheckResult:
    res = CheckResult()
    for v in row.verdicts():
        res.merge(check_verdict(space, v), f"{v.claim} {'/'.join(v.pair)}: ")
    if not row.chain_holds():
        res.fail(f"implication chain violated for {row.molecule}")
    return res


# -- per-claim checks ---------------------------------------------------------

def _check_tail_json(ctx: _Ctx, tail_json) -> None:
    space = ctx.space
    validate_tail_model(space)
    fam = family(space.gallery.name)
    cert = tail_certificate(space, ctx.x, ctx.y)
    if [bt.to_json(fam) for bt in cert.branches] != tail_json:
        ctx.res.fail("tail polynomials in evidence differ from the closed form")


def _segment_items(ctx: _Ctx, ev) -> None:
    items = ev.get("items") or []
    if not items:
        ctx.res.fail("refutation without a segment witness")
    for it in items:
        a, b = ctx.dists(it)
        if not ctx.eq(ctx.num(it["lhs"]), a + b) or not ctx.eq(ctx.num(it["rhs"]), ctx.dxy):
            ctx.res.fail(f"recorded values for {it['witness']} do not match distances")
        if not ctx.eq(a + b, ctx.dxy):
            ctx.res.fail(f"{it['witness']} is not on the segment")


def _truncation_strict(ctx: _Ctx) -> None:
    for z, a, b in ctx.others():
        if not ctx.lt(ctx.dxy, a + b):
            ctx.res.fail(f"{ctx.space.labels[z]} lies on the segment")


def _tail_positive(ctx: _Ctx) -> list:
    cert = tail_certificate(ctx.space, ctx.x, ctx.y)
    for bt in cert.branches:
        if not bt.excess.positive_on_open_closed(bt.s_max):
            ctx.res.fail(f"tail excess on {bt.branch} is not positive")
    return list(cert.branches)


def _check_extreme(ctx: _Ctx, status, ev) -> None:
    if status == "Refuted":
        _segment_items(ctx, ev)
        return
    _truncation_strict(ctx)
    for it in ev.get("items", []):
        a, b = ctx.dists(it)
        if not ctx.eq(ctx.num(it["lhs"]), a + b) or not ctx.eq(ctx.num(it["rhs"]), ctx.dxy):
            ctx.res.fail(f"recorded values for {it['witness']} do not match distances")
    if ctx.space.gallery is not None:
        _tail_positive(ctx)


def _check_denting(ctx: _Ctx, status, ev) -> None:
    if status == "Refuted":
        eps = ctx.num(ev["eps"])
        if not eps or eps <= 0:
            ctx.res.fail("refutation needs a positive eps")
            return
        if ev.get("eps_in_grid") and ev["eps"] not in ev.get("eps_grid", []):
            ctx.res.fail("eps claimed to be in the grid but is not")
        items = ev.get("items") or []
        if not items:
            ctx.res.fail("refutation without witnesses")
        prev = None
        for it in items:
            a, b = ctx.dists(it)
            e, m = a + b - ctx.dxy, min(a, b)
            if not ctx.eq(ctx.num(it["excess"]), e) or not ctx.eq(ctx.num(it["min_dist"]), m):
                ctx.res.fail(f"recorded values for {it['witness']} do not match distances")
            if not ctx.le(eps, m):
                ctx.res.fail(f"{it['witness']} is closer than eps to x or y")
            if prev is not None and not e < prev:
                ctx.res.fail("witness excesses are not strictly decreasing")
            prev = e
        if "limit" in ev:
            cert = tail_certificate(ctx.space, ctx.x, ctx.y)
            bt = next((b for b in cert.branches if b.branch == ev["limit"]["branch"]), None)
            if bt is None:
                ctx.res.fail("unknown tail branch in limit")
            else:
                if bt.excess.c0 != 0:
                    ctx.res.fail("tail excess does not tend to 0")
                if bt.qualifying_cutoff(eps) is not None:
                    ctx.res.fail("only finitely many tail points stay eps away")
        elif prev is None or not ctx.eq(prev, 0):
            ctx.res.fail("finite refutation needs a zero-excess witness")
        return

    _truncation_strict(ctx)
    cert = None
    if ctx.space.gallery is not None:
        _tail_positive(ctx)
        cert = tail_certificate(ctx.space, ctx.x, ctx.y)
        for bt in cert.branches:
            if not (bt.excess.c0 > 0 or bt.min_dist.c0 == 0):
                ctx.res.fail(f"branch {bt.branch} has excess -> 0 away from x and y")
    for row in ev.get("delta_table", []):
        eps, delta = ctx.num(row["eps"]), ctx.num(row["delta"])
        if not delta > 0:
            ctx.res.fail(f"delta({row['eps']}) is not positive")
        wit = row.get("witness")
        if wit not in (None, "tail"):
            a, b = ctx.dists({"witness": wit})
            if not ctx.eq(ctx.num(row["min_sum"]), a + b):
                ctx.res.fail(f"min_sum for eps {row['eps']} does not match {wit}")
        for z, a, b in ctx.others():
            if min(a, b) >= eps and (1 - delta) * (a + b) < ctx.dxy and not ctx.eq((1 - delta) * (a + b), ctx.dxy):
                ctx.res.fail(f"delta({row['eps']}) fails at {ctx.space.labels[z]}")
        if cert is not None:
            bound = cert.excess_lower_bound(to_fraction(row["eps"]))
            if bound is not None and (1 - delta) * (ctx.dxy + bound) < ctx.dxy:
                ctx.res.fail(f"delta({row['eps']}) fails on the tail")


def _check_Z_items(ctx: _Ctx, items, depth) -> None:
    seen = set()
    for it in items:
        n = int(it["n"])
        a, b = ctx.dists(it)
        lhs, rhs = a + b, ctx.dxy + min(a, b) / n
        if not ctx.eq(ctx.num(it["lhs"]), lhs) or not ctx.eq(ctx.num(it["rhs"]), rhs):
            ctx.res.fail(f"recorded values for n={n} do not match distances")
        if not ctx.le(lhs, rhs):
            ctx.res.fail(f"(Z) inequality fails for n={n} at {it['witness']}")
        seen.add(n)
    missing = set(range(1, depth + 1)) - seen
    if missing:
        ctx.res.fail(f"no (Z) witness for n in {sorted(missing)[:5]}")


def _check_Z(ctx: _Ctx, status, ev) -> None:
    depth = int(ev.get("depth", 0))
    if status == "Proven":
        _check_Z_items(ctx, ev.get("items", []), depth)
        if "schedule_items" in ev:
            _check_Z_items(ctx, ev["schedule_items"], depth)
        if ev.get("schedule") == "constant":
            a, b = ctx.dists(ev["items"][0])
            if not ctx.eq(a + b, ctx.dxy):
                ctx.res.fail("constant schedule needs a segment point")
        elif ctx.space.gallery is not None:
            cert = tail_certificate(ctx.space, ctx.x, ctx.y)
            bt = next((b for b in cert.branches if b.branch == ev["limit"]["branch"]), None)
            if bt is None or not (bt.min_dist.order() < bt.excess.order() < 3):
                ctx.res.fail("excess/min-distance does not tend to 0 on the claimed branch")
        else:
            ctx.res.fail("finite (Z) proof must use a segment point")
        return

    n_star = int(ev["n_star"])
    lb = ctx.num(ev["ratio_lower_bound"])
    if lb is None:
        if any(True for _ in ctx.others()):
            ctx.res.fail("missing ratio bound")
        return
    if not (lb > 0 and n_star * lb > 1):
        ctx.res.fail("ratio bound does not exclude n_star")
    for z, a, b in ctx.others():
        e, m = a + b - ctx.dxy, min(a, b)
        if e < lb * m and not ctx.eq(e, lb * m):
            ctx.res.fail(f"{ctx.space.labels[z]} has excess/min below the bound")
    if ctx.space.gallery is not None:
        from .extremal import _ratio_lower_bound

        cert = tail_certificate(ctx.space, ctx.x, ctx.y)
        for bt in cert.branches:
            r = _ratio_lower_bound(bt)
            if r is None or r < lb:
                ctx.res.fail(f"tail ratio on {bt.branch} not bounded by {ev['ratio_lower_bound']}")


def _check_strongly_exposed(ctx: _Ctx, status, ev) -> None:
    flipped = {"Proven": "Refuted", "Refuted": "Proven"}[status]
    _check_Z(ctx, flipped, ev)


def _check_fxy(ctx: _Ctx, status, ev) -> None:
    space = ctx.space
    f = build_f_xy(space, ctx.x, ctx.y)
    maxim = []
    for m in all_molecules(space):
        v = pair_molecule(f, m.x, m.y)
        if v > 1 + ctx.tol:
            ctx.res.fail("f_xy has norm above 1")
        if v >= 1 - ctx.tol:
            maxim.append(list(m.labels(space)))
    if maxim != ev.get("maximizers"):
        ctx.res.fail("maximizer list does not match recomputation")
    unique = maxim == [list(space.labels[i] for i in (ctx.x, ctx.y))]
    if unique != (status == "Proven"):
        ctx.res.fail("status disagrees with maximizer uniqueness")


def check_report(report: dict, space: MetricSpace) -> CheckResult:
    """Re-verify every verdict stored in a classify report."""
    from .extremal import Verdict

    res = CheckResult()
    for k, row in enumerate(report.get("rows", [])):
        for key in ("extreme", "exposed_by_fxy", "denting", "strongly_exposed"):
            if key in row:
                v = Verdict.from_json(row[key])
                res.merge(check_verdict(space, v), f"rows[{k}].{key}: ")
    return res

