"""The Kantorovich-Rubinstein norm on ``F(M)`` for finite ``M``.

Two independent exact routes:

* :func:`kr_norm_dual` maximises ``<f, mu>`` over 1-Lipschitz ``f`` with the
  rational simplex in :mod:`freespace_lab.lp`;
* :func:`kr_norm_primal` solves the min-cost transport problem by successive
  shortest paths on the complete graph, in scaled integer arithmetic.

They must agree exactly on every input.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from . import lp
from .elements import FreeElement, LipFunction, Molecule
from .errors import ConsistencyError, InvalidParameter
from .lipschitz import pair, slice_molecules
from .metric import MetricSpace
from .rational import lcm_of_denominators


class DualResult(NamedTuple):
    value: Fraction
    witness: LipFunction


class PrimalResult(NamedTuple):
    value: Fraction
    plan: dict  # (u, v) -> mass moved from u to v


def kr_norm_dual(mu: FreeElement) -> DualResult:
    """``sup { <f, mu> : ||f||_L <= 1, f(0) = 0 }`` as an exact LP.

    Substituting ``g(u) = f(u) + d(u, 0) >= 0`` turns every constraint
    right-hand side into ``d(u,v) + d(u,0) - d(v,0) >= 0``, so the origin is
    feasible and no phase 1 is needed.
    """
    space = mu.space
    n = space.n
    if n < 2 or mu.is_zero():
        return DualResult(Fraction(0), LipFunction.zero(space))
    D = space.exact_dist()
    m = n - 1
    A, b = [], []
    for u in range(1, n):
        for v in range(1, n):
            if u == v:
                continue
            row = [0] * m
            row[u - 1] = 1
            row[v - 1] = -1
            A.append(row)
            b.append(D[u][v] + D[u][0] - D[v][0])
        row = [0] * m
        row[u - 1] = 1
        A.append(row)
        b.append(2 * D[u][0])
    c = mu.dense()
    res = lp.maximize(c, A, b)
    if not res.ok:
        raise ConsistencyError(f"KR dual LP ended with status {res.status}")
    offset = sum((c[u - 1] * D[u][0] for u in range(1, n)), Fraction(0))
    values = [Fraction(0)] + [res.x[u - 1] - D[u][0] for u in range(1, n)]
    return DualResult(res.value - offset, LipFunction(space, tuple(values)))


def kr_norm_primal(mu: FreeElement) -> PrimalResult:
    """Minimum transport cost ``sum c(u,v) d(u,v)`` over flows ``c >= 0``
    whose divergence is ``mu`` (base coefficient included)."""
    space = mu.space
    n = space.n
    full = mu.full_measure()
    if mu.is_zero():
        return PrimalResult(Fraction(0), {})
    k = lcm_of_denominators(full.values())
    excess = [0] * n
    for i, c in full.items():
        excess[i] = int(c * k)
    D = space.rationalized().int_dist
    scale = space.rationalized().scale
    flow = [[0] * n for _ in range(n)]

    guard = 0
    while any(e > 0 for e in excess):
        guard += 1
        if guard > 10 * n * n + 100:
            raise ConsistencyError("successive shortest paths failed to terminate")
        dist, prev = _bellman_ford(D, flow, excess)
        sinks = [t for t in range(n) if excess[t] < 0 and dist[t] is not None]
        if not sinks:
            raise ConsistencyError("no augmenting path although supply remains")
        t = min(sinks, key=lambda v: (dist[v], v))
        path = []
        v = t
        while prev[v] is not None:
            path.append((prev[v], v))
            v = prev[v]
        s = v
        amount = min(excess[s], -excess[t])
        for u, w in path:
            if flow[w][u] > 0:  # travelling a reverse arc first
                amount = min(amount, flow[w][u])
        for u, w in reversed(path):
            back = min(flow[w][u], amount)
            flow[w][u] -= back
            flow[u][w] += amount - back
        excess[s] -= amount
        excess[t] += amount

    total = 0
    plan = {}
    for u in range(n):
        for v in range(n):
            if flow[u][v]:
                total += flow[u][v] * D[u][v]
                plan[(u, v)] = Fraction(flow[u][v], k)
    return PrimalResult(Fraction(total, k * scale), plan)


def _bellman_ford(D, flow, excess):
    """Shortest residual distances from the set of supply nodes.

    Forward arcs exist between all pairs at cost ``D[u][v]``; the reverse of
    a loaded arc costs ``-D[u][v]``.  Residual reverse arcs are preferred
    when they give a strictly shorter path.
    """
    n = len(D)
    dist = [0 if excess[v] > 0 else None for v in range(n)]
    prev = [None] * n
    for _ in range(n):
        changed = False
        for u in range(n):
            du = dist[u]
            if du is None:
                continue
            Du = D[u]
            for v in range(n):
                if v == u:
                    continue
                cost = -Du[v] if flow[v][u] > 0 else Du[v]
                cand = du + cost
                if dist[v] is None or cand < dist[v]:
                    dist[v] = cand
                    prev[v] = u
                    changed = True
        if not changed:
            break
    return dist, prev


def kr_norm(mu: FreeElement) -> Fraction:
    return kr_norm_primal(mu).value


def molecule_distance(space: MetricSpace, m1: Molecule, m2: Molecule) -> Fraction:
    """Exact ``||m1 - m2||``."""
    if m1 == m2:
        return Fraction(0)
    return kr_norm_primal(m1.element(space) - m2.element(space)).value


def molecule_distance_bound(space: MetricSpace, m1: Molecule, m2: Molecule) -> Fraction:
    """``2 (d(x,u) + d(y,v)) / d(x,y)`` for ``m1 = m_xy``, ``m2 = m_uv``."""
    D = space.exact_dist()
    return 2 * (D[m1.x][m2.x] + D[m1.y][m2.y]) / D[m1.x][m1.y]


def slice_diameter(space: MetricSpace, f: LipFunction, alpha, restrict_to_molecules: bool = True,
                   vertices: list[Molecule] | None = None) -> Fraction:
    """Diameter of the open slice ``{mu in B : <f, mu> > 1 - alpha}``.

    Restricted to molecules it is the largest pairwise molecule distance
    among :func:`slice_molecules`.  Otherwise the slice closure is the
    polytope ``conv(V) ∩ {f >= 1 - alpha}``; its vertices are among the
    ball's vertices on the good side and the points where segments between
    ball vertices cross the level set, and a norm attains its maximum over
    a polytope at a pair of vertices, so the diameter is the largest
    pairwise distance in that finite candidate set.
    """
    if not 0 < alpha <= 1:
        raise InvalidParameter(f"alpha must lie in (0, 1], got {alpha}")
    if restrict_to_molecules:
        ms = slice_molecules(f, alpha)
        best = Fraction(0)
        for a, b in combinations(ms, 2):
            best = max(best, molecule_distance(space, a, b))
        return best

    if vertices is None:
        from .extremal import oracle_extreme_points

        vertices = oracle_extreme_points(space)
    level = 1 - Fraction(alpha)
    elems = [m.element(space) for m in vertices]
    vals = [pair(f, e) for e in elems]
    if not vals or max(vals) <= level:
        return Fraction(0)
    cand = {}
    for e, v in zip(elems, vals):
        if v >= level:
            cand[e.coeffs] = e
    for e1, v1 in zip(elems, vals):
        if v1 <= level:
            continue
        for e2, v2 in zip(elems, vals):
            if v2 >= level:
                continue
            t = (level - v2) / (v1 - v2)
            w = e2 + (e1 - e2).scaled(t)
            cand[w.coeffs] = w
    pts = list(cand.values())
    best = Fraction(0)
    for p, q in combinations(pts, 2):
        d = kr_norm_primal(p - q).value
        if d > best:
            best = d
            if best == 2:
                break
    return best
