"""Lipschitz functions on a finite pointed space.

Norms, pairings with free-space elements, the peak function ``f_xy`` and
the functions built from it, and McShane extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from . import kernels
from .elements import FreeElement, LipFunction, Molecule, all_molecules
from .errors import EmptySpace, InvalidParameter, SpaceMismatch
from .metric import MetricSpace
from .rational import to_fraction


class LipNorm(NamedTuple):
    value: Fraction
    pair: tuple[int, int] | None


def lip_norm(f: LipFunction) -> LipNorm:
    """Best Lipschitz constant and the first (index-order) pair attaining it."""
    space = f.space
    if space.n < 2:
        raise EmptySpace("Lipschitz norm needs at least two points")
    num, den, i, j = kernels.max_ratio(f.values, space.int_dist)
    if i < 0:
        return LipNorm(Fraction(0), None)
    value = num * space.scale / den
    if isinstance(value, int):
        value = Fraction(value)
    return LipNorm(value, (i, j))


def pair(f: LipFunction, mu) -> Fraction:
    """``<f, mu>`` for a FreeElement or a Molecule."""
    if isinstance(mu, Molecule):
        return pair_molecule(f, mu.x, mu.y)
    if f.space != mu.space:
        raise SpaceMismatch("function and element live on different spaces")
    total = Fraction(0)
    vals = f.values
    for i, c in mu.coeffs:
        total += c * vals[i]
    return total


def pair_molecule(f: LipFunction, x: int, y: int):
    return (f.values[x] - f.values[y]) / f.space.dist[x][y]


def distance_function(space: MetricSpace, x) -> LipFunction:
    """``t -> d(t, x) - d(0, x)``."""
    x = space.index(x)
    return LipFunction.from_values(space, [space.dist[t][x] for t in range(space.n)])


def build_f_xy(space: MetricSpace, x, y) -> LipFunction:
    """The peak function

        f_xy(t) = d(x,y)/2 * (d(t,y) - d(t,x)) / (d(t,y) + d(t,x)),

    shifted to vanish at the base point."""
    x, y = space.check_pair(x, y)
    D = space.dist
    half = D[x][y] / 2
    vals = [half * (D[t][y] - D[t][x]) / (D[t][y] + D[t][x]) for t in range(space.n)]
    return LipFunction.from_values(space, vals)


@dataclass(frozen=True)
class PartialFunction:
    """Values on a subset of the points, to be extended."""

    space: MetricSpace
    values: Mapping[int, object]

    def lipschitz_constant(self):
        items = sorted(self.values.items())
        D = self.space.dist
        best = Fraction(0)
        for a, (i, fi) in enumerate(items):
            for j, fj in items[a + 1:]:
                r = abs(fi - fj) / D[i][j]
                if r > best:
                    best = r
        return best


def mcshane_extend(partial: PartialFunction, shift: bool = True):
    """Extension ``F(t) = min_s partial(s) + L d(t, s)`` with ``L`` the
    Lipschitz constant of ``partial``; agrees with it on its domain and has
    the same constant.  With ``shift`` the result is the LipFunction
    ``F - F(base)``; otherwise the raw tuple of values of ``F``."""
    if not partial.values:
        raise InvalidParameter("cannot extend a function with empty domain")
    space = partial.space
    L = partial.lipschitz_constant()
    D = space.dist
    items = list(partial.values.items())
    vals = []
    for t in range(space.n):
        if t in partial.values:
            vals.append(partial.values[t])
        else:
            vals.append(min(v + L * D[t][s] for s, v in items))
    if shift:
        return LipFunction.from_values(space, vals)
    return tuple(vals)


def closed_ball(space: MetricSpace, center: int, radius) -> list[int]:
    return [t for t in range(space.n) if space.dist[center][t] <= radius]


def build_fdent(space: MetricSpace, x, y, eps, tau, rescale: bool = True) -> LipFunction:
    """A norm-one function almost peaking at ``m_xy`` that is uniformly below
    one on molecules with both ends near ``x`` (or both near ``y``).

    On the balls ``B(x, eps)`` and ``B(y, eps)`` of the space normalised to
    ``d(x,y) = 1``::

        f(t) = (tau + (1-tau) d(y,t)) / (1 + 4 eps tau)   on B(x, eps)
        f(t) = (1-tau) d(y,t) / (1 + 4 eps tau)           on B(y, eps)

    extended by McShane, base-shifted and scaled back by ``d(x,y)`` (so all
    molecule pairings are the normalised ones).  With ``rescale=False`` the
    caller must supply a pair at distance 1.
    """
    x, y = space.check_pair(x, y)
    eps, tau = to_fraction(eps), to_fraction(tau)
    if not 0 < eps < Fraction(1, 4):
        raise InvalidParameter(f"eps must lie in (0, 1/4), got {eps}")
    if not 0 < tau < 1:
        raise InvalidParameter(f"tau must lie in (0, 1), got {tau}")
    dxy = space.dist[x][y]
    if dxy != 1 and not rescale:
        raise InvalidParameter("d(x, y) must be 1 unless rescale=True")
    D = space.dist
    ball_x = [t for t in range(space.n) if D[x][t] <= eps * dxy]
    ball_y = [t for t in range(space.n) if D[y][t] <= eps * dxy]
    if set(ball_x) & set(ball_y):
        raise InvalidParameter("balls B(x, eps) and B(y, eps) intersect")
    k = 1 / (1 + 4 * eps * tau)
    partial = {}
    for t in ball_x:
        partial[t] = k * (tau + (1 - tau) * D[y][t] / dxy) * dxy
    for t in ball_y:
        partial[t] = k * (1 - tau) * D[y][t] / dxy * dxy
    return mcshane_extend(PartialFunction(space, partial))


def g_weight_bound(space: MetricSpace, x, y, z):
    """Largest ``w`` for which ``f_xy + w * 1_z`` is still 1-Lipschitz by
    the excess argument: ``(1 - eta) * (d(x,z) + d(z,y)) = d(x,y)`` defines
    ``eta``, and ``w = eta * min_{u != z} d(u, z)``."""
    x, y = space.check_pair(x, y)
    z = space.index(z)
    if z in (x, y):
        raise InvalidParameter("z must differ from x and y")
    D = space.dist
    eta = 1 - D[x][y] / (D[x][z] + D[z][y])
    theta = min(D[z][u] for u in range(space.n) if u != z)
    return eta * theta


def build_g(space: MetricSpace, x, y, z, eps) -> LipFunction:
    """``f_xy + eps * 1_{z}`` (base-shifted), for ``0 <= eps <=
    g_weight_bound(x, y, z)``; it keeps norm at most one and still pairs to
    one with ``m_xy``."""
    x, y = space.check_pair(x, y)
    z = space.index(z)
    eps = to_fraction(eps) if space.exact else eps
    bound = g_weight_bound(space, x, y, z)
    if eps < 0 or eps > bound:
        raise InvalidParameter(f"eps must lie in [0, {bound}] for this z, got {eps}")
    f = build_f_xy(space, x, y)
    vals = list(f.values)
    vals[z] += eps
    return LipFunction.from_values(space, vals)


def slice_molecules(f: LipFunction, alpha) -> list[Molecule]:
    """Molecules ``m_uv`` with ``<f, m_uv> > 1 - alpha``, in index order."""
    if not 0 < alpha <= 1:
        raise InvalidParameter(f"alpha must lie in (0, 1], got {alpha}")
    level = 1 - alpha
    return [m for m in all_molecules(f.space) if pair_molecule(f, m.x, m.y) > level]
