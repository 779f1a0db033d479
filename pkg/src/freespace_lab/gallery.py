"""Countable example spaces, truncated, with closed-form tails.

Each family knows its distance in closed form for *every* index, so
statements about the infinite space can be made from a finite truncation
plus a tail model.  Along each tail branch the distance from a fixed
truncated point ``p`` to the ``t``-th tail point is a quadratic in
``s = 1/t``::

    d(p, z_t) = A + B*s + C*s**2        for all t >= t_first

That is what :class:`TailCertificate` packages for a pair ``(x, y)``.

Families (the base point is always labelled ``"0"``):

``ag``        c0 points 0, x1 = 2e1, xn = e1 + (1+1/n)en, sup-norm distances
``tree_omega`` points of a real tree: 0=(0,0), xinf=(1,0), xn=(1-1/n, 1/n^2)
``star``      centre 0 joined to leaves 1, 2, ... by unit edges
``nondual``   0, a, b and 1, 2, ... with d(0|a|b, n) = 1+1/n, d(n, m) = 1
``two_row``   {0,1} x N, distance 2 across rows and 1 within a row
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable

from .errors import ConsistencyError, InvalidGallery, InvalidParameter
from .metric import GalleryInfo, MetricSpace

F = Fraction
ONE = F(1)


# -- quadratics in s on an interval ----------------------------------------

@dataclass(frozen=True)
class Quad:
    """``c0 + c1*s + c2*s**2`` with rational coefficients."""

    c0: Fraction
    c1: Fraction = F(0)
    c2: Fraction = F(0)

    def __call__(self, s) -> Fraction:
        return self.c0 + self.c1 * s + self.c2 * s * s

    def __add__(self, other: "Quad") -> "Quad":
        return Quad(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def shift(self, k) -> "Quad":
        return Quad(self.c0 + k, self.c1, self.c2)

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)

    def order(self) -> int:
        """Index of the first non-zero coefficient (3 for the zero poly)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return 3

    def leading(self) -> Fraction:
        k = self.order()
        return self.coeffs[k] if k < 3 else F(0)

    def divide_s(self, k: int) -> "Quad":
        """Divide by ``s**k``; the low coefficients must vanish."""
        c = self.coeffs
        if any(c[i] != 0 for i in range(k)):
            raise ValueError("polynomial not divisible by that power of s")
        c = c[k:] + (F(0),) * k
        return Quad(*c)

    def critical(self, lo, hi) -> list[Fraction]:
        pts = [F(lo), F(hi)]
        if self.c2 != 0:
            v = -self.c1 / (2 * self.c2)
            if lo < v < hi:
                pts.append(v)
        return pts

    def min_on(self, lo, hi) -> Fraction:
        return min(self(s) for s in self.critical(lo, hi))

    def max_on(self, lo, hi) -> Fraction:
        return max(self(s) for s in self.critical(lo, hi))

    def positive_on_open_closed(self, hi) -> bool:
        """``self(s) > 0`` for every ``s`` in ``(0, hi]``."""
        k = self.order()
        if k == 3 or self.leading() < 0:
            return False
        reduced = self.divide_s(k)
        # reduced(0) > 0; positivity on [0, hi] is now a closed-interval check
        return reduced.min_on(0, hi) > 0

    def negative_below(self) -> Fraction | None:
        """A rational ``s0 > 0`` with ``self(s) < 0`` on ``(0, s0)``, or
        ``None`` when the polynomial is not eventually negative as s -> 0+."""
        a, b, c = self.coeffs
        if a < 0:
            spread = abs(b) + abs(c)
            return ONE if spread == 0 else min(ONE, -a / spread)
        if a == 0 and b < 0:
            return ONE if c <= 0 else min(ONE, -b / c)
        if a == 0 and b == 0 and c < 0:
            return ONE
        return None

    def to_json(self) -> list[str]:
        from .rational import fmt

        return [fmt(v) for v in self.coeffs]


def lex_min(p: Quad, q: Quad) -> Quad:
    """The polynomial that is the smaller one for all small enough s > 0."""
    return p if p.coeffs <= q.coeffs else q


# -- families --------------------------------------------------------------

Key = Hashable


class Family:
    name = ""
    #: which theorem makes "segment trivial => extreme" valid for the
    #: infinite space: "uniformly_discrete_bounded" or "compact"
    regime = "uniformly_discrete_bounded"
    branches: tuple[str, ...] = ("main",)

    def base_key(self) -> Key:
        return "0"

    def family_key(self, k: int) -> Key:
        raise NotImplementedError

    def label(self, key: Key) -> str:
        raise NotImplementedError

    def distance(self, p: Key, q: Key) -> Fraction:
        raise NotImplementedError

    def tail_key(self, branch: str, t: int) -> Key:
        raise NotImplementedError

    def tail_index(self, key: Key) -> tuple[str, int] | None:
        """(branch, t) when ``key`` lies on a tail branch."""
        raise NotImplementedError

    def tail_coeffs(self, branch: str, p: Key) -> Quad:
        raise NotImplementedError

    def schedule(self, x: Key, y: Key) -> Callable[[int], Key] | None:
        """A shipped property-(Z) witness schedule for the unordered pair."""
        return None

    # derived helpers
    def keys(self, N: int) -> list[Key]:
        return [self.base_key()] + [self.family_key(k) for k in range(1, N + 1)]

    def first_tail_index(self, branch: str, N: int) -> int:
        used = [self.tail_index(k) for k in self.keys(N)]
        ts = [t for b_t in used if b_t is not None for b, t in [b_t] if b == branch]
        t = self._branch_start(branch)
        while t in ts:
            t += 1
        return t

    def _branch_start(self, branch: str) -> int:
        return 1

    def d(self, p: Key, q: Key) -> Fraction:
        return F(0) if p == q else self.distance(p, q)


class AG(Family):
    name = "ag"
    regime = "uniformly_discrete_bounded"

    def family_key(self, k):
        return ("x", k)

    def label(self, key):
        return "0" if key == "0" else f"x{key[1]}"

    def distance(self, p, q):
        if p == "0" or q == "0":
            other = q if p == "0" else p
            n = other[1]
            return F(2) if n == 1 else 1 + F(1, n)
        n, m = p[1], q[1]
        if n == 1 or m == 1:
            k = m if n == 1 else n
            return 1 + F(1, k)
        return max(1 + F(1, n), 1 + F(1, m))

    def tail_key(self, branch, t):
        return ("x", t)

    def tail_index(self, key):
        return None if key == "0" else ("main", key[1])

    def tail_coeffs(self, branch, p):
        if p == "0" or p == ("x", 1):
            return Quad(ONE, ONE)
        return Quad(1 + F(1, p[1]))

    def schedule(self, x, y):
        if {x, y} == {"0", ("x", 1)}:
            return lambda n: ("x", 2 * n)
        return None


class TreeOmega(Family):
    name = "tree_omega"
    regime = "compact"

    def family_key(self, k):
        return "inf" if k == 1 else ("x", k)

    def label(self, key):
        if key == "0":
            return "0"
        if key == "inf":
            return "xinf"
        return f"x{key[1]}"

    def _coord(self, key):
        # (position along the base segment, height of the spike)
        if key == "0":
            return F(0), F(0)
        if key == "inf":
            return ONE, F(0)
        n = key[1]
        return 1 - F(1, n), F(1, n * n)

    def distance(self, p, q):
        (a, h), (b, k) = self._coord(p), self._coord(q)
        if a == b:
            return abs(h - k)
        return abs(a - b) + h + k

    def tail_key(self, branch, t):
        return ("x", t)

    def tail_index(self, key):
        return ("main", key[1]) if isinstance(key, tuple) else None

    def _branch_start(self, branch):
        return 2

    def tail_coeffs(self, branch, p):
        if p == "0":
            return Quad(ONE, -ONE, ONE)
        if p == "inf":
            return Quad(F(0), ONE, ONE)
        n = p[1]
        return Quad(F(1, n) + F(1, n * n), -ONE, ONE)

    def schedule(self, x, y):
        if {x, y} == {"0", "inf"}:
            return lambda n: ("x", 2 * n)
        return None


class Star(Family):
    name = "star"

    def family_key(self, k):
        return ("leaf", k)

    def label(self, key):
        return "0" if key == "0" else str(key[1])

    def distance(self, p, q):
        return ONE if "0" in (p, q) else F(2)

    def tail_key(self, branch, t):
        return ("leaf", t)

    def tail_index(self, key):
        return None if key == "0" else ("main", key[1])

    def tail_coeffs(self, branch, p):
        return Quad(ONE) if p == "0" else Quad(F(2))


class NonDual(Family):
    name = "nondual"
    _order = ("a", "b")

    def family_key(self, k):
        return self._order[k - 1] if k <= 2 else ("n", k - 2)

    def label(self, key):
        return key if isinstance(key, str) else str(key[1])

    def distance(self, p, q):
        if isinstance(p, str) and isinstance(q, str):
            return F(2)
        if isinstance(p, tuple) and isinstance(q, tuple):
            return ONE
        n = p[1] if isinstance(p, tuple) else q[1]
        return 1 + F(1, n)

    def tail_key(self, branch, t):
        return ("n", t)

    def tail_index(self, key):
        return ("main", key[1]) if isinstance(key, tuple) else None

    def tail_coeffs(self, branch, p):
        return Quad(ONE, ONE) if isinstance(p, str) else Quad(ONE)


class TwoRow(Family):
    name = "two_row"
    branches = ("row0", "row1")

    def base_key(self):
        return (0, 1)

    def family_key(self, k):
        if k % 2 == 1:
            return (1, (k + 1) // 2)
        return (0, k // 2 + 1)

    def label(self, key):
        return "0" if key == (0, 1) else f"{key[0]}:{key[1]}"

    def distance(self, p, q):
        return F(2) if p[0] != q[0] else ONE

    def tail_key(self, branch, t):
        return (0 if branch == "row0" else 1, t)

    def tail_index(self, key):
        return (f"row{key[0]}", key[1])

    def tail_coeffs(self, branch, p):
        row = 0 if branch == "row0" else 1
        return Quad(ONE) if p[0] == row else Quad(F(2))


FAMILIES: dict[str, Family] = {
    fam.name: fam for fam in (AG(), TreeOmega(), Star(), NonDual(), TwoRow())
}


def family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise InvalidGallery(f"unknown gallery {name!r}; choose from {sorted(FAMILIES)}") from None


def space_keys(space: MetricSpace) -> list[Key]:
    if space.gallery is None:
        raise InvalidParameter("not a gallery space")
    return family(space.gallery.name).keys(space.gallery.N)


@lru_cache(maxsize=64)
def gallery(name: str, N: int) -> MetricSpace:
    """The truncation of a gallery family to its base point plus ``N``
    family points.  Tail certificates are validated against it."""
    fam = family(name)
    if not isinstance(N, int) or N < 3:
        raise InvalidParameter(f"gallery truncation N must be an integer >= 3, got {N!r}")
    keys = fam.keys(N)
    labels = [fam.label(k) for k in keys]
    matrix = [[fam.d(p, q) for q in keys] for p in keys]
    space = MetricSpace.from_matrix(labels, matrix, gallery=GalleryInfo(name, N))
    validate_tail_model(space)
    return space


def validate_tail_model(space: MetricSpace) -> None:
    """Check every shipped tail polynomial against the explicit matrix (for
    truncated points on the branch beyond the polynomial's validity start)
    and against the closed form for a stretch of tail indices."""
    fam = family(space.gallery.name)
    keys = space_keys(space)
    N = space.gallery.N
    for branch in fam.branches:
        t0 = fam.first_tail_index(branch, N)
        for i, p in enumerate(keys):
            poly = fam.tail_coeffs(branch, p)
            for t in range(t0, t0 + 12):
                z = fam.tail_key(branch, t)
                if poly(F(1, t)) != fam.d(p, z):
                    raise ConsistencyError(
                        f"{fam.name}: tail polynomial for {fam.label(p)} on {branch} wrong at t={t}"
                    )
            # agreement with the explicit matrix on truncated branch points
            pt = fam.tail_index(p)
            for j, q in enumerate(keys):
                qt = fam.tail_index(q)
                if qt is None or qt[0] != branch or j == i:
                    continue
                if pt is not None and pt[0] == branch and qt[1] <= pt[1]:
                    continue
                if qt[1] < _validity_start(fam, branch, p):
                    continue
                if poly(F(1, qt[1])) != space.dist[i][j]:
                    raise ConsistencyError(
                        f"{fam.name}: tail polynomial for {fam.label(p)} disagrees with matrix at {fam.label(q)}"
                    )


def _validity_start(fam: Family, branch: str, p: Key) -> int:
    pt = fam.tail_index(p)
    start = fam._branch_start(branch)
    if pt is not None and pt[0] == branch:
        start = max(start, pt[1] + 1)
    return start


# -- tail certificates -------------------------------------------------------

@dataclass(frozen=True)
class BranchTail:
    branch: str
    t_first: int
    excess: Quad  # d(x,z_t) + d(z_t,y) - d(x,y)
    to_x: Quad  # d(x, z_t)
    to_y: Quad  # d(y, z_t)

    @property
    def s_max(self) -> Fraction:
        return F(1, self.t_first)

    @property
    def min_dist(self) -> Quad:
        """The smaller of the two distances for all small s."""
        return lex_min(self.to_x, self.to_y)

    def qualifying_cutoff(self, eps) -> int | None:
        """Largest tail index that can have ``min(d(x,z), d(y,z)) >= eps``,
        or ``None`` if arbitrarily far tail points qualify."""
        s0 = None
        for poly in (self.to_x, self.to_y):
            cand = poly.shift(-eps).negative_below()
            if cand is not None:
                s0 = cand if s0 is None else max(s0, cand)
        if s0 is None:
            return None
        # t > 1/s0  =>  s < s0  =>  that distance < eps
        return int(1 / s0)

    def to_json(self, fam: Family) -> dict:
        from .rational import fmt

        return {
            "branch": self.branch,
            "t_first": self.t_first,
            "first_tail_point": fam.label(fam.tail_key(self.branch, self.t_first)),
            "excess": self.excess.to_json(),
            "dist_x": self.to_x.to_json(),
            "dist_y": self.to_y.to_json(),
            "s_max": fmt(self.s_max),
        }


@dataclass(frozen=True)
class TailCertificate:
    family: str
    x: int
    y: int
    branches: tuple[BranchTail, ...]

    def excess_lower_bound(self, eps, enumerate_limit: int = 100000):
        """Rational lower bound on the excess of tail points ``z`` with
        ``min(d(x,z), d(y,z)) >= eps``; ``None`` when no tail point qualifies.
        Returns ``0`` when qualifying tail points have excess tending to 0."""
        eps = F(eps)
        fam = family(self.family)
        best = None
        for bt in self.branches:
            cutoff = bt.qualifying_cutoff(eps)
            if cutoff is None:
                bound = bt.excess.min_on(0, bt.s_max)
                bound = max(bound, F(0))
            else:
                if cutoff - bt.t_first > enumerate_limit:
                    bound = max(bt.excess.min_on(0, bt.s_max), F(0))
                else:
                    bound = None
                    for t in range(bt.t_first, cutoff + 1):
                        s = F(1, t)
                        if min(bt.to_x(s), bt.to_y(s)) >= eps:
                            e = bt.excess(s)
                            bound = e if bound is None else min(bound, e)
            if bound is not None:
                best = bound if best is None else min(best, bound)
        del fam
        return best


def tail_certificate(space: MetricSpace, x: int, y: int) -> TailCertificate:
    fam = family(space.gallery.name)
    keys = space_keys(space)
    kx, ky = keys[x], keys[y]
    dxy = space.dist[x][y]
    out = []
    for branch in fam.branches:
        t0 = fam.first_tail_index(branch, space.gallery.N)
        px = fam.tail_coeffs(branch, kx)
        py = fam.tail_coeffs(branch, ky)
        out.append(BranchTail(branch, t0, (px + py).shift(-dxy), px, py))
    return TailCertificate(fam.name, x, y, tuple(out))


def tail_point_distances(space: MetricSpace, x: int, y: int, branch: str, t: int):
    """Closed-form ``(d(x,z), d(z,y), d(x,y))`` for tail point ``z_t``."""
    fam = family(space.gallery.name)
    keys = space_keys(space)
    z = fam.tail_key(branch, t)
    return fam.d(keys[x], z), fam.d(z, keys[y]), space.dist[x][y]
