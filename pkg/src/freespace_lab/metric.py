"""Pointed finite metric spaces.

A :class:`MetricSpace` is an immutable labelled distance matrix whose point 0
is the base point.  Distances are exact ``Fraction`` values, except for
snowflaked spaces whose distances are irrational; those hold floats and
compare with :data:`FLOAT_TOL`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence

from . import kernels
from .errors import EmptySpace, InvalidPair, InvalidParameter, MalformedInput
from .rational import exact_power, fmt, lcm_of_denominators, to_fraction

FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class GalleryInfo:
    name: str
    N: int
    params: tuple = ()


@dataclass(frozen=True, eq=False)
class MetricSpace:
    labels: tuple[str, ...]
    dist: tuple[tuple, ...]
    gallery: GalleryInfo | None = None
    exact: bool = True
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @classmethod
    def from_matrix(cls, labels: Sequence[str], matrix: Sequence[Sequence], gallery=None):
        """Build a space from any numeric matrix; values become Fractions
        unless they are floats, in which case the space is inexact."""
        labels = tuple(str(lab) for lab in labels)
        if len(set(labels)) != len(labels):
            raise MalformedInput("duplicate point labels", "$.points")
        if len(matrix) != len(labels) or any(len(r) != len(labels) for r in matrix):
            raise MalformedInput("matrix dimensions do not match point count", "$.d")
        inexact = any(isinstance(v, float) for row in matrix for v in row)
        if inexact:
            rows = tuple(tuple(float(v) for v in row) for row in matrix)
        else:
            rows = tuple(tuple(to_fraction(v) for v in row) for row in matrix)
        return cls(labels, rows, gallery=gallery, exact=not inexact)

    # -- basic accessors -------------------------------------------------
    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, MetricSpace):
            return NotImplemented
        return self.labels == other.labels and self.dist == other.dist

    def __hash__(self):
        return hash((self.labels, self.dist))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def base(self) -> int:
        return 0

    @property
    def kind(self) -> str:
        return "gallery" if self.gallery is not None else "finite"

    @property
    def tol(self):
        return 0 if self.exact else FLOAT_TOL

    def d(self, i: int, j: int):
        return self.dist[i][j]

    def index(self, point) -> int:
        """Resolve a label (or an in-range int index) to an index."""
        if isinstance(point, int) and not isinstance(point, bool):
            if 0 <= point < self.n:
                return point
            raise InvalidParameter(f"point index {point} out of range")
        try:
            return self._index[str(point)]
        except KeyError:
            raise InvalidParameter(f"unknown point {point!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def pairs(self):
        """Ordered pairs ``(x, y)``, ``x != y``, in index order."""
        return [(x, y) for x in range(self.n) for y in range(self.n) if x != y]

    def require_molecules(self):
        if self.n < 2:
            raise EmptySpace("space has only the base point; there are no molecules")

    def check_pair(self, x, y) -> tuple[int, int]:
        x, y = self.index(x), self.index(y)
        if x == y:
            raise InvalidPair(f"pair ({self.labels[x]}, {self.labels[y]}) has equal points")
        return x, y

    # -- derived matrices ------------------------------------------------
    @cached_property
    def scale(self) -> int:
        """Common denominator of all exact distances."""
        if not self.exact:
            return 1
        return lcm_of_denominators(v for row in self.dist for v in row)

    @cached_property
    def int_dist(self) -> tuple[tuple, ...]:
        """Integer matrix ``dist * scale`` (exact spaces) or the float
        matrix itself; kernels run on this."""
        if not self.exact:
            return self.dist
        k = self.scale
        return tuple(tuple(int(v * k) for v in row) for row in self.dist)

    def exact_dist(self) -> tuple[tuple[Fraction, ...], ...]:
        """Distances as Fractions; floats convert to their exact binary value."""
        if self.exact:
            return self.dist
        return tuple(tuple(Fraction(v) for v in row) for row in self.dist)

    def rationalized(self) -> "MetricSpace":
        if self.exact:
            return self
        return MetricSpace(self.labels, self.exact_dist(), gallery=self.gallery, exact=True)

    def restrict(self, count: int) -> "MetricSpace":
        """The subspace on the first ``count`` points (base included)."""
        rows = tuple(row[:count] for row in self.dist[:count])
        return MetricSpace(self.labels[:count], rows, gallery=None, exact=self.exact)


# -- operations ------------------------------------------------------------

def validate(space: MetricSpace) -> list[dict]:
    """Every violated metric axiom, as data.  Empty list means valid."""
    out = []
    D = space.dist
    n = space.n
    tol = space.tol
    for i in range(n):
        if D[i][i] != 0:
            out.append({"kind": "diagonal", "points": [space.labels[i]], "value": fmt(D[i][i])})
        for j in range(i + 1, n):
            if D[i][j] != D[j][i]:
                out.append({"kind": "asymmetric", "points": [space.labels[i], space.labels[j]]})
            if D[i][j] <= 0 or D[j][i] <= 0:
                out.append({"kind": "non-positive", "points": [space.labels[i], space.labels[j]]})
    for i, j, k in kernels.triangle_violations(space.int_dist, tol * space.scale if tol else 0):
        out.append({
            "kind": "triangle",
            "points": [space.labels[i], space.labels[j], space.labels[k]],
            "lhs": fmt(D[i][k]),
            "rhs": fmt(D[i][j] + D[j][k]),
        })
    return out


def metric_segment(space: MetricSpace, x, y) -> frozenset[int]:
    """Indices ``z`` with ``d(x,z) + d(z,y) == d(x,y)`` (within ``space.tol``
    for float spaces)."""
    x, y = space.check_pair(x, y)
    return frozenset(kernels.segment_members(space.int_dist, x, y, space.tol))


def segment_is_trivial(space: MetricSpace, x, y) -> bool:
    return len(metric_segment(space, x, y)) == 2


def snowflake(space: MetricSpace, p) -> MetricSpace:
    """The ``p``-snowflake ``(M, d**p)`` for ``0 < p < 1``.

    Exact when every distance has a rational ``p``-th power, otherwise all
    distances are floats.
    """
    p = to_fraction(p)
    if not 0 < p < 1:
        raise InvalidParameter(f"snowflake exponent must lie in (0, 1), got {p}")
    exact_rows = []
    if space.exact:
        for row in space.dist:
            vals = [exact_power(v, p) for v in row]
            if any(v is None for v in vals):
                exact_rows = None
                break
            exact_rows.append(tuple(vals))
    else:
        exact_rows = None
    if exact_rows is not None:
        return MetricSpace(space.labels, tuple(exact_rows), exact=True)
    pf = float(p)
    rows = tuple(tuple(float(v) ** pf if v else 0.0 for v in row) for row in space.dist)
    return MetricSpace(space.labels, rows, exact=False)


def square_space() -> MetricSpace:
    """Four points on a 4-cycle: sides 1, diagonals 2 (graph metric)."""
    return MetricSpace.from_matrix(
        ["0", "a", "b", "c"],
        [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]],
    )


def two_point_space(d=1) -> MetricSpace:
    return MetricSpace.from_matrix(["0", "a"], [[0, d], [d, 0]])


def random_space(rng: random.Random, n: int, mode: str | None = None, max_weight: int = 6) -> MetricSpace:
    """A random rational metric space on ``n`` points.

    ``mode="graph"`` takes shortest-path distances of random integer edge
    weights (many non-trivial segments); ``mode="band"`` draws distances
    from ``[1, 2]`` with small denominators (always a metric, segments are
    mostly trivial).  ``None`` picks one at random.
    """
    if mode is None:
        mode = rng.choice(("graph", "band", "graph_frac"))
    D = [[Fraction(0)] * n for _ in range(n)]
    if mode in ("graph", "graph_frac"):
        for i in range(n):
            for j in range(i + 1, n):
                w = Fraction(rng.randint(1, max_weight))
                if mode == "graph_frac":
                    w /= rng.choice((1, 2, 3))
                D[i][j] = D[j][i] = w
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if D[i][k] + D[k][j] < D[i][j]:
                        D[i][j] = D[i][k] + D[k][j]
    elif mode == "band":
        for i in range(n):
            for j in range(i + 1, n):
                den = rng.choice((1, 2, 3, 4))
                D[i][j] = D[j][i] = Fraction(rng.randint(den, 2 * den), den)
    else:
        raise InvalidParameter(f"unknown random space mode {mode!r}")
    labels = ["0"] + [f"p{i}" for i in range(1, n)]
    return MetricSpace(tuple(labels), tuple(tuple(r) for r in D))


# -- JSON ------------------------------------------------------------------

def space_to_json(space: MetricSpace) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": space.kind,
        "points": list(space.labels),
        "base": space.labels[0],
        "d": [[fmt(v) for v in row] for row in space.dist],
    }
    if space.gallery is not None:
        out["gallery"] = {"name": space.gallery.name, "N": space.gallery.N}
    return out


def space_from_json(data: Any) -> MetricSpace:
    """Parse the space file format.  Gallery files are regenerated from their
    closed form and must agree with any explicit matrix they carry."""
    if not isinstance(data, dict):
        raise MalformedInput("space file must be a JSON object")
    kind = data.get("kind", "finite")
    if kind not in ("finite", "gallery"):
        raise MalformedInput(f"unknown kind {kind!r}", "$.kind")
    if kind == "gallery":
        from .gallery import gallery

        info = data.get("gallery")
        if not isinstance(info, dict) or "name" not in info or "N" not in info:
            raise MalformedInput("gallery spaces need {name, N}", "$.gallery")
        try:
            space = gallery(info["name"], int(info["N"]))
        except MalformedInput:
            raise
        except Exception as exc:
            raise MalformedInput(str(exc), "$.gallery") from exc
        if "d" in data:
            explicit = _parse_matrix(data, len(space))
            if explicit != space.dist or list(data.get("points", space.labels)) != list(space.labels):
                raise MalformedInput("explicit matrix disagrees with the gallery closed form", "$.d")
        return space

    points = data.get("points")
    if not isinstance(points, list) or not points:
        raise MalformedInput("points must be a non-empty list of labels", "$.points")
    points = [str(p) for p in points]
    base = str(data.get("base", points[0]))
    if base not in points:
        raise MalformedInput(f"base {base!r} is not a listed point", "$.base")
    rows = _parse_matrix(data, len(points))
    for i in range(len(points)):
        for j in range(len(points)):
            if rows[i][j] != rows[j][i]:
                raise MalformedInput("distance matrix is not symmetric", f"$.d[{i}][{j}]")
    # move the base to index 0
    b = points.index(base)
    order = [b] + [i for i in range(len(points)) if i != b]
    labels = [points[i] for i in order]
    matrix = [[rows[i][j] for j in order] for i in order]
    return MetricSpace.from_matrix(labels, matrix)


def _parse_matrix(data, n):
    d = data.get("d")
    if not isinstance(d, list) or len(d) != n:
        raise MalformedInput(f"d must be a {n}x{n} matrix", "$.d")
    rows = []
    for i, row in enumerate(d):
        if not isinstance(row, list) or len(row) != n:
            raise MalformedInput(f"row must have {n} entries", f"$.d[{i}]")
        parsed = []
        for j, v in enumerate(row):
            try:
                parsed.append(to_fraction(v))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise MalformedInput(f"not a rational: {v!r}", f"$.d[{i}][{j}]") from exc
        rows.append(tuple(parsed))
    return tuple(rows)


def load_json_text(text: str):
    from decimal import Decimal

    return json.loads(text, parse_float=Decimal)
