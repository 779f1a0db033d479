"""Value types shared by the Lipschitz and free-space modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InvalidPair, InvalidParameter, MalformedInput
from .metric import MetricSpace
from .rational import fmt, to_fraction


@dataclass(frozen=True, eq=False)
class LipFunction:
    """Real values on every point of ``space``, vanishing at the base."""

    space: MetricSpace
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.space.n:
            raise InvalidParameter("function must have one value per point")
        if self.values[0] != 0:
            raise InvalidParameter("function must vanish at the base point")

    @classmethod
    def from_values(cls, space: MetricSpace, values, shift: bool = True) -> "LipFunction":
        """Wrap raw values; with ``shift`` the base value is subtracted."""
        vals = list(values)
        if shift and vals and vals[0] != 0:
            b = vals[0]
            vals = [v - b for v in vals]
        return cls(space, tuple(vals))

    @classmethod
    def zero(cls, space: MetricSpace) -> "LipFunction":
        return cls(space, (Fraction(0),) * space.n)

    def __call__(self, point):
        return self.values[self.space.index(point)]

    def __eq__(self, other):
        if not isinstance(other, LipFunction):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __add__(self, other: "LipFunction") -> "LipFunction":
        return LipFunction(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "LipFunction") -> "LipFunction":
        return LipFunction(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def scaled(self, c) -> "LipFunction":
        return LipFunction(self.space, tuple(c * v for v in self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def to_json(self) -> dict[str, str]:
        return {lab: fmt(v) for lab, v in zip(self.space.labels, self.values)}

    @classmethod
    def from_json(cls, space: MetricSpace, data) -> "LipFunction":
        if not isinstance(data, Mapping):
            raise MalformedInput("function file must map labels to numbers")
        vals = [Fraction(0)] * space.n
        for lab, v in data.items():
            try:
                i = space.index(lab)
            except InvalidParameter as exc:
                raise MalformedInput(str(exc), f"$.{lab}") from exc
            try:
                vals[i] = to_fraction(v)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise MalformedInput(f"not a rational: {v!r}", f"$.{lab}") from exc
        return cls.from_values(space, vals)


@dataclass(frozen=True, eq=False)
class FreeElement:
    """A finitely supported element ``sum coeffs[x] * delta(x)``.

    ``coeffs`` is a sparse map over non-base indices; the base coefficient
    is implied (``-sum`` of the others) since ``delta(base) = 0``.
    """

    space: MetricSpace
    coeffs: tuple  # sorted ((index, Fraction), ...), no zeros, no base

    @classmethod
    def from_mapping(cls, space: MetricSpace, coeffs: Mapping) -> "FreeElement":
        acc: dict[int, Fraction] = {}
        for k, v in coeffs.items():
            i = space.index(k)
            if i == space.base:
                continue
            acc[i] = acc.get(i, Fraction(0)) + to_fraction(v)
        return cls(space, tuple(sorted((i, c) for i, c in acc.items() if c != 0)))

    @classmethod
    def delta(cls, space: MetricSpace, x) -> "FreeElement":
        return cls.from_mapping(space, {space.index(x): 1})

    @classmethod
    def zero(cls, space: MetricSpace) -> "FreeElement":
        return cls(space, ())

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def full_measure(self) -> dict[int, Fraction]:
        """Zero-sum measure on all points, base coefficient included."""
        out = dict(self.coeffs)
        out[self.space.base] = -sum(out.values(), Fraction(0))
        return out

    def dense(self) -> list[Fraction]:
        """Coordinates on the non-base points (the standard basis of F(M))."""
        v = [Fraction(0)] * (self.space.n - 1)
        for i, c in self.coeffs:
            v[i - 1] = c
        return v

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "FreeElement") -> "FreeElement":
        d = self.as_dict()
        for i, c in other.coeffs:
            d[i] = d.get(i, Fraction(0)) + c
        return FreeElement.from_mapping(self.space, d)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.space, tuple((i, -c) for i, c in self.coeffs))

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scaled(self, c) -> "FreeElement":
        c = Fraction(c)
        if c == 0:
            return FreeElement.zero(self.space)
        return FreeElement(self.space, tuple((i, c * v) for i, v in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.space == other.space and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_json(self) -> dict:
        full = self.full_measure()
        return {"coeffs": {self.space.labels[i]: fmt(full[i]) for i in sorted(full)}}

    @classmethod
    def from_json(cls, space: MetricSpace, data) -> "FreeElement":
        if not isinstance(data, Mapping) or not isinstance(data.get("coeffs"), Mapping):
            raise MalformedInput("element file must be {\"coeffs\": {label: rational}}")
        try:
            return cls.from_mapping(space, data["coeffs"])
        except InvalidParameter as exc:
            raise MalformedInput(str(exc), "$.coeffs") from exc
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(str(exc), "$.coeffs") from exc


@dataclass(frozen=True, order=True)
class Molecule:
    """``m_xy = (delta(x) - delta(y)) / d(x, y)`` by point indices."""

    x: int
    y: int

    def __post_init__(self):
        if self.x == self.y:
            raise InvalidPair("a molecule needs two distinct points")

    def element(self, space: MetricSpace) -> FreeElement:
        d = Fraction(space.exact_dist()[self.x][self.y])
        return FreeElement.from_mapping(space, {self.x: 1 / d, self.y: -1 / d})

    def reversed(self) -> "Molecule":
        return Molecule(self.y, self.x)

    def labels(self, space: MetricSpace) -> tuple[str, str]:
        return space.labels[self.x], space.labels[self.y]


def all_molecules(space: MetricSpace) -> list[Molecule]:
    space.require_molecules()
    return [Molecule(x, y) for x, y in space.pairs()]
