"""Finite metric spaces and finitely supported probability measures over them.

All masses are :class:`fractions.Fraction`.  A :class:`Measure` is always in
canonical form (distinct atoms, strictly positive masses, sorted by the
space's point order), so ``==`` is measure equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvalidSpace,
    MassSumViolation,
    NegativeMass,
    ParameterOutOfRange,
    SpaceMismatch,
    UnknownPoint,
)

Point = str


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``(p, q)`` pairs.

    Floats are refused: a float mass would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int):
            raise TypeError(f"rational pair must hold integers, got {value!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A finite metric space with an ordered list of point identifiers."""

    points: tuple[Point, ...]
    metric: tuple[tuple[Fraction, ...], ...]
    name: str = "X"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(
            self,
            "metric",
            tuple(tuple(as_fraction(d) for d in row) for row in self.metric),
        )
        n = len(self.points)
        if n == 0:
            raise InvalidSpace("a space needs at least one point")
        if len(set(self.points)) != n:
            raise InvalidSpace("point identifiers must be distinct")
        if len(self.metric) != n or any(len(row) != n for row in self.metric):
            raise InvalidSpace(f"metric must be a {n}x{n} table")
        d = self.metric
        for i in range(n):
            if d[i][i] != 0:
                raise InvalidSpace(f"d({self.points[i]},{self.points[i]}) != 0")
            for j in range(i + 1, n):
                if d[i][j] != d[j][i]:
                    raise InvalidSpace("metric is not symmetric")
                if d[i][j] <= 0:
                    raise InvalidSpace("distinct points must be at positive distance")
        for i, j, k in itertools.product(range(n), repeat=3):
            if d[i][k] > d[i][j] + d[j][k]:
                raise InvalidSpace(
                    f"triangle inequality fails for "
                    f"({self.points[i]}, {self.points[j]}, {self.points[k]})"
                )

    @classmethod
    def discrete(cls, points: Iterable[Point], name: str = "X") -> "FiniteSpace":
        """Space with the 0/1 metric."""
        pts = tuple(points)
        metric = [[Fraction(int(a != b)) for b in pts] for a in pts]
        return cls(pts, metric, name)

    @cached_property
    def index(self) -> Mapping[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point) -> bool:
        return point in self.index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.points == other.points and self.metric == other.metric

    def __hash__(self):
        return hash((self.points, self.metric))

    def __repr__(self):
        return f"FiniteSpace({self.name!r}, points={list(self.points)})"

    def distance(self, x: Point, y: Point) -> Fraction:
        return self.metric[self.position(x)][self.position(y)]

    def position(self, point: Point) -> int:
        try:
            return self.index[point]
        except KeyError:
            raise UnknownPoint(f"{point!r} is not a point of {self.name}") from None

    def check_subset(self, points: Iterable[Point]) -> frozenset[Point]:
        subset = frozenset(points)
        for p in subset:
            self.position(p)
        return subset

    def subspace(self, points: Iterable[Point], name: str | None = None) -> "FiniteSpace":
        """Restriction of the metric to ``points`` (kept in this space's order)."""
        keep = self.check_subset(points)
        pts = [p for p in self.points if p in keep]
        idx = [self.index[p] for p in pts]
        metric = [[self.metric[i][j] for j in idx] for i in idx]
        return FiniteSpace(tuple(pts), metric, name or f"{self.name}|sub")


def _check_same_space(a: FiniteSpace, b: FiniteSpace) -> None:
    if a is not b and a != b:
        raise SpaceMismatch(f"{a!r} vs {b!r}")


@dataclass(frozen=True)
class Measure:
    """Canonical finitely supported probability measure.

    Build through :func:`canonicalize` (or :meth:`dirac`) unless the atoms are
    already canonical; the constructor validates and rejects anything else.
    """

    space: FiniteSpace = field(repr=False)
    atoms: tuple[tuple[Point, Fraction], ...]

    def __post_init__(self):
        atoms = tuple((p, as_fraction(m)) for p, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        last = -1
        for p, m in atoms:
            pos = self.space.position(p)
            if pos <= last:
                raise ValueError("atoms must be distinct and sorted by point order")
            last = pos
            if m <= 0:
                raise NegativeMass(f"canonical atoms need positive mass, {p}: {m}")
        if sum(m for _, m in atoms) != 1:
            raise MassSumViolation("masses must sum to exactly 1")

    @classmethod
    def dirac(cls, space: FiniteSpace, point: Point) -> "Measure":
        space.position(point)
        return cls(space, ((point, Fraction(1)),))

    @property
    def support(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def mass(self, point: Point) -> Fraction:
        self.space.position(point)
        for p, m in self.atoms:
            if p == point:
                return m
        return Fraction(0)

    def is_dirac(self) -> bool:
        return len(self.atoms) == 1

    def as_dict(self) -> dict[Point, Fraction]:
        return dict(self.atoms)

    def vector(self) -> tuple[Fraction, ...]:
        """Masses indexed by every point of the space (zeros included)."""
        d = dict(self.atoms)
        return tuple(d.get(p, Fraction(0)) for p in self.space.points)

    def __str__(self):
        body = " + ".join(f"{m}·δ_{p}" for p, m in self.atoms)
        return body


@dataclass(frozen=True)
class PointMap:
    """Total map between the points of two finite spaces."""

    source: FiniteSpace = field(repr=False)
    target: FiniteSpace = field(repr=False)
    table: Mapping[Point, Point]

    def __post_init__(self):
        table = dict(self.table)
        missing = [p for p in self.source.points if p not in table]
        if missing:
            raise UnknownPoint(f"map undefined on {missing}")
        for p, q in table.items():
            self.source.position(p)
            self.target.position(q)
        object.__setattr__(self, "table", table)

    @classmethod
    def identity(cls, space: FiniteSpace) -> "PointMap":
        return cls(space, space, {p: p for p in space.points})

    def __call__(self, point: Point) -> Point:
        return self.table[point]

    def __hash__(self):
        return hash(tuple(sorted(self.table.items())))

    def compose(self, inner: "PointMap") -> "PointMap":
        """``self ∘ inner``."""
        _check_same_space(inner.target, self.source)
        return PointMap(inner.source, self.target, {p: self(inner(p)) for p in inner.source.points})


def canonicalize(raw: Iterable[tuple[Point, object]], space: FiniteSpace) -> Measure:
    """Merge duplicate points, drop zero atoms and sort by point order."""
    totals: dict[Point, Fraction] = {}
    for point, mass in raw:
        mass = as_fraction(mass)
        space.position(point)
        if mass < 0:
            raise NegativeMass(f"mass {mass} at {point!r}")
        totals[point] = totals.get(point, Fraction(0)) + mass
    if sum(totals.values()) != 1:
        raise MassSumViolation(f"masses sum to {sum(totals.values())}, not 1")
    atoms = sorted(
        ((p, m) for p, m in totals.items() if m != 0), key=lambda a: space.index[a[0]]
    )
    return Measure(space, tuple(atoms))


def from_vector(space: FiniteSpace, masses: Sequence[object]) -> Measure:
    """Measure whose mass at ``space.points[i]`` is ``masses[i]``."""
    if len(masses) != len(space):
        raise ValueError("one mass per point expected")
    return canonicalize(zip(space.points, masses), space)


def convex_combine(t, mu: Measure, nu: Measure) -> Measure:
    """``(1 - t)·mu + t·nu``."""
    t = as_fraction(t)
    _check_same_space(mu.space, nu.space)
    if not 0 <= t <= 1:
        raise ParameterOutOfRange(f"t = {t} outside [0, 1]")
    raw = [(p, (1 - t) * m) for p, m in mu.atoms] + [(p, t * m) for p, m in nu.atoms]
    return canonicalize(raw, mu.space)


def pushforward(mu: Measure, f: PointMap) -> Measure:
    _check_same_space(mu.space, f.source)
    return canonicalize(((f(p), m) for p, m in mu.atoms), f.target)


def mass_of_set(mu: Measure, subset: Iterable[Point]) -> Fraction:
    subset = mu.space.check_subset(subset)
    return sum((m for p, m in mu.atoms if p in subset), Fraction(0))
