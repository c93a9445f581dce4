"""Exhaustive and random enumeration of rational measures on a finite space.

"Denominator at most D" means every mass vector lies on the lattice
``(1/q)·Z^n`` for some ``q <= D``.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from functools import reduce
from typing import Iterator

from .measure import FiniteSpace, Measure, PointMap, from_vector
from .transfer import EmbeddedSubspace


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ordered tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first, *rest)


def lattice_vectors(n: int, max_denom: int) -> list[tuple[Fraction, ...]]:
    """Distinct mass vectors of length ``n`` with denominators ``<= max_denom``.

    Ordered by (smallest common denominator, lexicographic numerators), so
    the result is deterministic.
    """
    seen: set[tuple[Fraction, ...]] = set()
    out = []
    for q in range(1, max_denom + 1):
        for comp in compositions(q, n):
            vec = tuple(Fraction(c, q) for c in comp)
            if vec not in seen:
                seen.add(vec)
                out.append(vec)
    return out


def enumerate_measures(
    space: FiniteSpace, max_denom: int, max_atoms: int | None = None
) -> list[Measure]:
    """Every canonical measure on ``space`` with denominators ``<= max_denom``."""
    out = []
    for vec in lattice_vectors(len(space), max_denom):
        if max_atoms is not None and sum(1 for m in vec if m) > max_atoms:
            continue
        out.append(from_vector(space, vec))
    return out


def common_denominator(measures) -> int:
    """lcm of all mass denominators of the given measures."""
    dens = (m.denominator for mu in measures for m in mu.masses)
    return reduce(math.lcm, dens, 1)


def random_vector(rng: random.Random, n: int, denom: int, support: int | None = None):
    """Uniform lattice point of the simplex with denominator ``denom``.

    With ``support`` given, exactly that many coordinates (chosen uniformly)
    are strictly positive; ``denom`` must then be at least ``support``.
    """
    k = n if support is None else support
    if support is None:
        # stars and bars: choose n-1 bar positions among denom+n-1 slots
        bars = sorted(rng.sample(range(denom + n - 1), n - 1))
        parts, prev = [], -1
        for b in bars + [denom + n - 1]:
            parts.append(b - prev - 1)
            prev = b
        return tuple(Fraction(c, denom) for c in parts)
    if denom < k:
        raise ValueError("denominator too small for the requested support")
    cuts = sorted(rng.sample(range(1, denom), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    slots = sorted(rng.sample(range(n), k))
    vec = [Fraction(0)] * n
    for s, c in zip(slots, parts):
        vec[s] = Fraction(c, denom)
    return tuple(vec)


def random_measure(
    rng: random.Random, space: FiniteSpace, denom: int, support: int | None = None
) -> Measure:
    return from_vector(space, random_vector(rng, len(space), denom, support))


def all_point_maps(source, target) -> Iterator:
    """Every total map between the point sets of two spaces."""
    for images in itertools.product(target.points, repeat=len(source)):
        yield PointMap(source, target, dict(zip(source.points, images)))


def subsets(points, min_size: int = 0) -> Iterator[frozenset]:
    pts = list(points)
    for r in range(min_size, len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            yield frozenset(combo)


def all_embeddings(space) -> Iterator:
    """Every (X ⊆ U ⊆ Y, retraction U -> X) configuration on ``space``."""
    for U in subsets(space.points, 1):
        ordered_U = [p for p in space.points if p in U]
        for X in subsets(ordered_U, 1):
            free = [p for p in ordered_U if p not in X]
            targets = [p for p in ordered_U if p in X]
            for images in itertools.product(targets, repeat=len(free)):
                table = {x: x for x in X}
                table.update(zip(free, images))
                yield EmbeddedSubspace(space, X, U, table)
