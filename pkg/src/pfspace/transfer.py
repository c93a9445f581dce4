"""Transporting a ground neighbourhood retraction U -> X to P_f.

Given X ⊆ U ⊆ Y and a retraction r: U -> X, measures of P_f(Y) that put more
than half their mass on U are first pushed inside U (:func:`mass_transfer_into`)
and then relabelled through r (:func:`transfer_retract`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidEmbedding, InvariantViolation, OutsideNeighborhood
from .measure import (
    FiniteSpace,
    Measure,
    Point,
    PointMap,
    _check_same_space,
    canonicalize,
    mass_of_set,
    pushforward,
)
from .pf import certify

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class EmbeddedSubspace:
    """Subspace X of an ambient space Y with a neighbourhood U and retraction U -> X."""

    ambient: FiniteSpace
    subspace_points: frozenset[Point]
    neighborhood_points: frozenset[Point]
    retraction: Mapping[Point, Point]

    def __post_init__(self):
        sub = self.ambient.check_subset(self.subspace_points)
        nbhd = self.ambient.check_subset(self.neighborhood_points)
        object.__setattr__(self, "subspace_points", sub)
        object.__setattr__(self, "neighborhood_points", nbhd)
        if not sub:
            raise InvalidEmbedding("subspace must be nonempty")
        if not sub <= nbhd:
            raise InvalidEmbedding("subspace must lie inside the neighbourhood U")
        table = dict(self.retraction)
        for x in sub:
            table.setdefault(x, x)
        if set(table) != set(nbhd):
            raise InvalidEmbedding("retraction must be defined exactly on U")
        for u, x in table.items():
            if x not in sub:
                raise InvalidEmbedding(f"r({u}) = {x} is not in the subspace")
        for x in sub:
            if table[x] != x:
                raise InvalidEmbedding(f"retraction moves subspace point {x}")
        object.__setattr__(self, "retraction", table)

    def __hash__(self):
        return hash((self.ambient, self.subspace_points, self.neighborhood_points,
                     tuple(sorted(self.retraction.items()))))

    def subspace(self) -> FiniteSpace:
        return self.ambient.subspace(self.subspace_points, f"{self.ambient.name}|X")

    def ambient_map(self) -> PointMap:
        """The retraction extended by the identity off U, as a self-map of Y."""
        table = {p: self.retraction.get(p, p) for p in self.ambient.points}
        return PointMap(self.ambient, self.ambient, table)

    def point_map(self) -> PointMap:
        """The retraction U -> X between the induced subspaces."""
        src = self.ambient.subspace(self.neighborhood_points, f"{self.ambient.name}|U")
        return PointMap(src, self.subspace(), self.retraction)


def mass_transfer_into(nu: Measure, U: Iterable[Point]) -> Measure:
    """Move all mass sitting outside U onto the dominant atom.

    Requires ``nu`` in P_f with ``nu(U) > 1/2``; the dominant atom is then
    forced to lie in U (otherwise ``nu(U) <= 1/(n+1) <= 1/2``), which is
    checked rather than assumed.
    """
    U = nu.space.check_subset(U)
    inside = mass_of_set(nu, U)
    if inside <= HALF:
        raise OutsideNeighborhood(f"nu(U) = {inside} <= 1/2")
    cert = certify(nu)
    y0 = cert.dominant_point
    if y0 not in U:
        raise InvariantViolation(f"dominant atom {y0} lies outside U although nu(U) > 1/2")
    outside = 1 - inside
    raw = [(y0, cert.dominant_mass + outside)]
    raw += [(p, m) for p, m in nu.atoms if p in U and p != y0]
    return canonicalize(raw, nu.space)


def transfer_retract(nu: Measure, emb: EmbeddedSubspace) -> Measure:
    """``R ∘ r_U``: a retraction of ⟨U; 1/2⟩ ∩ P_f(Y) onto P_f(X).

    The result is a measure on the ambient space supported in X.
    """
    _check_same_space(nu.space, emb.ambient)
    inside = mass_transfer_into(nu, emb.neighborhood_points)
    return pushforward(inside, emb.ambient_map())


def restrict(mu: Measure, space: FiniteSpace) -> Measure:
    """Re-home a measure onto a subspace that contains its support."""
    return canonicalize(mu.atoms, space)
