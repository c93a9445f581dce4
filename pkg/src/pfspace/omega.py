"""Pair decompositions (P_{ω/2}) and the neighbourhood retraction onto P_f."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DegenerateSupport, InvariantViolation, OutsideDomain
from .measure import Measure, Point, canonicalize
from .pf import threshold

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PairDecomposition:
    """Weights ``w[{a, b}]`` with ``Σ w = 1`` and ``Σ_b w[{a, b}] = 2·m_a``.

    ``pairs`` is sorted by point order; each key ``(a, b)`` has ``a`` before
    ``b``.  Zero weights are omitted.
    """

    measure: Measure
    pairs: tuple[tuple[tuple[Point, Point], Fraction], ...]

    def weight(self, a: Point, b: Point) -> Fraction:
        key = (a, b) if self.measure.space.index[a] < self.measure.space.index[b] else (b, a)
        return dict(self.pairs).get(key, Fraction(0))

    def row_sums(self) -> dict[Point, Fraction]:
        sums = {p: Fraction(0) for p in self.measure.support}
        for (a, b), w in self.pairs:
            sums[a] = sums.get(a, Fraction(0)) + w
            sums[b] = sums.get(b, Fraction(0)) + w
        return sums

    def recompose(self) -> Measure:
        """``Σ w_ab·(δ_a/2 + δ_b/2)``."""
        raw = []
        for (a, b), w in self.pairs:
            raw.append((a, w / 2))
            raw.append((b, w / 2))
        return canonicalize(raw, self.measure.space)

    def to_json(self) -> dict:
        return {"pairs": [{"a": a, "b": b, "w": [w.numerator, w.denominator]}
                          for (a, b), w in self.pairs]}


@dataclass(frozen=True)
class Infeasible:
    """No pair decomposition exists; ``point`` is left with unpaired mass."""

    measure: Measure
    point: Point
    residual: Fraction

    def __bool__(self):
        return False


def _require_two_atoms(mu: Measure) -> None:
    if len(mu.atoms) < 2:
        raise DegenerateSupport(f"{mu} is a Dirac measure")


def omega_half_membership(mu: Measure) -> bool:
    """True iff every atom mass is at most 1/2."""
    _require_two_atoms(mu)
    return all(m <= HALF for m in mu.masses)


def pair_decompose(mu: Measure) -> PairDecomposition | Infeasible:
    """Greedy pairing of the two largest residual row targets.

    Residuals start at ``2·m_k`` (summing to 2).  Each step pairs the largest
    two residuals r1 >= r2 with weight ``min(r2, T/2 - r3)`` where T is the
    residual total and r3 the third largest; this keeps ``max <= T/2``, which
    is exactly the condition under which the remaining residuals can still be
    paired off.  A lone nonzero residual at the end means no decomposition
    exists.  Ties are broken by point order.
    """
    _require_two_atoms(mu)
    order = mu.space.index
    residual = {p: 2 * m for p, m in mu.atoms}
    weights: dict[tuple[Point, Point], Fraction] = {}
    while True:
        live = sorted((p for p in residual if residual[p] > 0),
                      key=lambda p: (-residual[p], order[p]))
        if not live:
            break
        if len(live) == 1:
            return Infeasible(mu, live[0], residual[live[0]] / 2)
        a, b = live[0], live[1]
        total = sum(residual[p] for p in live)
        third = residual[live[2]] if len(live) > 2 else Fraction(0)
        w = min(residual[b], total / 2 - third)
        if w <= 0:
            # the largest residual exceeds everything else combined
            return Infeasible(mu, a, (residual[a] - (total - residual[a])) / 2)
        key = (a, b) if order[a] < order[b] else (b, a)
        weights[key] = weights.get(key, Fraction(0)) + w
        residual[a] -= w
        residual[b] -= w
    pairs = tuple(sorted(weights.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])))
    return PairDecomposition(mu, pairs)


def retract_to_pf(mu: Measure) -> Measure:
    """Neighbourhood retraction of {max mass > 1/2} onto P_f.

    With n atoms and dominant mass α < n/(n+1), the dominant atom is raised to
    exactly n/(n+1) and the remaining atoms are rescaled by
    ``1/((n+1)(1-α))``; otherwise ``mu`` is returned unchanged.
    """
    n = len(mu.atoms)
    dominant = [(p, m) for p, m in mu.atoms if m > HALF]
    if not dominant:
        raise OutsideDomain(f"no atom of {mu} carries more than 1/2")
    x0, alpha = dominant[0]
    need = threshold(n)
    if alpha >= need:
        return mu
    scale = 1 / ((n + 1) * (1 - alpha))
    raw = [(x0, need)] + [(p, m * scale) for p, m in mu.atoms if p != x0]
    out = canonicalize(raw, mu.space)
    if len(out.atoms) != n:
        raise InvariantViolation("retract_to_pf changed the support")
    return out


def half_neighborhood_contains(mu: Measure, x: Point) -> bool:
    """``mu`` lies in ⟨δ_x; 1/2⟩, i.e. the open set {x} carries mass > 1/2."""
    return mu.mass(x) > HALF


def half_neighborhood_points(mu: Measure) -> list[Point]:
    return [p for p in mu.space.points if half_neighborhood_contains(mu, p)]


def pairs_of(points: Iterable[Point]) -> list[tuple[Point, Point]]:
    pts = list(points)
    return [(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))]
