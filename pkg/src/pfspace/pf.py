"""The subspace P_f of measures with a dominant atom, and maps defined on it.

A measure with ``n`` atoms belongs to P_f when one atom carries mass at least
``n/(n+1)``.  For ``n >= 2`` that threshold exceeds 1/2, so the dominant atom
is unique; for ``n == 1`` the only atom has mass 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import InvariantViolation, NotInPf, ParameterOutOfRange
from .measure import (
    Measure,
    Point,
    PointMap,
    _check_same_space,
    as_fraction,
    convex_combine,
    pushforward,
)


def threshold(n: int) -> Fraction:
    """Dominant-mass threshold ``n/(n+1) = 1 - 1/(n+1)`` for support size n."""
    return Fraction(n, n + 1)


@dataclass(frozen=True)
class PfCertificate:
    measure: Measure
    support_size: int
    dominant_point: Point
    dominant_mass: Fraction

    def to_json(self) -> dict:
        m = self.dominant_mass
        return {"n": self.support_size, "dominant": self.dominant_point,
                "mass": [m.numerator, m.denominator]}


@dataclass(frozen=True)
class NotMember:
    """Normal negative outcome of :func:`pf_membership`."""

    measure: Measure
    max_mass: Fraction
    threshold: Fraction

    def __bool__(self):
        return False


def pf_membership(mu: Measure) -> PfCertificate | NotMember:
    n = len(mu.atoms)
    need = threshold(n)
    winners = [(p, m) for p, m in mu.atoms if m >= need]
    if not winners:
        return NotMember(mu, max(mu.masses), need)
    if len(winners) > 1:
        raise InvariantViolation(f"two atoms above {need} in {mu}")
    point, mass = winners[0]
    return PfCertificate(mu, n, point, mass)


def is_pf(mu: Measure) -> bool:
    return isinstance(pf_membership(mu), PfCertificate)


def certify(mu: Measure) -> PfCertificate:
    """Like :func:`pf_membership` but raises :class:`NotInPf` on failure."""
    cert = pf_membership(mu)
    if not isinstance(cert, PfCertificate):
        raise NotInPf(f"max mass {cert.max_mass} < {cert.threshold} for {mu}")
    return cert


def dominant_point(mu: Measure) -> Point:
    return certify(mu).dominant_point


def retract_to_dirac(mu: Measure) -> Measure:
    """Send a P_f measure to the Dirac measure at its dominant atom."""
    return Measure.dirac(mu.space, dominant_point(mu))


def _check_t(t) -> Fraction:
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise ParameterOutOfRange(f"t = {t} outside [0, 1]")
    return t


def fiber_homotopy(mu: Measure, t) -> Measure:
    """``(1 - t)·δ_x + t·mu`` with x the dominant point; stays in mu's fiber."""
    t = _check_t(t)
    dirac = retract_to_dirac(mu)
    return convex_combine(t, dirac, mu)


def deformation_homotopy(mu: Measure, t) -> Measure:
    """``(1 - t)·mu + t·r(mu)``: identity at 0, retraction at 1, fixes Diracs."""
    t = _check_t(t)
    return convex_combine(t, mu, retract_to_dirac(mu))


def functor_map(mu: Measure, f: PointMap) -> tuple[Measure, PfCertificate]:
    """Image of a P_f measure under ``f``, together with its certificate.

    The image cannot leave P_f: the support shrinks to n' <= n atoms while the
    dominant mass can only grow, and n/(n+1) >= n'/(n'+1).
    """
    certify(mu)
    _check_same_space(mu.space, f.source)
    image = pushforward(mu, f)
    cert = pf_membership(image)
    if not isinstance(cert, PfCertificate):
        raise InvariantViolation(f"pushforward left P_f: {image}")
    return image, cert


class HomotopyFamily:
    """Point maps ``h(·, t)`` sampled on a finite grid of rational times.

    ``maps`` may be a mapping ``t -> PointMap`` or a callable; a callable is
    evaluated lazily at any requested t.
    """

    def __init__(self, maps: Mapping[Fraction, PointMap] | Callable[[Fraction], PointMap]):
        if callable(maps):
            self._fn = maps
            self._grid = None
        else:
            self._grid = {as_fraction(t): f for t, f in maps.items()}
            self._fn = None
            if 0 not in self._grid or 1 not in self._grid:
                raise ValueError("a homotopy family needs maps at t=0 and t=1")

    @classmethod
    def constant(cls, f: PointMap) -> "HomotopyFamily":
        return cls(lambda t: f)

    @property
    def times(self) -> tuple[Fraction, ...]:
        if self._grid is None:
            return ()
        return tuple(sorted(self._grid))

    def at(self, t) -> PointMap:
        t = _check_t(t)
        if self._fn is not None:
            return self._fn(t)
        try:
            return self._grid[t]
        except KeyError:
            raise ParameterOutOfRange(f"family not sampled at t = {t}") from None


def homotopy_lift(mu: Measure, h: HomotopyFamily, t) -> Measure:
    """``Σ m_i δ_{h(x_i, t)}``: the homotopy induced on P_f by a point homotopy."""
    image, _ = functor_map(mu, h.at(t))
    return image
