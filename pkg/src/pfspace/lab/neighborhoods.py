"""Base neighbourhoods of the weak topology and the openness witness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..errors import ParameterOutOfRange, WitnessInvalid
from ..measure import Measure, Point, _check_same_space, as_fraction, canonicalize, mass_of_set
from ..pf import certify, retract_to_dirac


@dataclass(frozen=True)
class NeighborhoodSpec:
    """⟨μ₀; U₁, …, Uₙ; ε⟩ = {μ : μ(Uᵢ) − μ₀(Uᵢ) > −ε for all i}."""

    center: Measure
    sets: tuple[frozenset[Point], ...]
    epsilon: Fraction

    def __init__(self, center: Measure, sets: Iterable[Iterable[Point]], epsilon):
        eps = as_fraction(epsilon)
        if eps <= 0:
            raise ParameterOutOfRange(f"epsilon must be positive, got {eps}")
        object.__setattr__(self, "center", center)
        object.__setattr__(
            self, "sets", tuple(center.space.check_subset(s) for s in sets)
        )
        object.__setattr__(self, "epsilon", eps)

    def with_epsilon(self, epsilon) -> "NeighborhoodSpec":
        return NeighborhoodSpec(self.center, self.sets, epsilon)


def weak_nbhd_contains(mu: Measure, spec: NeighborhoodSpec) -> bool:
    _check_same_space(mu.space, spec.center.space)
    return all(
        mass_of_set(mu, U) - mass_of_set(spec.center, U) > -spec.epsilon
        for U in spec.sets
    )


def openness_witness(mu0: Measure, x: Point, V: Iterable[Point]) -> Measure:
    """μ₀ with its dominant atom moved to ``x`` (other atoms untouched).

    The witness keeps μ₀'s mass on V, so it lies in every ⟨μ₀; V; ε⟩, and it
    retracts to δ_x.  When ``x`` already carries an atom of μ₀ the two merge;
    both properties are re-checked and :class:`WitnessInvalid` is raised if
    the merge broke either.
    """
    V = mu0.space.check_subset(V)
    cert = certify(mu0)
    if x not in V:
        raise ParameterOutOfRange(f"{x} is not in V")
    if cert.dominant_point not in V:
        raise ParameterOutOfRange("the dominant point of mu0 must lie in V")
    raw = [(x, cert.dominant_mass)]
    raw += [(p, m) for p, m in mu0.atoms if p != cert.dominant_point]
    witness = canonicalize(raw, mu0.space)
    try:
        lands = retract_to_dirac(witness) == Measure.dirac(mu0.space, x)
    except Exception as exc:
        raise WitnessInvalid(f"witness {witness} left P_f") from exc
    if not lands:
        raise WitnessInvalid(f"witness {witness} does not retract to δ_{x}")
    if mass_of_set(witness, V) != mass_of_set(mu0, V):
        raise WitnessInvalid(f"witness {witness} changed the mass of V")
    return witness
