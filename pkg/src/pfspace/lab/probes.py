"""Empirical probes of continuity, openness and closedness claims.

Every probe is deterministic given its ``seed`` and returns a
:class:`ProbeReport`.  Verdicts:

* ``pass``: no evidence against the claim on any sample;
* ``fail``: a claim that must hold was violated;
* ``informational``: a measured discontinuity or escape that is reported,
  not treated as an error (continuity probes never fail).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from ..errors import ParameterOutOfRange, UnknownMap
from ..lattice import enumerate_measures, random_vector
from ..measure import FiniteSpace, Measure, Point, canonicalize, from_vector, mass_of_set
from ..omega import (
    HALF,
    PairDecomposition,
    omega_half_membership,
    pair_decompose,
    pairs_of,
    retract_to_pf,
)
from ..pf import certify, is_pf, retract_to_dirac, threshold
from ..serialize import measure_to_json, rat
from ..transfer import mass_transfer_into
from .. import kernels
from .neighborhoods import NeighborhoodSpec, openness_witness, weak_nbhd_contains
from .wasserstein import wasserstein1

ONE_THIRD = Fraction(1, 3)
SCHEMES = ("support-preserving", "support-degenerate")


@dataclass
class Bucket:
    dist: Fraction
    worst: Fraction
    count: int = 0

    def to_json(self) -> dict:
        return {"dist": rat(self.dist), "worst": rat(self.worst), "count": self.count}


@dataclass
class ProbeReport:
    kind: str
    samples: int
    buckets: list[Bucket] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)
    verdict: str = "pass"
    findings: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("continuity", "openness", "closure", "seam"):
            raise ValueError(f"unknown probe kind {self.kind!r}")

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "samples": self.samples,
            "buckets": [b.to_json() for b in self.buckets],
            "counterexamples": self.counterexamples,
            "verdict": self.verdict,
            "findings": self.findings,
        }


def _pair(mu: Measure, nu: Measure, **extra) -> dict:
    doc = {"mu": measure_to_json(mu), "nu": measure_to_json(nu)}
    doc.update(extra)
    return doc


# ------------------------------------------------------------------ maps


def _choose_U(rng: random.Random, mu: Measure) -> frozenset[Point]:
    """A random point set U with mu(U) > 1/2 that misses some point if possible."""
    dom = certify(mu).dominant_point
    others = [p for p in mu.space.points if p != dom]
    keep = [p for p in others if rng.random() < 0.5]
    return frozenset([dom, *keep])


MAPS: dict[str, Callable[[Measure], bool]] = {
    "retract_to_dirac": is_pf,
    "retract_to_pf": lambda mu: max(mu.masses) > HALF,
    "mass_transfer_into": is_pf,
}


def _apply(map_id: str, mu: Measure, U) -> Measure:
    if map_id == "retract_to_dirac":
        return retract_to_dirac(mu)
    if map_id == "retract_to_pf":
        return retract_to_pf(mu)
    return mass_transfer_into(mu, U)


def _in_domain(map_id: str, mu: Measure, U) -> bool:
    if not MAPS[map_id](mu):
        return False
    return map_id != "mass_transfer_into" or mass_of_set(mu, U) > HALF


# ------------------------------------------------------------------ continuity


def _shift(mu: Measure, src: Point, dst: Point, eta: Fraction) -> Measure:
    raw = list(mu.atoms) + [(src, -eta), (dst, eta)]
    merged: dict[Point, Fraction] = {}
    for p, m in raw:
        merged[p] = merged.get(p, Fraction(0)) + m
    return canonicalize(merged.items(), mu.space)


def _base_sample(rng, space, map_id, denom, min_support=2):
    """A random domain measure with at least ``min_support`` atoms (or None)."""
    k = len(space)
    for _ in range(50):
        support = rng.randint(min(min_support, k), k)
        if map_id == "retract_to_pf" and support >= 2 and rng.random() < 0.5:
            # land exactly on the seam α = n/(n+1)
            n = support
            vec = [Fraction(0)] * k
            slots = rng.sample(range(k), n)
            rest = random_vector(rng, n - 1, max(denom, n - 1), n - 1)
            vec[slots[0]] = threshold(n)
            for s, m in zip(slots[1:], rest):
                vec[s] = m / (n + 1)
            mu = from_vector(space, vec)
        else:
            vec = random_vector(rng, k, max(denom, support), support)
            mu = from_vector(space, vec)
        if MAPS[map_id](mu):
            return mu
    return None


def _finalize_buckets(report: ProbeReport) -> None:
    filled = [b for b in report.buckets if b.count]
    if not filled:
        report.verdict = "informational"
        report.findings["note"] = "no admissible samples"
        return
    first, last = filled[0].worst, filled[-1].worst
    # the finest bucket must sit well below the peak, and its output/input
    # ratio must not exceed what the coarser buckets already showed (a jump
    # makes that ratio blow up as the input distance shrinks)
    peak = max(b.worst for b in filled)
    coarse = [b.worst / b.dist for b in filled[:-1] if b.dist]
    bounded = not coarse or last <= max(coarse) * filled[-1].dist
    shrinking = last == 0 or (2 * last <= peak and bounded)
    report.findings["modulus_first"] = rat(first)
    report.findings["modulus_last"] = rat(last)
    report.findings["modulus_shrinks"] = shrinking
    if shrinking:
        report.verdict = "pass"
        report.counterexamples = []
    else:
        report.verdict = "informational"


def retract_to_pf_with_support(mu: Measure, n: int) -> Measure:
    """The first branch of :func:`retract_to_pf` with the support size forced to n.

    Used to evaluate, exactly, the limit of retract_to_pf along a family in
    which ``n - len(mu)`` extra atoms carry masses tending to zero.
    """
    x0, alpha = max(mu.atoms, key=lambda a: a[1])
    if alpha >= threshold(n):
        return mu
    scale = 1 / ((n + 1) * (1 - alpha))
    raw = [(x0, threshold(n))] + [(p, m * scale) for p, m in mu.atoms if p != x0]
    return canonicalize(raw, mu.space)


def degenerate_family(space: FiniteSpace, points: tuple[Point, Point, Point] | None = None,
                      terms: int = 8) -> dict:
    """The family μ_ε = (3/5)δ₁ + (2/5 − ε)δ₂ + εδ₃ against its limit (3/5)δ₁ + (2/5)δ₂.

    Returns the exact limiting gap between ``retract_to_pf(μ_ε)`` and
    ``retract_to_pf(limit)`` together with the sampled distances at
    ε = 1/(5·2^k), and ``d(x₁, x₂)/12`` for comparison.
    """
    if len(space) < 3:
        raise ParameterOutOfRange("the degenerate family needs three points")
    x1, x2, x3 = points or space.points[:3]
    limit = canonicalize([(x1, Fraction(3, 5)), (x2, Fraction(2, 5))], space)
    r_limit = retract_to_pf(limit)
    branch_limit = retract_to_pf_with_support(limit, 3)
    gap = wasserstein1(branch_limit, r_limit)
    seq = []
    for k in range(terms):
        eps = Fraction(1, 5 * 2**k)
        mu = canonicalize([(x1, Fraction(3, 5)), (x2, Fraction(2, 5) - eps), (x3, eps)], space)
        seq.append({
            "eps": rat(eps),
            "input_dist": rat(wasserstein1(mu, limit)),
            "output_dist": rat(wasserstein1(retract_to_pf(mu), r_limit)),
        })
    return {
        "points": [x1, x2, x3],
        "limit": measure_to_json(limit),
        "retract_of_limit": measure_to_json(r_limit),
        "limit_of_retracts": measure_to_json(branch_limit),
        "gap": rat(gap),
        "expected_gap": rat(space.distance(x1, x2) / 12),
        "sequence": seq,
    }


def seam_identity_holds(mu: Measure) -> bool:
    """At α = n/(n+1) the rescaling branch reduces to the identity exactly."""
    n = len(mu.atoms)
    alpha = max(mu.masses)
    if alpha != threshold(n):
        return False
    scale = 1 / ((n + 1) * (1 - alpha))
    return scale == 1


def continuity_probe(
    map_id: str,
    space: FiniteSpace,
    samples: int,
    scheme: str = "support-preserving",
    seed: int = 0,
    levels: int = 6,
    denom: int = 12,
) -> ProbeReport:
    """Sample nearby pairs (μ, μ′) and record the output modulus per distance bucket.

    Bucket ``k`` holds pairs whose perturbation size is ``η₀/2^k``; ``worst``
    is the largest ``W1(f(μ), f(μ′))`` seen there.  The verdict is ``pass``
    when the modulus shrinks (the finest bucket is 0, or at most half the
    peak with an output/input ratio no larger than the coarser buckets show)
    and ``informational`` otherwise.
    """
    if map_id not in MAPS:
        raise UnknownMap(map_id)
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if samples < 1:
        raise ParameterOutOfRange("samples must be >= 1")
    rng = random.Random(seed)
    report = ProbeReport("continuity", 0, label=f"{map_id}/{scheme}")
    report.buckets = [Bucket(Fraction(0), Fraction(0)) for _ in range(levels)]
    seam_checked = 0
    seam_ok = True
    tried = 0
    while report.samples < samples and tried < 20 * samples:
        tried += 1
        base = _base_sample(rng, space, map_id, denom,
                            2 if scheme == "support-preserving" else 1)
        if base is None:
            continue
        U = _choose_U(rng, base) if map_id == "mass_transfer_into" else None
        if U is not None and mass_of_set(base, U) <= HALF:
            continue
        cert_point = max(base.atoms, key=lambda a: a[1])[0]
        if scheme == "support-preserving":
            others = [p for p in base.support if p != cert_point]
            q = rng.choice(others)
            src, dst = (cert_point, q) if rng.random() < 0.5 else (q, cert_point)
            room = base.mass(src)
        else:
            outside = [p for p in space.points if p not in base.support]
            if not outside:
                continue
            others = [p for p in base.support if p != cert_point] or [cert_point]
            src = rng.choice(others)
            dst = rng.choice(outside)
            room = base.mass(src)
        if map_id == "retract_to_pf" and seam_identity_holds(base):
            seam_checked += 1
            seam_ok &= retract_to_pf(base) == base
        eta0 = room / 2
        fb = _apply(map_id, base, U)
        used = False
        for k, bucket in enumerate(report.buckets):
            eta = eta0 / 2**k
            moved = _shift(base, src, dst, eta)
            if scheme == "support-preserving":
                # stay within the same support, as in the bucket definition
                if len(moved) != len(base):
                    continue
            if not _in_domain(map_id, moved, U):
                continue
            d_in = wasserstein1(base, moved)
            d_out = wasserstein1(fb, _apply(map_id, moved, U))
            bucket.count += 1
            bucket.dist = max(bucket.dist, d_in)
            if d_out > bucket.worst:
                bucket.worst = d_out
                if k == len(report.buckets) - 1:
                    report.counterexamples.append(_pair(base, moved, output_dist=rat(d_out)))
            used = True
        if used:
            report.samples += 1
    report.counterexamples = report.counterexamples[:10]
    _finalize_buckets(report)
    if map_id == "retract_to_pf" and scheme == "support-preserving":
        report.findings["seam_samples"] = seam_checked
        report.findings["seam_identity"] = seam_ok
        if not seam_ok:
            report.verdict = "fail"
    if map_id == "retract_to_pf" and scheme == "support-degenerate" and len(space) >= 3:
        fam = degenerate_family(space)
        report.findings["degenerate_family"] = fam
        if Fraction(*fam["gap"]) > 0:
            report.verdict = "informational"
            report.counterexamples.append({"family": "(3/5, 2/5-eps, eps)", "gap": fam["gap"]})
    return report


# ------------------------------------------------------------------ openness


def openness_probe(mu0: Measure, V: Iterable[Point], epsilon, denom: int = 10) -> ProbeReport:
    """Check r(⟨μ₀; V; ε⟩ ∩ P_f) = {δ_x : x ∈ V}.

    Surjectivity comes from :func:`openness_witness` for every x ∈ V;
    containment is checked on every lattice measure with denominator
    ``<= denom``.  An escape at ``ε <= 1/3`` fails the probe; at larger ε it
    is reported as informational.
    """
    space = mu0.space
    V = space.check_subset(V)
    eps = Fraction(epsilon)
    spec = NeighborhoodSpec(mu0, [V], eps)
    report = ProbeReport("openness", 0, label=f"eps={eps}")
    witnesses_ok = True
    for x in sorted(V, key=space.index.get):
        w = openness_witness(mu0, x, V)
        if not (weak_nbhd_contains(w, spec) and retract_to_dirac(w) == Measure.dirac(space, x)):
            witnesses_ok = False
            report.counterexamples.append(_pair(mu0, w, reason="witness"))
    grid = _lattice_batch(space, denom)
    N, L = grid
    center = sum(m for p, m in mu0.atoms if p in V) * L
    if center.denominator != 1:
        # centre off the sampling lattice: fall back to exact Fractions
        image_pts, hits = _image_exact(space, spec, denom)
    else:
        mask = sum(1 << space.index[p] for p in V)
        bits, hits = kernels.neighborhood_image(N, L, center.numerator, mask, eps)
        image_pts = {space.points[j] for j in range(len(space)) if (bits >> j) & 1}
    report.samples = hits
    escaped = sorted(image_pts - V, key=space.index.get)
    report.findings = {
        "image": sorted(image_pts | set(V) if witnesses_ok else image_pts, key=space.index.get),
        "sampled_image": sorted(image_pts, key=space.index.get),
        "escaped": escaped,
        "witnesses_ok": witnesses_ok,
    }
    if escaped:
        for mu in enumerate_measures(space, denom):
            if is_pf(mu) and weak_nbhd_contains(mu, spec) and certify(mu).dominant_point not in V:
                report.counterexamples.append(_pair(mu0, mu, reason="escape"))
                break
    if not witnesses_ok or (escaped and eps <= ONE_THIRD):
        report.verdict = "fail"
    elif escaped:
        report.verdict = "informational"
    return report


_BATCH_CACHE: dict = {}


def _lattice_batch(space: FiniteSpace, denom: int):
    key = (len(space), denom)
    if key not in _BATCH_CACHE:
        measures = enumerate_measures(space, denom)
        _BATCH_CACHE[key] = kernels.to_lattice(measures)
    return _BATCH_CACHE[key]


def _image_exact(space, spec, denom):
    image, hits = set(), 0
    for mu in enumerate_measures(space, denom):
        if is_pf(mu) and weak_nbhd_contains(mu, spec):
            hits += 1
            image.add(certify(mu).dominant_point)
    return image, hits


# ------------------------------------------------------------------ closure


def _random_pair_weights(rng: random.Random, points, denom: int):
    pairs = pairs_of(points)
    vec = random_vector(rng, len(pairs), denom)
    return dict(zip(pairs, vec))


def _compose(space: FiniteSpace, weights) -> Measure:
    raw = []
    for (a, b), w in weights.items():
        raw += [(a, w / 2), (b, w / 2)]
    return canonicalize(raw, space)


def _sequence_report(report, seq, limit, label):
    """Record one convergent sequence; returns False if the limit escapes."""
    for mu in seq:
        if not omega_half_membership(mu) or not isinstance(pair_decompose(mu), PairDecomposition):
            report.verdict = "fail"
            report.counterexamples.append({"sequence": label, "member": measure_to_json(mu),
                                           "reason": "sequence element outside P_w/2"})
            return False
    dists = [wasserstein1(mu, limit) for mu in seq]
    if dists[-1] > dists[0] or (dists[0] > 0 and dists[-1] * 2 > dists[0]):
        report.counterexamples.append({"sequence": label, "reason": "not convergent"})
        report.verdict = "fail"
        return False
    for k, d in enumerate(dists):
        if k < len(report.buckets):
            b = report.buckets[k]
            b.count += 1
            b.dist = max(b.dist, d)
            b.worst = max(b.worst, d)
    if len(limit) < 2 or not omega_half_membership(limit):
        report.verdict = "fail"
        report.counterexamples.append({"sequence": label, "limit": measure_to_json(limit),
                                       "reason": "limit escapes"})
        return False
    return True


def closure_probe(space: FiniteSpace, samples: int, seed: int = 0, terms: int = 8,
                  denom: int = 12) -> ProbeReport:
    """Sequences in P_{ω/2} converging in W1 must have limits in P_{ω/2}."""
    if len(space) < 2:
        raise ParameterOutOfRange("closure probe needs at least two points")
    if samples < 1:
        raise ParameterOutOfRange("samples must be >= 1")
    rng = random.Random(seed)
    report = ProbeReport("closure", 0)
    report.buckets = [Bucket(Fraction(0), Fraction(0)) for _ in range(terms)]
    a, b = space.points[:2]

    # fixed families: constant, and masses (1/2, 1/2 - 1/k, 1/k)
    half = canonicalize([(a, HALF), (b, HALF)], space)
    _sequence_report(report, [half] * terms, half, "constant")
    report.samples += 1
    if len(space) >= 3:
        c = space.points[2]
        seq = [canonicalize([(a, HALF), (b, HALF - Fraction(1, k)), (c, Fraction(1, k))], space)
               for k in range(3, 3 + terms)]
        _sequence_report(report, seq, half, "(1/2, 1/2-1/k, 1/k)")
        report.samples += 1

    for s in range(samples):
        target = _random_pair_weights(rng, space.points, denom)
        noise = _random_pair_weights(rng, space.points, denom)
        limit = _compose(space, target)
        seq = []
        for k in range(1, terms + 1):
            t = Fraction(1, 2**k)
            w = {pq: (1 - t) * target[pq] + t * noise[pq] for pq in target}
            seq.append(_compose(space, w))
        _sequence_report(report, seq, limit, f"random#{s}")
        report.samples += 1
    report.counterexamples = report.counterexamples[:10]
    return report


# ------------------------------------------------------------------ continuity core


def continuity_core_search(space: FiniteSpace, denom: int, epsilon=ONE_THIRD) -> ProbeReport:
    """Exhaustive search for the dominant-point continuity claim at ``epsilon``.

    For every centre μ₀ ∈ P_f with ≥ 2 atoms, every V containing its dominant
    point and every μ ∈ P_f ∩ ⟨μ₀; V; ε⟩ on the lattice of denominators
    ``<= denom``, μ's dominant point must lie in V.  Violations fail the
    probe for ``ε <= 1/3`` and are informational above.
    """
    eps = Fraction(epsilon)
    N, L = _lattice_batch(space, denom)
    checked, violations, first = kernels.continuity_search(N, L, eps)
    report = ProbeReport("continuity", checked, label=f"core eps={eps}")
    report.findings = {"violations": violations, "epsilon": rat(eps), "backend": kernels.backend()}
    if violations:
        i0, mask, i = first
        measures = enumerate_measures(space, denom)
        V = [space.points[j] for j in range(len(space)) if (mask >> j) & 1]
        report.counterexamples.append(_pair(measures[i0], measures[i], V=V))
        report.verdict = "fail" if eps <= ONE_THIRD else "informational"
    return report
