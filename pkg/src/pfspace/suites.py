"""Invariant suites behind ``pfspace verify``.

Each suite runs exhaustive checks on the lattice of measures with
denominators ``<= max_denom`` plus ``samples`` seeded random cases, and
returns a :class:`SuiteReport`.  Nothing in a report depends on wall-clock
time or hash ordering, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .lab.neighborhoods import NeighborhoodSpec, weak_nbhd_contains
from .lab.probes import (
    ProbeReport,
    closure_probe,
    continuity_core_search,
    continuity_probe,
    openness_probe,
)
from .lab.wasserstein import wasserstein1, wasserstein1_bruteforce
from .lattice import (
    all_embeddings,
    all_point_maps,
    enumerate_measures,
    subsets,
)
from .measure import (
    FiniteSpace,
    Measure,
    PointMap,
    canonicalize,
    convex_combine,
    mass_of_set,
    pushforward,
)
from .omega import (
    PairDecomposition,
    half_neighborhood_contains,
    half_neighborhood_points,
    pair_decompose,
    retract_to_pf,
)
from .pf import (
    HomotopyFamily,
    PfCertificate,
    deformation_homotopy,
    fiber_homotopy,
    functor_map,
    homotopy_lift,
    is_pf,
    pf_membership,
    retract_to_dirac,
    threshold,
)
from .serialize import measure_from_json, measure_to_json, space_to_json
from .transfer import mass_transfer_into, transfer_retract

SUITES = ("core", "pf", "omega", "transfer", "probes", "all")
T_GRID = tuple(Fraction(k, 100) for k in range(101))


@dataclass
class Check:
    name: str
    cases: int = 0
    failures: int = 0
    example: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, example: Callable[[], str] | str = "") -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if not self.example:
                self.example = example() if callable(example) else example

    def to_json(self) -> dict:
        return {"name": self.name, "cases": self.cases, "failures": self.failures,
                "passed": self.passed, "example": self.example}


@dataclass
class SuiteReport:
    suite: str
    space: FiniteSpace
    seed: int
    samples: int
    checks: list[Check] = field(default_factory=list)
    probes: list[ProbeReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(p.passed for p in self.probes)

    @property
    def informational(self) -> list[ProbeReport]:
        return [p for p in self.probes if p.verdict == "informational"]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "space": space_to_json(self.space),
            "seed": self.seed,
            "samples": self.samples,
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
            "probes": [p.to_json() for p in self.probes],
            "informational": [p.label for p in self.informational],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["section", "name", "verdict", "cases", "failures", "detail"])
        for c in self.checks:
            w.writerow(["check", c.name, "pass" if c.passed else "fail", c.cases,
                        c.failures, c.example])
        for p in self.probes:
            w.writerow([f"probe:{p.kind}", p.label, p.verdict, p.samples,
                        len(p.counterexamples), ""])
            for k, b in enumerate(p.buckets):
                w.writerow([f"bucket:{p.kind}", f"{p.label}#{k}", "", b.count, "",
                            f"dist={b.dist};worst={b.worst}"])
        return buf.getvalue()


class _Ctx:
    def __init__(self, space: FiniteSpace, samples: int, seed: int, max_denom: int):
        self.space = space
        self.samples = samples
        self.seed = seed
        self.max_denom = max_denom
        self.rng = random.Random(seed)
        self.measures = enumerate_measures(space, max_denom)
        self.pf = [mu for mu in self.measures if is_pf(mu)]

    def check(self, report: SuiteReport, name: str) -> Check:
        c = Check(name)
        report.checks.append(c)
        return c

    def random_map(self, target: FiniteSpace | None = None) -> PointMap:
        target = target or self.space
        return PointMap(self.space, target,
                        {p: self.rng.choice(target.points) for p in self.space.points})

    def point_maps(self) -> Iterable[PointMap]:
        if len(self.space) <= 4:
            return list(all_point_maps(self.space, self.space))
        return [self.random_map() for _ in range(self.samples)]


# ------------------------------------------------------------------ suites


def _core(ctx: _Ctx, report: SuiteReport) -> None:
    space = ctx.space
    idem = ctx.check(report, "canonicalize idempotent")
    roundtrip = ctx.check(report, "json round trip")
    for mu in ctx.measures:
        idem.record(canonicalize(mu.atoms, space) == mu, str(mu))
        roundtrip.record(measure_from_json(measure_to_json(mu), space) == mu, str(mu))

    additive = ctx.check(report, "mass_of_set additive on disjoint sets")
    all_sets = list(subsets(space.points))
    for _ in range(ctx.samples):
        mu = ctx.rng.choice(ctx.measures)
        U = ctx.rng.choice(all_sets)
        V = frozenset(p for p in ctx.rng.choice(all_sets) if p not in U)
        additive.record(mass_of_set(mu, U | V) == mass_of_set(mu, U) + mass_of_set(mu, V),
                        lambda: f"{mu} U={sorted(U)} V={sorted(V)}")

    push = ctx.check(report, "pushforward preserves mass of preimages")
    for _ in range(ctx.samples):
        mu = ctx.rng.choice(ctx.measures)
        f = ctx.random_map()
        image = pushforward(mu, f)
        ok = sum(image.masses) == 1 and all(
            mass_of_set(image, W) == mass_of_set(mu, [p for p in space.points if f(p) in W])
            for W in all_sets
        )
        push.record(ok, lambda: f"{mu} under {f.table}")

    assoc = ctx.check(report, "convex_combine association independent")
    for _ in range(ctx.samples):
        a, b, c = (ctx.rng.choice(ctx.measures) for _ in range(3))
        w = sorted(Fraction(ctx.rng.randint(0, 12), 12) for _ in range(2))
        wa, wb, wc = w[0], w[1] - w[0], 1 - w[1]
        direct = canonicalize(
            [(p, wa * m) for p, m in a.atoms] + [(p, wb * m) for p, m in b.atoms]
            + [(p, wc * m) for p, m in c.atoms], space)
        # ((a, b) first, then c) versus (a, then (b, c))
        ab = a if wa + wb == 0 else convex_combine(wb / (wa + wb), a, b)
        left = convex_combine(wc, ab, c)
        bc = b if wb + wc == 0 else convex_combine(wc / (wb + wc), b, c)
        right = convex_combine(wb + wc, a, bc)
        assoc.record(left == direct == right, lambda: f"{a} | {b} | {c}")


def _pf(ctx: _Ctx, report: SuiteReport) -> None:
    space = ctx.space
    brute = ctx.check(report, "pf_membership matches brute-force threshold")
    for mu in ctx.measures:
        n = len(mu)
        expected = any(m * (n + 1) >= n for m in mu.masses)
        brute.record(isinstance(pf_membership(mu), PfCertificate) == expected, str(mu))

    law = ctx.check(report, "retract_to_dirac fixes Diracs and is idempotent")
    for p in space.points:
        d = Measure.dirac(space, p)
        law.record(retract_to_dirac(d) == d, str(d))
    for mu in ctx.pf:
        r = retract_to_dirac(mu)
        law.record(retract_to_dirac(r) == r, str(mu))

    ends = ctx.check(report, "homotopy endpoint identities on 101-point grid")
    stable = ctx.check(report, "fiber_homotopy stays in the fiber")
    strong = ctx.check(report, "deformation_homotopy fixes Diracs")
    for mu in ctx.pf:
        r = retract_to_dirac(mu)
        ends.record(fiber_homotopy(mu, 1) == mu, str(mu))
        ends.record(fiber_homotopy(mu, 0) == r, str(mu))
        ends.record(deformation_homotopy(mu, 0) == mu, str(mu))
        ends.record(deformation_homotopy(mu, 1) == r, str(mu))
        for t in T_GRID[1:]:
            stable.record(retract_to_dirac(fiber_homotopy(mu, t)) == r, lambda: f"{mu} t={t}")
    for p in space.points:
        d = Measure.dirac(space, p)
        for t in T_GRID:
            strong.record(deformation_homotopy(d, t) == d, f"{d} t={t}")

    functor = ctx.check(report, "functor_map preserves P_f")
    for f in ctx.point_maps():
        for mu in ctx.pf:
            image, cert = functor_map(mu, f)
            functor.record(is_pf(image) and cert.measure == image, lambda: f"{mu} {f.table}")

    lift = ctx.check(report, "homotopy_lift endpoint consistency")
    for _ in range(ctx.samples):
        h0, h1 = ctx.random_map(), ctx.random_map()
        mid = ctx.random_map()
        fam = HomotopyFamily({Fraction(0): h0, Fraction(1, 2): mid, Fraction(1): h1})
        mu = ctx.rng.choice(ctx.pf)
        ok = (homotopy_lift(mu, fam, 0) == functor_map(mu, h0)[0]
              and homotopy_lift(mu, fam, 1) == functor_map(mu, h1)[0]
              and homotopy_lift(mu, fam, Fraction(1, 2)) == functor_map(mu, mid)[0])
        lift.record(ok, str(mu))

    if len(space) >= 2:
        report.probes.append(continuity_core_search(space, min(ctx.max_denom, 12)))


def _omega(ctx: _Ctx, report: SuiteReport) -> None:
    oracle = ctx.check(report, "pair_decompose feasible iff all masses <= 1/2")
    recomp = ctx.check(report, "pair decompositions recompose exactly")
    for mu in ctx.measures:
        if len(mu) < 2:
            continue
        dec = pair_decompose(mu)
        feasible = isinstance(dec, PairDecomposition)
        oracle.record(feasible == all(2 * m <= 1 for m in mu.masses), str(mu))
        if feasible:
            ok = (dec.recompose() == mu and sum(w for _, w in dec.pairs) == 1
                  and all(w >= 0 for _, w in dec.pairs)
                  and all(s == 2 * mu.mass(p) for p, s in dec.row_sums().items()))
            recomp.record(ok, str(mu))

    disjoint = ctx.check(report, "half neighbourhoods are disjoint")
    cover = ctx.check(report, "P_f lies in the half neighbourhood of its dominant point")
    for mu in ctx.measures:
        disjoint.record(len(half_neighborhood_points(mu)) <= 1, str(mu))
    for mu in ctx.pf:
        cover.record(half_neighborhood_contains(mu, retract_to_dirac(mu).support[0]), str(mu))

    rlaw = ctx.check(report, "retract_to_pf fixes P_f and is idempotent")
    image = ctx.check(report, "retract_to_pf lands in P_f with the same support")
    for mu in ctx.measures:
        if max(mu.masses) * 2 <= 1:
            continue
        r = retract_to_pf(mu)
        if is_pf(mu):
            rlaw.record(r == mu, str(mu))
        rlaw.record(retract_to_pf(r) == r, str(mu))
        image.record(is_pf(r) and r.support == mu.support, str(mu))

    seam = ctx.check(report, "retract_to_pf branches agree on the seam")
    for n in range(2, len(ctx.space) + 1):
        alpha = threshold(n)
        seam.record((n + 1) * (1 - alpha) == 1, f"n={n}")


def _transfer(ctx: _Ctx, report: SuiteReport) -> None:
    space = ctx.space
    embeddings = list(all_embeddings(space))
    if len(embeddings) > 64 * ctx.samples:
        embeddings = ctx.rng.sample(embeddings, 64 * ctx.samples)
    support = ctx.check(report, "mass_transfer_into supported in U")
    pres = ctx.check(report, "outputs stay in P_f")
    fixed = ctx.check(report, "retraction laws")
    compose = ctx.check(report, "transfer_retract = pushforward after transfer")
    for U in subsets(space.points, 1):
        for nu in ctx.pf:
            if mass_of_set(nu, U) * 2 <= 1:
                continue
            out = mass_transfer_into(nu, U)
            support.record(set(out.support) <= U, lambda: f"{nu} U={sorted(U)}")
            pres.record(is_pf(out), str(nu))
            fixed.record(mass_transfer_into(out, U) == out, str(nu))
            if set(nu.support) <= U:
                fixed.record(out == nu, str(nu))
    for emb in embeddings:
        f = emb.ambient_map()
        for nu in ctx.pf:
            if mass_of_set(nu, emb.neighborhood_points) * 2 <= 1:
                continue
            out = transfer_retract(nu, emb)
            pres.record(is_pf(out) and set(out.support) <= emb.subspace_points, str(nu))
            compose.record(out == pushforward(mass_transfer_into(nu, emb.neighborhood_points), f),
                           str(nu))
            fixed.record(transfer_retract(out, emb) == out, str(nu))
            if set(nu.support) <= emb.subspace_points:
                fixed.record(out == nu, str(nu))


def _probes(ctx: _Ctx, report: SuiteReport) -> None:
    space = ctx.space
    seed = ctx.seed
    if len(space) >= 2:
        for map_id in ("retract_to_dirac", "retract_to_pf", "mass_transfer_into"):
            for scheme in ("support-preserving", "support-degenerate"):
                report.probes.append(
                    continuity_probe(map_id, space, ctx.samples, scheme, seed=seed))
        report.probes.append(closure_probe(space, ctx.samples, seed=seed))

    w1 = ctx.check(report, "wasserstein1 LP equals spanning-tree enumeration")
    metric = ctx.check(report, "wasserstein1 symmetric, zero iff equal, triangle")
    small = [mu for mu in enumerate_measures(space, min(ctx.max_denom, 6)) if len(mu) <= 3]
    for _ in range(ctx.samples):
        a, b, c = (ctx.rng.choice(small) for _ in range(3))
        dab = wasserstein1(a, b)
        w1.record(dab == wasserstein1_bruteforce(a, b), lambda: f"{a} | {b}")
        ok = (dab == wasserstein1(b, a) and (dab == 0) == (a == b)
              and wasserstein1(a, c) <= dab + wasserstein1(b, c))
        metric.record(ok, lambda: f"{a} | {b} | {c}")

    nb = ctx.check(report, "weak neighbourhoods monotone in epsilon")
    for _ in range(ctx.samples):
        mu0, mu = ctx.rng.choice(ctx.measures), ctx.rng.choice(ctx.measures)
        sets = [U for U in subsets(space.points) if ctx.rng.random() < 0.3]
        eps = Fraction(ctx.rng.randint(1, 12), 12)
        spec = NeighborhoodSpec(mu0, sets, eps)
        if weak_nbhd_contains(mu, spec):
            nb.record(weak_nbhd_contains(mu, spec.with_epsilon(eps + Fraction(1, 7))), str(mu))

    if len(space) >= 2 and ctx.pf:
        for _ in range(min(ctx.samples, 8)):
            mu0 = ctx.rng.choice(ctx.pf)
            dom = retract_to_dirac(mu0).support[0]
            V = {dom} | {p for p in space.points if ctx.rng.random() < 0.5}
            eps = ctx.rng.choice([Fraction(1, 10), Fraction(1, 4), Fraction(1, 3)])
            report.probes.append(openness_probe(mu0, V, eps, denom=min(ctx.max_denom, 10)))


_RUNNERS = {"core": _core, "pf": _pf, "omega": _omega, "transfer": _transfer, "probes": _probes}


def run_suite(suite: str, space: FiniteSpace, samples: int, seed: int,
              max_denom: int = 6) -> SuiteReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ctx = _Ctx(space, samples, seed, max_denom)
    report = SuiteReport(suite, space, seed, samples)
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    for name in names:
        _RUNNERS[name](ctx, report)
    return report
