from fractions import Fraction as F
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pfspace import (
    FiniteSpace,
    Measure,
    PointMap,
    canonicalize,
    convex_combine,
    mass_of_set,
    pushforward,
)
from pfspace.errors import (
    InvalidSpace,
    MassSumViolation,
    NegativeMass,
    ParameterOutOfRange,
    SpaceMismatch,
    UnknownPoint,
)
from pfspace.lattice import enumerate_measures, lattice_vectors, subsets

from conftest import measure

POINTS = "abcd"
SPACE = FiniteSpace.discrete(POINTS)


@st.composite
def raw_measures(draw, space=SPACE, max_atoms=6):
    """Unnormalised (point, weight) lists turned into raw inputs summing to 1."""
    n = draw(st.integers(1, max_atoms))
    pts = draw(st.lists(st.sampled_from(space.points), min_size=n, max_size=n))
    weights = draw(st.lists(st.integers(0, 20), min_size=n, max_size=n))
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    return [(p, F(w, total)) for p, w in zip(pts, weights)]


measures = raw_measures().map(lambda raw: canonicalize(raw, SPACE))


class TestFiniteSpace:
    def test_rejects_bad_metrics(self):
        with pytest.raises(InvalidSpace):
            FiniteSpace(("a", "b"), [[0, 1], [2, 0]])
        with pytest.raises(InvalidSpace):
            FiniteSpace(("a", "b", "c"), [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        with pytest.raises(InvalidSpace):
            FiniteSpace(("a", "a"), [[0, 1], [1, 0]])
        with pytest.raises(InvalidSpace):
            FiniteSpace((), [])

    def test_subspace_keeps_order_and_metric(self, line3):
        sub = line3.subspace(["c", "a"])
        assert sub.points == ("a", "c")
        assert sub.distance("a", "c") == 3


class TestCanonicalize:
    def test_merges_duplicates(self, X2):
        mu = canonicalize([("a", F(1, 2)), ("a", F(1, 4)), ("b", F(1, 4))], X2)
        assert mu.atoms == (("a", F(3, 4)), ("b", F(1, 4)))

    def test_drops_zero_atoms(self, X2):
        assert canonicalize([("a", 1), ("b", 0)], X2).atoms == (("a", F(1)),)

    def test_sorts_by_point_order(self, X2):
        mu = canonicalize([("b", F(1, 3)), ("a", F(2, 3))], X2)
        assert mu.atoms == (("a", F(2, 3)), ("b", F(1, 3)))

    def test_errors(self, X2):
        with pytest.raises(MassSumViolation):
            canonicalize([("a", F(1, 2))], X2)
        with pytest.raises(UnknownPoint):
            canonicalize([("z", 1)], X2)
        with pytest.raises(NegativeMass):
            canonicalize([("a", F(3, 2)), ("b", F(-1, 2))], X2)

    def test_rejects_floats(self, X2):
        with pytest.raises(TypeError):
            canonicalize([("a", 0.5), ("b", 0.5)], X2)

    def test_constructor_rejects_noncanonical(self, X2):
        with pytest.raises(ValueError):
            Measure(X2, (("b", F(1, 2)), ("a", F(1, 2))))

    @given(raw_measures())
    def test_idempotent(self, raw):
        mu = canonicalize(raw, SPACE)
        assert canonicalize(mu.atoms, SPACE) == mu
        assert all(m > 0 for m in mu.masses) and sum(mu.masses) == 1


class TestConvexCombine:
    def test_endpoints(self, X3):
        mu, nu = measure(X3, a="1/2", b="1/2"), measure(X3, c=1)
        assert convex_combine(0, mu, nu) == mu
        assert convex_combine(1, mu, nu) == nu

    def test_midpoint_of_diracs(self, X2):
        out = convex_combine(F(1, 2), Measure.dirac(X2, "a"), Measure.dirac(X2, "b"))
        assert out == measure(X2, a="1/2", b="1/2")

    def test_errors(self, X2, X3):
        with pytest.raises(ParameterOutOfRange):
            convex_combine(F(3, 2), Measure.dirac(X2, "a"), Measure.dirac(X2, "b"))
        with pytest.raises(SpaceMismatch):
            convex_combine(F(1, 2), Measure.dirac(X2, "a"), Measure.dirac(X3, "b"))

    @given(measures, measures, measures, st.integers(0, 12), st.integers(0, 12))
    def test_association_order_irrelevant(self, a, b, c, i, j):
        lo, hi = sorted((F(i, 12), F(j, 12)))
        wa, wb, wc = lo, hi - lo, 1 - hi
        direct = canonicalize([(p, wa * m) for p, m in a.atoms]
                              + [(p, wb * m) for p, m in b.atoms]
                              + [(p, wc * m) for p, m in c.atoms], SPACE)
        ab = a if wa + wb == 0 else convex_combine(wb / (wa + wb), a, b)
        bc = b if wb + wc == 0 else convex_combine(wc / (wb + wc), b, c)
        assert convex_combine(wc, ab, c) == direct == convex_combine(wb + wc, a, bc)


class TestPushforward:
    def test_identity(self, X3):
        mu = measure(X3, a="1/2", b="1/3", c="1/6")
        assert pushforward(mu, PointMap.identity(X3)) == mu

    def test_collapse(self, X2):
        Y = FiniteSpace.discrete("c")
        f = PointMap(X2, Y, {"a": "c", "b": "c"})
        assert pushforward(measure(X2, a="1/2", b="1/2"), f) == Measure.dirac(Y, "c")

    def test_relabel_checked_on_every_subset(self, X2):
        Y = FiniteSpace.discrete("pq")
        f = PointMap(X2, Y, {"a": "p", "b": "q"})
        mu = measure(X2, a="2/3", b="1/3")
        image = pushforward(mu, f)
        # oracle: mass of every target set equals the mass of its preimage
        for W in subsets(Y.points):
            assert mass_of_set(image, W) == mass_of_set(mu, [x for x in X2.points if f(x) in W])
        assert image == measure(Y, p="2/3", q="1/3")

    def test_space_mismatch(self, X2, X3):
        with pytest.raises(SpaceMismatch):
            pushforward(Measure.dirac(X3, "a"), PointMap.identity(X2))

    @settings(max_examples=60)
    @given(measures, st.lists(st.sampled_from(POINTS), min_size=4, max_size=4))
    def test_preimage_law(self, mu, images):
        f = PointMap(SPACE, SPACE, dict(zip(POINTS, images)))
        image = pushforward(mu, f)
        assert sum(image.masses) == 1
        for W in subsets(POINTS):
            assert mass_of_set(image, W) == mass_of_set(mu, [x for x in POINTS if f(x) in W])


class TestMassOfSet:
    def test_examples(self, X2):
        mu = measure(X2, a="3/4", b="1/4")
        assert mass_of_set(mu, X2.points) == 1
        assert mass_of_set(mu, []) == 0
        assert mass_of_set(mu, ["b"]) == F(1, 4)

    def test_unknown_point(self, X2):
        with pytest.raises(UnknownPoint):
            mass_of_set(Measure.dirac(X2, "a"), ["z"])

    @given(measures, st.sets(st.sampled_from(POINTS)), st.sets(st.sampled_from(POINTS)))
    def test_additive(self, mu, U, V):
        V = V - U
        assert mass_of_set(mu, U | V) == mass_of_set(mu, U) + mass_of_set(mu, V)


def test_lattice_enumeration_counts():
    # oracle: every (i/q, j/q, rest) with q <= 4, deduplicated as Fractions
    brute = set()
    for q in range(1, 5):
        for i, j in itertools.product(range(q + 1), repeat=2):
            if i + j <= q:
                brute.add((F(i, q), F(j, q), 1 - F(i, q) - F(j, q)))
    assert set(lattice_vectors(3, 4)) == brute
    assert len(enumerate_measures(FiniteSpace.discrete("abc"), 4)) == len(brute)
