from fractions import Fraction as F

import pytest

from pfspace import Measure
from pfspace.errors import ParameterOutOfRange, UnknownMap
from pfspace.lab import (
    NeighborhoodSpec,
    closure_probe,
    continuity_core_search,
    continuity_probe,
    degenerate_family,
    openness_probe,
    openness_witness,
    weak_nbhd_contains,
)
from pfspace.lab.probes import retract_to_pf_with_support, seam_identity_holds
from pfspace.lab.wasserstein import wasserstein1

from conftest import measure


class TestNeighborhoods:
    def test_contains(self, X3):
        mu0 = measure(X3, a="2/3", b="1/3")
        spec = NeighborhoodSpec(mu0, [{"a"}], F(1, 3))
        assert weak_nbhd_contains(mu0, spec)
        assert weak_nbhd_contains(measure(X3, a="1/2", c="1/2"), spec)
        # strict inequality at the boundary
        assert not weak_nbhd_contains(measure(X3, a="1/3", c="2/3"), spec)

    def test_epsilon_positive(self, X2):
        with pytest.raises(ParameterOutOfRange):
            NeighborhoodSpec(Measure.dirac(X2, "a"), [{"a"}], 0)

    def test_epsilon_monotone(self, X3):
        mu0 = measure(X3, a="3/4", b="1/4")
        small = NeighborhoodSpec(mu0, [{"a"}, {"a", "b"}], F(1, 5))
        big = small.with_epsilon(F(1, 3))
        from pfspace.lattice import enumerate_measures
        for mu in enumerate_measures(X3, 8):
            if weak_nbhd_contains(mu, small):
                assert weak_nbhd_contains(mu, big)

    def test_witness(self, X3):
        mu0 = measure(X3, a="3/4", b="1/8", c="1/8")
        w = openness_witness(mu0, "b", {"a", "b"})
        assert w == measure(X3, b="7/8", c="1/8")

    def test_witness_needs_point_in_V(self, X3):
        # moving 2/3 onto b merges with b's 1/3 and is still fine
        mu0 = measure(X3, a="2/3", b="1/3")
        assert openness_witness(mu0, "b", {"a", "b"}) == Measure.dirac(X3, "b")
        with pytest.raises(ParameterOutOfRange):
            openness_witness(mu0, "c", {"a", "b"})

    def test_witness_merges_onto_atom(self, X4):
        # n = 3 atoms, dominant 3/4; moving it to c merges 3/4 + 1/8 = 7/8,
        # support shrinks to 2 and the witness stays in P_f
        mu0 = measure(X4, a="3/4", b="1/8", c="1/8")
        assert openness_witness(mu0, "c", {"a", "c"}) == measure(X4, b="1/8", c="7/8")


class TestOpenness:
    def test_small_epsilon_passes(self, X3):
        mu0 = measure(X3, a="2/3", b="1/3")
        rep = openness_probe(mu0, {"a"}, F(1, 3))
        assert rep.verdict == "pass"
        assert rep.findings["image"] == ["a"]

    def test_large_epsilon_informational(self, X3):
        mu0 = measure(X3, a="2/3", b="1/3")
        rep = openness_probe(mu0, {"a"}, F(2, 5))
        assert rep.verdict == "informational"
        assert rep.findings["escaped"]
        assert rep.counterexamples

    def test_off_lattice_centre(self, X3):
        mu0 = measure(X3, a="7/9", b="2/9")
        rep = openness_probe(mu0, {"a", "b"}, F(1, 4), denom=6)
        assert rep.passed and rep.findings["image"] == ["a", "b"]


class TestContinuity:
    def test_core_search_clean(self, X3):
        rep = continuity_core_search(X3, 8)
        assert rep.verdict == "pass" and rep.findings["violations"] == 0
        assert rep.samples > 0

    def test_core_search_fails_above_third(self, X3):
        rep = continuity_core_search(X3, 10, F(2, 5))
        assert rep.findings["violations"] > 0
        assert rep.verdict == "informational"

    @pytest.mark.parametrize("map_id", ["retract_to_dirac", "retract_to_pf", "mass_transfer_into"])
    def test_support_preserving(self, line3, map_id):
        rep = continuity_probe(map_id, line3, 6, seed=1)
        assert rep.verdict == "pass", rep.to_json()
        assert rep.samples > 0
        assert rep.buckets[-1].worst * 2 <= rep.buckets[0].worst or rep.buckets[-1].worst == 0

    def test_degenerate_is_informational(self, line3):
        rep = continuity_probe("retract_to_pf", line3, 4, scheme="support-degenerate")
        assert rep.verdict == "informational"
        fam = rep.findings["degenerate_family"]
        assert fam["gap"] == fam["expected_gap"] == [1, 12]

    def test_unknown_map(self, X3):
        with pytest.raises(UnknownMap):
            continuity_probe("nope", X3, 3)

    def test_samples_positive(self, X3):
        with pytest.raises(ParameterOutOfRange):
            continuity_probe("retract_to_dirac", X3, 0)


class TestSeam:
    def test_seam_identity(self, X3):
        assert seam_identity_holds(measure(X3, a="3/4", b="1/8", c="1/8"))
        assert not seam_identity_holds(measure(X3, a="4/5", b="1/10", c="1/10"))

    def test_degenerate_gap_exact(self, line3):
        fam = degenerate_family(line3)
        d12 = line3.distance("a", "b")
        assert F(*fam["gap"]) == d12 / 12
        # sampled outputs approach the gap, not zero
        outs = [F(*s["output_dist"]) for s in fam["sequence"]]
        ins = [F(*s["input_dist"]) for s in fam["sequence"]]
        assert ins[-1] < ins[0] and outs[-1] >= d12 / 12

    def test_branch_limit(self, line3):
        limit = measure(line3, a="3/5", b="2/5")
        assert retract_to_pf_with_support(limit, 3) == measure(line3, a="3/4", b="1/4")
        assert wasserstein1(retract_to_pf_with_support(limit, 3),
                            measure(line3, a="2/3", b="1/3")) == F(1, 12)


class TestClosure:
    def test_closure(self, X4):
        rep = closure_probe(X4, 5, seed=2)
        assert rep.verdict == "pass"
        assert rep.samples == 7

    def test_report_json(self, X3):
        doc = closure_probe(X3, 1).to_json()
        assert doc["kind"] == "closure" and doc["verdict"] == "pass"


class TestVerdictRule:
    def _report(self, rows):
        from pfspace.lab.probes import Bucket, ProbeReport, _finalize_buckets
        rep = ProbeReport("continuity", 1)
        rep.buckets = [Bucket(F(d), F(w), c) for d, w, c in rows]
        _finalize_buckets(rep)
        return rep.verdict

    def test_shrinking_modulus_passes(self):
        assert self._report([("1/2", "1/2", 3), ("1/4", "1/4", 3), ("1/8", "1/8", 3)]) == "pass"

    def test_sparse_coarse_bucket_does_not_mask_convergence(self):
        rows = [("1/8", "1/24", 1), ("3/4", "3/4", 8), ("3/8", "3/8", 8), ("3/32", "3/32", 8)]
        assert self._report(rows) == "pass"

    def test_jump_is_flagged(self):
        # output stays near 1/12 while the input distance halves
        rows = [("1/2", "1/3", 4), ("1/4", "1/6", 4), ("1/8", "1/12", 4), ("1/64", "1/12", 4)]
        assert self._report(rows) == "informational"

    def test_empty_is_informational(self):
        assert self._report([("0", "0", 0)]) == "informational"
