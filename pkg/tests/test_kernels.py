from fractions import Fraction as F

import numpy as np
import pytest

from pfspace import FiniteSpace, is_pf, omega_half_membership, pf_membership
from pfspace import kernels
from pfspace.lab import NeighborhoodSpec, weak_nbhd_contains
from pfspace.lattice import compositions, enumerate_measures

BACKENDS = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
X3 = FiniteSpace.discrete("abc")


@pytest.fixture(params=BACKENDS)
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


def lattice(k, L):
    return np.array(list(compositions(L, k)), dtype=np.int64)


def test_env_flag_values():
    assert kernels.backend() in ("numba", "numpy")
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass


def test_to_lattice_roundtrip():
    ms = enumerate_measures(X3, 4)
    N, L = kernels.to_lattice(ms)
    assert (N.sum(axis=1) == L).all()
    for row, mu in zip(N, ms):
        assert [F(int(v), L) for v in row] == list(mu.vector())


def test_dominant_matches_fraction_path(backend):
    ms = enumerate_measures(X3, 12)
    N, L = kernels.to_lattice(ms)
    dom = kernels.dominant_index(N, L)
    for d, mu in zip(dom, ms):
        cert = pf_membership(mu)
        if is_pf(mu):
            assert X3.points[d] == cert.dominant_point
        else:
            assert d == -1


def test_omega_half_matches_fraction_path(backend):
    ms = [mu for mu in enumerate_measures(X3, 12)]
    N, L = kernels.to_lattice(ms)
    mask = kernels.omega_half_mask(N, L)
    for flag, mu in zip(mask, ms):
        assert bool(flag) == (not mu.is_dirac() and bool(omega_half_membership(mu)))


def test_set_masses(backend):
    N = lattice(3, 6)
    masks = kernels.all_masks(3)
    out = kernels.set_masses(N, masks)
    for i, row in enumerate(N):
        for s, m in enumerate(masks):
            assert out[i, s] == sum(row[j] for j in range(3) if (m >> j) & 1)


def test_backends_agree():
    N = lattice(4, 8)
    L = 8
    results = {}
    for name in BACKENDS:
        with kernels.use_backend(name):
            results[name] = (
                kernels.dominant_index(N, L).tolist(),
                kernels.omega_half_mask(N, L).tolist(),
                kernels.continuity_search(N, L, F(1, 3)),
                kernels.neighborhood_image(N, L, 6, 0b0001, F(2, 5)),
            )
    assert len(set(map(repr, results.values()))) == 1


def test_continuity_search_matches_fractions(backend):
    ms = enumerate_measures(X3, 6)
    N, L = kernels.to_lattice(ms)
    eps = F(1, 3)
    checked, violations, _ = kernels.continuity_search(N, L, eps)
    pf = [mu for mu in ms if is_pf(mu)]
    ref_checked = ref_viol = 0
    for mu0 in pf:
        if len(mu0) < 2:
            continue
        x0 = pf_membership(mu0).dominant_point
        for bits in range(1, 8):
            V = {X3.points[j] for j in range(3) if (bits >> j) & 1}
            if x0 not in V:
                continue
            spec = NeighborhoodSpec(mu0, [V], eps)
            for mu in pf:
                if weak_nbhd_contains(mu, spec):
                    ref_checked += 1
                    ref_viol += pf_membership(mu).dominant_point not in V
    assert (checked, violations) == (ref_checked, ref_viol)
    assert violations == 0


def test_neighborhood_image_detects_escape(backend):
    # μ0 = (2/3, 1/3), V = {a}: at ε = 2/5 the measure (3/10, 7/10) is inside
    N = lattice(2, 60)
    bits, hits = kernels.neighborhood_image(N, 60, 40, 0b01, F(2, 5))
    assert bits == 0b11 and hits > 0
    bits, _ = kernels.neighborhood_image(N, 60, 40, 0b01, F(1, 3))
    assert bits == 0b01
