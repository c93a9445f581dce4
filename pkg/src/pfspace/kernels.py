"""Batch kernels over integer-lattice measures.

A batch of measures on a k-point space with common denominator L is an
``int64`` array ``N`` of shape ``(M, k)`` whose rows sum to ``L``; the mass at
point ``j`` of measure ``i`` is ``N[i, j] / L``.  All comparisons are done in
integers, so results are exact.

Two implementations exist for every kernel: numba ``@njit`` loops and plain
numpy.  ``PFSPACE_BACKEND=numpy`` (or a missing numba) selects numpy; the
default is numba.  :func:`use_backend` switches temporarily.
"""

from __future__ import annotations

import contextlib
import os
from fractions import Fraction

import numpy as np

try:
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _default_backend() -> str:
    name = os.environ.get("PFSPACE_BACKEND", "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"PFSPACE_BACKEND must be 'numba' or 'numpy', not {name!r}")
    if name == "numba" and not HAS_NUMBA:
        return "numpy"
    return name


_BACKEND = _default_backend()


def backend() -> str:
    return _BACKEND


@contextlib.contextmanager
def use_backend(name: str):
    global _BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not installed")
    old, _BACKEND = _BACKEND, name
    try:
        yield
    finally:
        _BACKEND = old


def to_lattice(measures, denom: int | None = None) -> tuple[np.ndarray, int]:
    """Pack canonical measures (all on one space) into an integer batch."""
    measures = list(measures)
    if not measures:
        raise ValueError("empty batch")
    if denom is None:
        from .lattice import common_denominator

        denom = common_denominator(measures)
    out = np.zeros((len(measures), len(measures[0].space)), dtype=np.int64)
    for i, mu in enumerate(measures):
        for j, m in enumerate(mu.vector()):
            scaled = m * denom
            if scaled.denominator != 1:
                raise ValueError(f"{m} is not a multiple of 1/{denom}")
            out[i, j] = scaled.numerator
    return out, denom


def all_masks(k: int) -> np.ndarray:
    return np.arange(1, 1 << k, dtype=np.int64)


# ---------------------------------------------------------------- numba


@njit(cache=True)
def _dominant_nb(N, L):
    M, k = N.shape
    out = np.full(M, -1, dtype=np.int64)
    for i in range(M):
        n = 0
        best = -1
        arg = -1
        for j in range(k):
            v = N[i, j]
            if v > 0:
                n += 1
                if v > best:
                    best = v
                    arg = j
        if best * (n + 1) >= n * L:
            out[i] = arg
    return out


@njit(cache=True)
def _omega_half_nb(N, L):
    M, k = N.shape
    out = np.zeros(M, dtype=np.bool_)
    for i in range(M):
        n = 0
        ok = True
        for j in range(k):
            v = N[i, j]
            if v > 0:
                n += 1
            if 2 * v > L:
                ok = False
        out[i] = ok and n >= 2
    return out


@njit(cache=True)
def _set_masses_nb(N, masks):
    M, k = N.shape
    S = masks.shape[0]
    out = np.zeros((M, S), dtype=np.int64)
    for i in range(M):
        for s in range(S):
            acc = 0
            mk = masks[s]
            for j in range(k):
                if (mk >> j) & 1:
                    acc += N[i, j]
            out[i, s] = acc
    return out


@njit(cache=True)
def _continuity_search_nb(N, L, eps_num, eps_den):
    M, k = N.shape
    dom = _dominant_nb(N, L)
    masks = np.arange(1, 1 << k).astype(np.int64)
    SM = _set_masses_nb(N, masks)
    checked = 0
    violations = 0
    first = np.full(3, -1, dtype=np.int64)
    for i0 in range(M):
        d0 = dom[i0]
        if d0 < 0:
            continue
        n0 = 0
        for j in range(k):
            if N[i0, j] > 0:
                n0 += 1
        if n0 < 2:
            continue
        for s in range(masks.shape[0]):
            mk = masks[s]
            if not (mk >> d0) & 1:
                continue
            m0V = SM[i0, s]
            for i in range(M):
                di = dom[i]
                if di < 0:
                    continue
                if eps_den * (SM[i, s] - m0V) + eps_num * L > 0:
                    checked += 1
                    if not (mk >> di) & 1:
                        violations += 1
                        if first[0] < 0:
                            first[0] = i0
                            first[1] = mk
                            first[2] = i
    return checked, violations, first


@njit(cache=True)
def _image_mask_nb(N, L, m0V, mask, eps_num, eps_den):
    M, k = N.shape
    dom = _dominant_nb(N, L)
    image = 0
    hits = 0
    for i in range(M):
        di = dom[i]
        if di < 0:
            continue
        acc = 0
        for j in range(k):
            if (mask >> j) & 1:
                acc += N[i, j]
        if eps_den * (acc - m0V) + eps_num * L > 0:
            image |= 1 << di
            hits += 1
    return image, hits


# ---------------------------------------------------------------- numpy


def _dominant_np(N, L):
    n = (N > 0).sum(axis=1)
    best = N.max(axis=1)
    arg = N.argmax(axis=1)
    member = best * (n + 1) >= n * L
    return np.where(member, arg, -1).astype(np.int64)


def _omega_half_np(N, L):
    n = (N > 0).sum(axis=1)
    return ((2 * N) <= L).all(axis=1) & (n >= 2)


def _mask_matrix(masks, k):
    return ((masks[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int64)


def _set_masses_np(N, masks):
    return N @ _mask_matrix(masks, N.shape[1]).T


def _continuity_search_np(N, L, eps_num, eps_den):
    M, k = N.shape
    dom = _dominant_np(N, L)
    masks = all_masks(k)
    SM = _set_masses_np(N, masks)
    n = (N > 0).sum(axis=1)
    members = np.flatnonzero(dom >= 0)
    centers = members[n[members] >= 2]
    checked = 0
    violations = 0
    first = np.full(3, -1, dtype=np.int64)
    dom_bits = np.left_shift(1, np.maximum(dom[members], 0))
    for i0 in centers:
        for s, mk in enumerate(masks):
            if not (mk >> dom[i0]) & 1:
                continue
            inside = eps_den * (SM[members, s] - SM[i0, s]) + eps_num * L > 0
            bad = inside & ((mk & dom_bits) == 0)
            checked += int(inside.sum())
            nbad = int(bad.sum())
            if nbad and first[0] < 0:
                first[:] = (i0, mk, members[np.flatnonzero(bad)[0]])
            violations += nbad
    return checked, violations, first


def _image_mask_np(N, L, m0V, mask, eps_num, eps_den):
    dom = _dominant_np(N, L)
    sel = _mask_matrix(np.array([mask], dtype=np.int64), N.shape[1])[0]
    inside = (eps_den * (N @ sel - m0V) + eps_num * L > 0) & (dom >= 0)
    image = 0
    for d in np.unique(dom[inside]):
        image |= 1 << int(d)
    return image, int(inside.sum())


# ---------------------------------------------------------------- dispatch


def _eps(epsilon) -> tuple[int, int]:
    e = Fraction(epsilon)
    return e.numerator, e.denominator


def dominant_index(N: np.ndarray, L: int) -> np.ndarray:
    """Index of the dominant point of each row, or -1 outside P_f."""
    N = np.ascontiguousarray(N, dtype=np.int64)
    return _dominant_nb(N, L) if _BACKEND == "numba" else _dominant_np(N, L)


def omega_half_mask(N: np.ndarray, L: int) -> np.ndarray:
    """Rows with at least two atoms and every mass at most 1/2."""
    N = np.ascontiguousarray(N, dtype=np.int64)
    return _omega_half_nb(N, L) if _BACKEND == "numba" else _omega_half_np(N, L)


def set_masses(N: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """``out[i, s]`` = numerator of mass of row i on the point set ``masks[s]``."""
    N = np.ascontiguousarray(N, dtype=np.int64)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    return _set_masses_nb(N, masks) if _BACKEND == "numba" else _set_masses_np(N, masks)


def continuity_search(N: np.ndarray, L: int, epsilon) -> tuple[int, int, tuple[int, int, int]]:
    """Search for μ₀, V, μ breaking the dominant-point continuity argument.

    Ranges over every centre μ₀ in P_f with at least two atoms, every point
    set V (bitmask) containing μ₀'s dominant point, and every μ in P_f with
    ``μ(V) − μ₀(V) > −ε``.  Returns ``(pairs checked, violations, first)``
    where a violation is a μ whose dominant point is outside V and ``first``
    is ``(i0, mask, i)`` of the first one found, or ``(-1, -1, -1)``.
    """
    N = np.ascontiguousarray(N, dtype=np.int64)
    en, ed = _eps(epsilon)
    fn = _continuity_search_nb if _BACKEND == "numba" else _continuity_search_np
    checked, violations, first = fn(N, L, en, ed)
    return int(checked), int(violations), tuple(int(v) for v in first)


def neighborhood_image(N: np.ndarray, L: int, center_mass: int, mask: int, epsilon) -> tuple[int, int]:
    """Bitmask of dominant points over rows in ⟨μ₀; V; ε⟩ ∩ P_f, and the row count.

    ``center_mass`` is the numerator of μ₀(V) over ``L``.
    """
    N = np.ascontiguousarray(N, dtype=np.int64)
    en, ed = _eps(epsilon)
    fn = _image_mask_nb if _BACKEND == "numba" else _image_mask_np
    image, hits = fn(N, L, int(center_mass), int(mask), en, ed)
    return int(image), int(hits)
