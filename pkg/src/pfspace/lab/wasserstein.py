"""Wasserstein-1 distance between measures on a finite metric space.

:func:`wasserstein1` solves the transport LP with the exact simplex in
:mod:`pfspace.lab.lp`.  :func:`wasserstein1_bruteforce` is an independent
oracle: it walks every spanning tree of the bipartite support graph (each
vertex of the transport polytope is the unique flow on some spanning tree),
solves the tree flow by leaf peeling, and keeps the cheapest feasible one.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..measure import Measure, _check_same_space
from . import lp


def _cost_matrix(mu: Measure, nu: Measure):
    space = mu.space
    return [[space.distance(p, q) for q in nu.support] for p in mu.support]


def optimal_coupling(mu: Measure, nu: Measure) -> tuple[Fraction, dict]:
    """Optimal cost and a coupling ``{(p, q): mass}`` (zero entries omitted)."""
    _check_same_space(mu.space, nu.space)
    if mu == nu:
        return Fraction(0), {(p, p): m for p, m in mu.atoms}
    rows, cols = mu.support, nu.support
    m, n = len(rows), len(cols)
    cost = _cost_matrix(mu, nu)
    c = [cost[i][j] for i in range(m) for j in range(n)]
    A, b = [], []
    for i in range(m):
        A.append([1 if k // n == i else 0 for k in range(m * n)])
        b.append(mu.masses[i])
    for j in range(n):
        A.append([1 if k % n == j else 0 for k in range(m * n)])
        b.append(nu.masses[j])
    res = lp.solve(c, A, b)
    plan = {(rows[k // n], cols[k % n]): v for k, v in enumerate(res.x) if v}
    return res.value, plan


def wasserstein1(mu: Measure, nu: Measure) -> Fraction:
    return optimal_coupling(mu, nu)[0]


def _tree_flow(edges, supply, demand):
    """Flow on a spanning tree of K_{m,n} meeting the marginals, or None."""
    m, n = len(supply), len(demand)
    resid = list(supply) + list(demand)
    adj = {v: set() for v in range(m + n)}
    for i, j in edges:
        adj[i].add(m + j)
        adj[m + j].add(i)
    flow = {}
    leaves = [v for v in adj if len(adj[v]) == 1]
    while leaves:
        v = leaves.pop()
        if not adj[v]:
            continue
        (u,) = adj[v]
        f = resid[v]
        if f < 0:
            return None
        key = (v, u - m) if v < m else (u, v - m)
        flow[key] = f
        resid[v] -= f
        resid[u] -= f
        adj[v].discard(u)
        adj[u].discard(v)
        if len(adj[u]) == 1:
            leaves.append(u)
    if any(r != 0 for r in resid):
        return None
    if any(f < 0 for f in flow.values()):
        return None
    return flow


def _is_spanning_tree(edges, m: int, n: int) -> bool:
    parent = list(range(m + n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in edges:
        a, b = find(i), find(m + j)
        if a == b:
            return False
        parent[a] = b
    return True


def wasserstein1_bruteforce(mu: Measure, nu: Measure) -> Fraction:
    """Minimum transport cost over all vertices of the transport polytope."""
    _check_same_space(mu.space, nu.space)
    m, n = len(mu.atoms), len(nu.atoms)
    cost = _cost_matrix(mu, nu)
    all_edges = [(i, j) for i in range(m) for j in range(n)]
    best = None
    for edges in itertools.combinations(all_edges, m + n - 1):
        if not _is_spanning_tree(edges, m, n):
            continue
        flow = _tree_flow(edges, mu.masses, nu.masses)
        if flow is None:
            continue
        value = sum((cost[i][j] * f for (i, j), f in flow.items()), Fraction(0))
        if best is None or value < best:
            best = value
    if best is None:
        raise AssertionError("transport polytope has no vertex")
    return best
