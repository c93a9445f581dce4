"""Barycentric grid data for simplex pictures (CSV rows, exact coordinates)."""

from __future__ import annotations

import csv
import io
from fractions import Fraction

from .errors import UnsupportedDimension
from .lattice import compositions
from .measure import FiniteSpace, from_vector
from .omega import omega_half_membership
from .pf import PfCertificate, deformation_homotopy, pf_membership

KINDS = ("pf-region", "omega-half-region", "fiber", "homotopy-path")


def _grid(space: FiniteSpace, grid: int):
    for comp in compositions(grid, len(space)):
        yield from_vector(space, [Fraction(c, grid) for c in comp])


def plot_data(kind: str, space: FiniteSpace, grid: int, point: str | None = None) -> list[dict]:
    """Rows ``{p_1, …, p_k, label[, path, t]}`` over the lattice of step 1/grid.

    Labels:

    * ``pf-region``: ``member`` / ``outside``;
    * ``omega-half-region``: ``member`` / ``outside`` / ``dirac``;
    * ``fiber``: ``fiber`` for measures retracting to δ_point, ``other-fiber``
      for the rest of P_f, ``outside`` otherwise;
    * ``homotopy-path``: one path per P_f grid point, sampled at t = j/grid
      along the deformation homotopy, labelled ``path``.
    """
    if len(space) not in (3, 4):
        raise UnsupportedDimension(f"plots need a 3- or 4-point space, got {len(space)}")
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}")
    if grid < 2:
        raise ValueError("grid must be >= 2")
    if kind == "fiber":
        point = point or space.points[0]
        space.position(point)
    rows = []
    paths = 0

    def coords(mu):
        return {p: str(m) for p, m in zip(space.points, mu.vector())}

    for mu in _grid(space, grid):
        cert = pf_membership(mu)
        if kind == "pf-region":
            label = "member" if isinstance(cert, PfCertificate) else "outside"
        elif kind == "omega-half-region":
            label = "dirac" if mu.is_dirac() else (
                "member" if omega_half_membership(mu) else "outside")
        elif kind == "fiber":
            if not isinstance(cert, PfCertificate):
                label = "outside"
            else:
                label = "fiber" if cert.dominant_point == point else "other-fiber"
        else:
            if not isinstance(cert, PfCertificate):
                continue
            for j in range(grid + 1):
                t = Fraction(j, grid)
                rows.append({**coords(deformation_homotopy(mu, t)), "label": "path",
                             "path": paths, "t": str(t)})
            paths += 1
            continue
        rows.append({**coords(mu), "label": label})
    return rows


def rows_to_csv(rows: list[dict], space: FiniteSpace) -> str:
    extra = [k for k in ("path", "t") if rows and k in rows[0]]
    fields = list(space.points) + ["label"] + extra
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
