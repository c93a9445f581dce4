"""JSON wire formats.  Rationals always travel as ``[num, den]`` integer pairs."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .measure import FiniteSpace, Measure, PointMap, as_fraction, canonicalize
from .transfer import EmbeddedSubspace


class FormatError(ValueError):
    """Malformed JSON document."""


def rat(value: Fraction) -> list[int]:
    value = Fraction(value)
    return [value.numerator, value.denominator]


def parse_rat(value: Any) -> Fraction:
    if isinstance(value, float):
        raise FormatError(f"floats are not accepted as rationals: {value!r}")
    try:
        return as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from None


def space_to_json(space: FiniteSpace) -> dict:
    return {
        "id": space.name,
        "points": list(space.points),
        "metric": [[rat(d) for d in row] for row in space.metric],
    }


def space_from_json(doc: dict) -> FiniteSpace:
    try:
        points = doc["points"]
        metric = doc["metric"]
    except (KeyError, TypeError):
        raise FormatError("space needs 'points' and 'metric'") from None
    if not all(isinstance(p, str) for p in points):
        raise FormatError("points must be strings")
    rows = [[parse_rat(d) for d in row] for row in metric]
    return FiniteSpace(tuple(points), rows, doc.get("id", "X"))


def measure_to_json(mu: Measure) -> dict:
    return {
        "space_id": mu.space.name,
        "atoms": [{"point": p, "mass": rat(m)} for p, m in mu.atoms],
    }


def measure_from_json(doc: dict, space: FiniteSpace) -> Measure:
    """Parse and canonicalize; ``space_id``, if present, must match ``space``."""
    try:
        atoms = doc["atoms"]
    except (KeyError, TypeError):
        raise FormatError("measure needs 'atoms'") from None
    sid = doc.get("space_id")
    if sid is not None and sid != space.name:
        raise FormatError(f"measure refers to space {sid!r}, got {space.name!r}")
    try:
        raw = [(a["point"], parse_rat(a["mass"])) for a in atoms]
    except (KeyError, TypeError):
        raise FormatError("atoms must be objects with 'point' and 'mass'") from None
    return canonicalize(raw, space)


def point_map_to_json(f: PointMap) -> dict:
    return {"source": f.source.name, "target": f.target.name, "table": dict(f.table)}


def embedding_to_json(emb: EmbeddedSubspace) -> dict:
    order = emb.ambient.index
    return {
        "ambient": space_to_json(emb.ambient),
        "subspace": sorted(emb.subspace_points, key=order.get),
        "U": sorted(emb.neighborhood_points, key=order.get),
        "retraction": {u: emb.retraction[u] for u in sorted(emb.retraction, key=order.get)},
    }


def embedding_from_json(doc: dict) -> EmbeddedSubspace:
    try:
        ambient = space_from_json(doc["ambient"])
        return EmbeddedSubspace(ambient, frozenset(doc["subspace"]),
                                frozenset(doc["U"]), dict(doc["retraction"]))
    except (KeyError, TypeError):
        raise FormatError("embedding needs 'ambient', 'subspace', 'U', 'retraction'") from None


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def dumps(doc: Any, compact: bool = False) -> str:
    """Canonical JSON text (sorted keys, fixed separators, trailing newline)."""
    if compact:
        return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
