"""Command-line entry point.

Exit status: 0 on success, 1 on a domain error or failed invariant, 2 on
usage or input-format errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .errors import InvalidSpace, MeasureError
from .measure import FiniteSpace, Measure, PointMap
from .omega import (
    PairDecomposition,
    half_neighborhood_contains,
    omega_half_membership,
    pair_decompose,
    retract_to_pf,
)
from .pf import (
    PfCertificate,
    deformation_homotopy,
    fiber_homotopy,
    functor_map,
    pf_membership,
    retract_to_dirac,
)
from .plot import KINDS, plot_data, rows_to_csv
from .serialize import (
    FormatError,
    dumps,
    embedding_from_json,
    load_json,
    measure_from_json,
    measure_to_json,
    rat,
    space_from_json,
)
from .suites import SUITES, run_suite
from .transfer import mass_transfer_into, transfer_retract

MAPS = (
    "retract_to_dirac",
    "fiber_homotopy",
    "deformation_homotopy",
    "pf_membership",
    "functor_map",
    "omega_half_membership",
    "pair_decompose",
    "retract_to_pf",
    "half_neighborhood_contains",
    "mass_transfer_into",
    "transfer_retract",
)


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an invariant suite and write a report")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--space", required=True, type=Path, help="space JSON file")
    v.add_argument("--samples", type=_positive_int, default=32)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-denom", type=_positive_int, default=6,
                   help="denominator bound for exhaustive enumeration")
    v.add_argument("--out", type=Path, help="report path (default: stdout)")
    v.add_argument("--format", choices=("json", "csv"), default="json")

    e = sub.add_parser("eval", help="apply one map to a measure")
    e.add_argument("map", choices=MAPS)
    e.add_argument("--measure", required=True, type=Path)
    e.add_argument("--space", type=Path, help="space JSON, if the measure file has none")
    e.add_argument("--set", dest="subset", help="comma-separated point set U")
    e.add_argument("--t", type=_rational, help="homotopy time in [0, 1]")
    e.add_argument("--point", help="point for half_neighborhood_contains")
    e.add_argument("--embedding", type=Path, help="embedding JSON for transfer_retract")
    e.add_argument("--map-file", type=Path, help="point map JSON for functor_map")

    p = sub.add_parser("plot", help="emit simplex grid data as CSV")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--space", required=True, type=Path)
    p.add_argument("--grid", type=_positive_int, default=12)
    p.add_argument("--point", help="fiber base point (kind=fiber)")
    p.add_argument("--out", type=Path)
    return parser


def _load_space(path: Path) -> FiniteSpace:
    return space_from_json(load_json(path))


def _load_measure(args) -> Measure:
    doc = load_json(args.measure)
    if isinstance(doc, dict) and "measure" in doc:
        space = space_from_json(doc["space"])
        return measure_from_json(doc["measure"], space)
    if args.embedding is not None:
        space = embedding_from_json(load_json(args.embedding)).ambient
    elif isinstance(doc, dict) and isinstance(doc.get("space"), dict):
        space = space_from_json(doc["space"])
    elif args.space is not None:
        space = _load_space(args.space)
    else:
        raise UsageError("the measure file carries no space; pass --space")
    return measure_from_json(doc, space)


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"this map needs {flag}")
    return value


def _evaluate(args) -> dict:
    mu = _load_measure(args)
    name = args.map
    if name == "retract_to_dirac":
        return measure_to_json(retract_to_dirac(mu))
    if name == "fiber_homotopy":
        return measure_to_json(fiber_homotopy(mu, _need(args.t, "--t")))
    if name == "deformation_homotopy":
        return measure_to_json(deformation_homotopy(mu, _need(args.t, "--t")))
    if name == "pf_membership":
        cert = pf_membership(mu)
        if isinstance(cert, PfCertificate):
            return {"member": True, "certificate": cert.to_json()}
        return {"member": False, "max_mass": rat(cert.max_mass), "threshold": rat(cert.threshold)}
    if name == "functor_map":
        doc = load_json(_need(args.map_file, "--map-file"))
        target = space_from_json(doc["target"]) if "target" in doc else mu.space
        image, cert = functor_map(mu, PointMap(mu.space, target, doc["table"]))
        return {"measure": measure_to_json(image), "certificate": cert.to_json()}
    if name == "omega_half_membership":
        return {"member": omega_half_membership(mu)}
    if name == "pair_decompose":
        dec = pair_decompose(mu)
        if isinstance(dec, PairDecomposition):
            return dec.to_json()
        return {"infeasible": True, "point": dec.point, "excess": rat(dec.residual)}
    if name == "retract_to_pf":
        return measure_to_json(retract_to_pf(mu))
    if name == "half_neighborhood_contains":
        return {"contains": half_neighborhood_contains(mu, _need(args.point, "--point"))}
    if name == "mass_transfer_into":
        U = [p for p in _need(args.subset, "--set").split(",") if p]
        return measure_to_json(mass_transfer_into(mu, U))
    emb = embedding_from_json(load_json(_need(args.embedding, "--embedding")))
    return measure_to_json(transfer_retract(mu, emb))


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            space = _load_space(args.space)
            report = run_suite(args.suite, space, args.samples, args.seed, args.max_denom)
            text = dumps(report.to_json()) if args.format == "json" else report.to_csv()
            _write(text, args.out)
            for p in report.informational:
                print(f"informational: {p.label}", file=sys.stderr)
            if not report.passed:
                failed = [c.name for c in report.checks if not c.passed]
                failed += [p.label or p.kind for p in report.probes if not p.passed]
                print("FAILED: " + "; ".join(failed), file=sys.stderr)
                return 1
            return 0
        if args.command == "eval":
            _write(dumps(_evaluate(args), compact=True), None)
            return 0
        space = _load_space(args.space)
        _write(rows_to_csv(plot_data(args.kind, space, args.grid, args.point), space), args.out)
        return 0
    except (FormatError, UsageError, InvalidSpace, OSError) as exc:
        print(f"pfspace: error: {exc}", file=sys.stderr)
        return 2
    except MeasureError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        print(f"pfspace: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
