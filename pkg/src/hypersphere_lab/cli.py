"""Command-line surface: generate, validate, count, transform, and compare.

Every JSON artifact embeds the full run configuration (flags and seed), so
identical invocations reproduce byte-identical outputs.  Exit codes:
0 success/certified, 2 usage or input error, 3 non-certified run
(indeterminate interval predicates), 4 general-position violation,
5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import constructions, counting, geometry, scalars
from .errors import (
    ConsistencyError,
    DomainError,
    GeneralPositionError,
    GenerationError,
    HypersphereLabError,
    PoleError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CERTIFIED = 3
EXIT_GENERAL_POSITION = 4
EXIT_INCONSISTENT = 5


@dataclass
class RunConfig:
    """Flags echoed into every output artifact for reproducibility."""

    subcommand: str
    input: str | None = None
    output: str | None = None
    csv_out: str | None = None
    backend: str | None = None
    bits: int | None = None
    threads: int | None = None
    seed: int | None = None
    d: int | None = None
    n: int | None = None
    l: int | None = None
    kind: str | None = None
    center: str | None = None
    scan: bool = False

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None and v is not False}


def _emit_json(payload: dict, config: RunConfig):
    payload = dict(payload)
    payload["run"] = config.to_json()
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(row)


def _load_pointset(path: str) -> geometry.PointSet:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from None
    try:
        return geometry.PointSet.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise DomainError(f"{path}: malformed point set ({exc})") from None


def _to_interval_pointset(ps: geometry.PointSet, bits: int) -> geometry.PointSet:
    points = []
    for p in ps.points:
        coords = []
        for c in p:
            if isinstance(c, scalars.CycloElement):
                coords.append(scalars.IntervalScalar(c.real_enclosure(bits), bits))
            else:
                coords.append(scalars.IntervalScalar.from_fraction(c, bits))
        points.append(tuple(coords))
    meta = dict(ps.metadata)
    meta["embedded_bits"] = bits
    return geometry.PointSet.build(points, metadata=meta)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_generate(config: RunConfig) -> int:
    if config.kind == "trivial":
        ps = constructions.trivial_config(config.d, config.n, seed=config.seed)
        if config.backend not in (None, "rational", "interval"):
            raise DomainError("trivial configurations use the rational backend")
    elif config.kind == "coset":
        params = constructions.CurveParams.default(config.d)
        spec = constructions.CosetSpec(params, config.n, config.l or 0)
        ps = constructions.coset_config(spec)
        if config.backend not in (None, "cyclotomic", "interval"):
            raise DomainError("coset configurations use the cyclotomic backend")
    else:
        raise DomainError(f"unknown generator kind {config.kind!r}")
    if config.backend == "interval":
        ps = _to_interval_pointset(ps, config.bits or 256)
    _emit_json(ps.to_json(), config)
    return EXIT_OK


def _cmd_validate(config: RunConfig) -> int:
    ps = _load_pointset(config.input)
    witness = geometry.general_position_check(ps)
    _emit_json(
        {"ok": witness is None, "witness": list(witness) if witness else None},
        config,
    )
    return EXIT_OK if witness is None else EXIT_GENERAL_POSITION


def _cmd_count(config: RunConfig) -> int:
    ps = _load_pointset(config.input)
    spec = counting.spectrum(ps, threads=config.threads or 1)
    _emit_json({"spectrum": spec.to_json()}, config)
    if config.csv_out:
        rows = [("m", "N_m")] + [(m, nm) for m, nm in sorted(spec.counts.items())]
        _write_csv(config.csv_out, rows)
    return EXIT_OK if spec.certified else EXIT_NOT_CERTIFIED


def _cmd_lift(config: RunConfig) -> int:
    ps = _load_pointset(config.input)
    _emit_json(geometry.lift_set(ps).to_json(), config)
    return EXIT_OK


def _cmd_invert(config: RunConfig) -> int:
    ps = _load_pointset(config.input)
    try:
        center = tuple(Fraction(part) for part in config.center.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad --center value {config.center!r}: {exc}") from None
    if len(center) != ps.dimension:
        raise DomainError(
            f"--center has {len(center)} coordinates, point set has dimension {ps.dimension}"
        )
    _emit_json(geometry.invert_set(ps, center).to_json(), config)
    return EXIT_OK


def _cmd_oracle(config: RunConfig) -> int:
    if config.scan:
        payload = constructions.residue_oracle_scan(config.n, config.d)
    else:
        payload = constructions.residue_oracle(config.n, config.d, config.l or 0).to_json()
    _emit_json(payload, config)
    return EXIT_OK


def _cmd_formula(config: RunConfig) -> int:
    payload = constructions.closed_form_counts(config.d, config.n)
    payload["ordinary"] = payload["min_ordinary"]
    payload["dplus2"] = payload["max_dplus2"]
    payload["caveat"] = constructions.FORMULA_CAVEAT
    _emit_json(payload, config)
    return EXIT_OK


def _cmd_compare(config: RunConfig) -> int:
    ps = _load_pointset(config.input)
    report = constructions.compare_report(ps, threads=config.threads or 1)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(report.to_markdown())
    else:
        sys.stdout.write(report.to_markdown())
    if config.csv_out:
        _write_csv(config.csv_out, report.csv_rows())
    hard = report.matches.get("engine_equals_oracle")
    return EXIT_OK if hard in (None, True) else EXIT_INCONSISTENT


def _cmd_selftest(config: RunConfig) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest() else 1


HANDLERS = {
    "generate": _cmd_generate,
    "validate": _cmd_validate,
    "count": _cmd_count,
    "lift": _cmd_lift,
    "invert": _cmd_invert,
    "oracle": _cmd_oracle,
    "formula": _cmd_formula,
    "compare": _cmd_compare,
    "selftest": _cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypersphere-lab",
        description="Exact ordinary/(d+2)-point hypersphere counting workbench",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, inp=False, out=True):
        if inp:
            p.add_argument("input", help="point set JSON file")
        if out:
            p.add_argument("-o", "--output", help="output path (default: stdout)")

    g = sub.add_parser("generate", help="generate a configuration")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--l", type=int, default=0)
    g.add_argument("--kind", choices=["trivial", "coset"], required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--backend", choices=["rational", "cyclotomic", "interval"])
    g.add_argument("--bits", type=int)
    add_common(g)

    v = sub.add_parser("validate", help="certify general position")
    add_common(v, inp=True)

    c = sub.add_parser("count", help="compute the incidence spectrum")
    c.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    c.add_argument("--csv", dest="csv_out", help="also write spectrum as CSV")
    c.add_argument("--bits", type=int, help="precision cap for sign decisions")
    add_common(c, inp=True)

    lf = sub.add_parser("lift", help="map points onto the unit sphere one dimension up")
    add_common(lf, inp=True)

    inv = sub.add_parser("invert", help="apply inversion in a rational center")
    inv.add_argument("--center", required=True, help="comma-separated rational coordinates")
    add_common(inv, inp=True)

    o = sub.add_parser("oracle", help="residue-class predictions for coset configurations")
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--l", type=int, default=0)
    o.add_argument("--scan", action="store_true", help="report all offsets and the optimum")
    add_common(o)

    f = sub.add_parser("formula", help="closed-form reference counts")
    f.add_argument("--d", type=int, required=True)
    f.add_argument("--n", type=int, required=True)
    add_common(f)

    cp = sub.add_parser("compare", help="engine vs oracle vs closed forms")
    cp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    cp.add_argument("--csv", dest="csv_out", help="also write the table as CSV")
    add_common(cp, inp=True)

    sub.add_parser("selftest", help="run the built-in verification battery")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    config = RunConfig(
        subcommand=args.subcommand,
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
        csv_out=getattr(args, "csv_out", None),
        backend=getattr(args, "backend", None),
        bits=getattr(args, "bits", None),
        threads=getattr(args, "threads", None),
        seed=getattr(args, "seed", None),
        d=getattr(args, "d", None),
        n=getattr(args, "n", None),
        l=getattr(args, "l", None),
        kind=getattr(args, "kind", None),
        center=getattr(args, "center", None),
        scan=getattr(args, "scan", False),
    )
    if config.bits is not None:
        scalars.configure_bits_cap(config.bits)
    handler = HANDLERS[config.subcommand]
    try:
        return handler(config)
    except GeneralPositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERAL_POSITION
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (DomainError, PoleError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypersphereLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
