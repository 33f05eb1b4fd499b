"""Command-line front end: refine curves, run probes, export samples.

Curves travel as JSON objects::

    {"manifold": "sphere", "dim_or_size": 3, "boundary": "periodic",
     "points": [[1.0, 0.0, 0.0], ...]}

with the coordinate encodings of the geometry module (euclidean: d values;
sphere: d unit-norm values; rotations3d: 4 unit-quaternion values w,x,y,z;
spd: n*n row-major values of a symmetric positive definite matrix).
Diagnostics and samples are written as CSV so any plotting stack can
consume them. Exit codes: 0 success, 1 probe bound violation, 2 validation
error, 3 geometry error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .analysis import (
    DEFAULT_SAMPLES,
    DiagnosticsReport,
    convergence_probe,
    pg_eval,
    probe_scheme,
    random_periodic_curve,
    refine_with_diagnostics,
)
from .errors import (
    CurveFileError,
    GeometryError,
    ParameterOutOfRangeError,
    RefinementError,
    ValidationError,
)
from .geometry import Euclidean, Manifold, ManifoldPoint, Rotations3d, Sphere, Spd
from .schemes import CurveSequence, GimScheme, builtin, refine, scheme_names

import numpy as np

BOUND_SLACK = 1e-9

_MANIFOLDS = {
    "euclidean": lambda d: Euclidean(d),
    "sphere": lambda d: Sphere(d),
    "rotations3d": lambda d: Rotations3d(),
    "spd": lambda d: Spd(d),
}

_DEFAULT_DIM = {"euclidean": 3, "sphere": 3, "rotations3d": 4, "spd": 2}


def manifold_from_tag(tag: str, dim_or_size: int) -> Manifold:
    if tag not in _MANIFOLDS:
        raise CurveFileError(
            f"unknown manifold tag {tag!r}; known: {sorted(_MANIFOLDS)}"
        )
    if tag == "rotations3d" and dim_or_size != 4:
        raise CurveFileError("rotations3d requires dim_or_size = 4")
    try:
        return _MANIFOLDS[tag](dim_or_size)
    except ValueError as exc:
        raise CurveFileError(str(exc)) from exc


def load_curve_file(path) -> CurveSequence:
    """Read and strictly validate a curve file.

    Every point must satisfy the manifold invariants as stored (unit norm
    to 1e-12, symmetric positive definite, ...); the first offender is
    reported by index.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CurveFileError(f"cannot read curve file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CurveFileError("curve file must hold a JSON object")
    for key in ("manifold", "dim_or_size", "boundary", "points"):
        if key not in data:
            raise CurveFileError(f"curve file is missing {key!r}")
    kind = manifold_from_tag(data["manifold"], int(data["dim_or_size"]))
    if data["boundary"] not in ("periodic", "clamped"):
        raise CurveFileError(
            f"boundary must be 'periodic' or 'clamped', got {data['boundary']!r}"
        )
    raw_points = data["points"]
    if not isinstance(raw_points, list) or len(raw_points) < 2:
        raise CurveFileError("points must be a list of at least 2 points")
    points = []
    for index, coords in enumerate(raw_points):
        try:
            cleaned = kind.validate(coords, strict=True)
        except ValidationError as exc:
            raise CurveFileError(
                f"point {index} is invalid: {exc}", point_index=index
            ) from exc
        points.append(ManifoldPoint._wrap(kind, cleaned))
    return CurveSequence(points, data["boundary"])


def save_curve_file(path, curve: CurveSequence) -> None:
    """Write a curve file; float serialization round-trips exactly."""
    kind = curve.kind
    dim_or_size = {
        "euclidean": getattr(kind, "dim", None),
        "sphere": getattr(kind, "ambient_dim", None),
        "rotations3d": 4,
        "spd": getattr(kind, "size", None),
    }[kind.tag]
    payload = {
        "manifold": kind.tag,
        "dim_or_size": dim_or_size,
        "boundary": curve.boundary,
        "points": [[float(c) for c in p.coords] for p in curve.points],
    }
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def write_diagnostics_csv(path, report: DiagnosticsReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(DiagnosticsReport.FIELDS)
        for row in report.rows():
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def build_scheme(name: str, omega: float | None) -> GimScheme:
    return builtin(name, omega=omega)


def _cmd_refine(args) -> int:
    curve = load_curve_file(args.input)
    scheme = build_scheme(args.scheme, args.omega)
    refined, report = refine_with_diagnostics(
        scheme, curve, args.levels, samples=args.samples
    )
    out = Path(args.out)
    save_curve_file(out, refined)
    diag_path = out.with_suffix(".diagnostics.csv")
    write_diagnostics_csv(diag_path, report)
    print(f"wrote {out} ({len(refined)} points) and {diag_path}")
    return 0


def _format_cell(value, width=13):
    if value is None:
        return " " * (width - 1) + "-"
    if isinstance(value, float):
        return f"{value:>{width}.6g}"
    return f"{value:>{width}}"


def _cmd_probe(args) -> int:
    scheme = build_scheme(args.scheme, args.omega)
    kind = manifold_from_tag(args.manifold, args.dim or _DEFAULT_DIM[args.manifold])
    result = probe_scheme(scheme, kind, trials=args.trials, seed=args.seed)
    header = (
        "scheme", "manifold", "mu", "max_ratio", "C", "max_disp", "worst_trial"
    )
    print("  ".join(f"{h:>13}" for h in header))
    print(
        "  ".join(
            [
                _format_cell(result.scheme),
                _format_cell(result.manifold),
                _format_cell(result.mu),
                _format_cell(result.max_ratio),
                _format_cell(result.displacement_bound),
                _format_cell(result.max_displacement_ratio),
                _format_cell(result.worst_trial),
            ]
        )
    )
    print(
        f"trials={result.trials} skipped={result.skipped} "
        f"geometry_errors={result.geometry_errors} seed={args.seed}"
    )
    violated = False
    if result.mu is not None and result.max_ratio > result.mu + BOUND_SLACK:
        print(
            f"VIOLATION: contraction ratio {result.max_ratio!r} exceeds "
            f"mu={result.mu!r}",
            file=sys.stderr,
        )
        violated = True
    if result.max_displacement_ratio > result.displacement_bound + BOUND_SLACK:
        print(
            f"VIOLATION: displacement ratio {result.max_displacement_ratio!r} "
            f"exceeds C={result.displacement_bound!r}",
            file=sys.stderr,
        )
        violated = True
    if args.levels:
        rng = np.random.default_rng(args.seed)
        curve = random_periodic_curve(kind, rng)
        conv = convergence_probe(scheme, curve, args.levels)
        for k, gap in enumerate(conv.gaps):
            bound = conv.envelope[k] if conv.envelope else None
            print(f"level {k}: cauchy_gap={gap:.6g}" + (
                f" envelope={bound:.6g}" if bound is not None else ""
            ))
            if bound is not None and gap > bound + BOUND_SLACK:
                print(
                    f"VIOLATION: gap {gap!r} at level {k} exceeds envelope "
                    f"{bound!r}",
                    file=sys.stderr,
                )
                violated = True
    return 1 if violated else 0


def _cmd_sample(args) -> int:
    curve = load_curve_file(args.input)
    scheme = build_scheme(args.scheme, args.omega)
    refined = refine(scheme, curve, args.levels)
    level = args.levels
    if curve.boundary == "periodic":
        period = float(len(curve))
        ts = [i * period / (args.samples - 1) for i in range(args.samples)]
    else:
        top = float(len(curve) - 1)
        ts = [i * top / (args.samples - 1) for i in range(args.samples)]
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        size = curve.kind.coord_size
        writer.writerow(["t"] + [f"c{i}" for i in range(size)])
        for t in ts:
            try:
                point = pg_eval(refined, level, t)
            except ParameterOutOfRangeError:
                print(f"warning: skipped out-of-range t={t!r}", file=sys.stderr)
                continue
            writer.writerow([repr(float(t))] + [repr(float(c)) for c in point.coords])
    print(f"wrote {args.out}")
    return 0


def _cmd_schemes(args) -> int:
    print(f"{'name':>12}  {'mu':>10}  {'interpolatory':>13}  description")
    rows = [
        ("fourpoint", "interpolatory 4-point family, tension omega in [0, 1/8)"),
        ("sixpoint_dd", "interpolatory 6-point Dubuc-Deslauriers"),
        ("bspline1", "piecewise geodesic (degree-1 B-spline)"),
        ("bspline2", "corner cutting (degree-2 B-spline, Chaikin)"),
        ("bspline3", "cubic B-spline"),
        ("bspline4", "quartic B-spline"),
    ]
    for name, description in rows:
        scheme = builtin(name) if name != "fourpoint" else builtin(name, omega=1 / 16)
        mu = f"{scheme.mu:.6g}" if scheme.mu is not None else "-"
        extra = " (mu shown for omega=1/16: mu = 4*omega + 1/2)" if name == "fourpoint" else ""
        print(
            f"{name:>12}  {mu:>10}  {str(scheme.interpolatory):>13}  "
            f"{description}{extra}"
        )
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geosubdiv",
        description="Refine manifold-valued curves by geodesic averaging "
        "and certify contraction/convergence bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scheme_flags(p):
        p.add_argument("--scheme", required=True, choices=scheme_names())
        p.add_argument(
            "--omega",
            type=float,
            default=None,
            help="tension parameter for the fourpoint scheme (default 1/16)",
        )

    refine_p = sub.add_parser("refine", help="refine a curve file")
    refine_p.add_argument("input", help="input curve JSON")
    add_scheme_flags(refine_p)
    refine_p.add_argument("--levels", type=int, default=1)
    refine_p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                          help="parameters sampled per gap measurement")
    refine_p.add_argument("--out", required=True, help="output curve JSON")
    refine_p.set_defaults(func=_cmd_refine)

    probe_p = sub.add_parser("probe", help="random-curve bound certification")
    add_scheme_flags(probe_p)
    probe_p.add_argument("--manifold", required=True, choices=sorted(_MANIFOLDS))
    probe_p.add_argument("--dim", type=int, default=None,
                         help="dimension / ambient dimension / matrix size")
    probe_p.add_argument("--trials", type=int, default=200)
    probe_p.add_argument("--seed", type=int, default=0)
    probe_p.add_argument("--levels", type=int, default=0,
                         help="also check cauchy gaps over this many levels")
    probe_p.set_defaults(func=_cmd_probe)

    sample_p = sub.add_parser("sample", help="export interpolant samples as CSV")
    sample_p.add_argument("input", help="input curve JSON")
    add_scheme_flags(sample_p)
    sample_p.add_argument("--levels", type=int, default=3)
    sample_p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sample_p.add_argument("--out", required=True, help="output CSV")
    sample_p.set_defaults(func=_cmd_sample)

    schemes_p = sub.add_parser("schemes", help="list the scheme catalog")
    schemes_p.set_defaults(func=_cmd_schemes)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        index = getattr(exc, "point_index", None)
        where = f" (point index {index})" if index is not None else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        phase = getattr(exc, "phase", None)
        index = getattr(exc, "index", None)
        level = getattr(exc, "level", None)
        context = f" level={level}" if level is not None else ""
        if phase is not None:
            context += f" phase={phase} index={index}"
        print(
            f"geometry error: scheme={getattr(args, 'scheme', '-')}"
            f"{context}: {exc}",
            file=sys.stderr,
        )
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
