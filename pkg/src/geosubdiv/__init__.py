"""Manifold-valued curve subdivision by geodesic inductive averaging.

The package refines sequences of points on a manifold with subdivision
rules adapted from linear masks: every weighted sum becomes a fold of
binary geodesic averages. Shipped backends: Euclidean space, the unit
sphere, SO(3) as unit quaternions, and SPD matrices with the
affine-invariant metric. The analysis tools certify the schemes' proven
contraction, displacement and convergence bounds on random data.
"""

from . import errors
from .averaging import (
    displacement_constant,
    inductive_mean,
    karcher_mean,
    symmetric_mean,
)
from .analysis import (
    ConvergenceResult,
    DiagnosticsReport,
    LevelRecord,
    ProbeResult,
    cauchy_gap,
    contractivity_probe,
    convergence_probe,
    delta,
    displacement_probe,
    pg_eval,
    probe_scheme,
    random_periodic_curve,
    refine_with_diagnostics,
)
from .geometry import (
    Euclidean,
    Manifold,
    ManifoldPoint,
    Rotations3d,
    Sphere,
    Spd,
    distance,
    exp_map,
    geodesic_point,
    log_map,
    random_point,
)
from .schemes import (
    CurveSequence,
    GimRule,
    GimScheme,
    Mask,
    adapt,
    bspline_mask,
    builtin,
    fourpoint_mask,
    refine,
    refine_once,
    scheme_names,
    sixpoint_dd_mask,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Euclidean",
    "Sphere",
    "Rotations3d",
    "Spd",
    "Manifold",
    "ManifoldPoint",
    "distance",
    "geodesic_point",
    "log_map",
    "exp_map",
    "random_point",
    "inductive_mean",
    "symmetric_mean",
    "displacement_constant",
    "karcher_mean",
    "Mask",
    "GimRule",
    "GimScheme",
    "CurveSequence",
    "adapt",
    "builtin",
    "scheme_names",
    "fourpoint_mask",
    "sixpoint_dd_mask",
    "bspline_mask",
    "refine",
    "refine_once",
    "delta",
    "pg_eval",
    "cauchy_gap",
    "probe_scheme",
    "contractivity_probe",
    "displacement_probe",
    "convergence_probe",
    "random_periodic_curve",
    "refine_with_diagnostics",
    "ProbeResult",
    "ConvergenceResult",
    "DiagnosticsReport",
    "LevelRecord",
]
