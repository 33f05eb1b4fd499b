"""Refinement diagnostics: gap measurement, probes, convergence envelopes.

``delta`` measures the largest consecutive distance of a curve; a scheme
with contraction factor mu shrinks it by at least that factor per step.
``pg_eval`` evaluates the piecewise geodesic interpolant of a level-k
curve, whose knots sit at parameters i * 2^-k. The probes throw seeded
random curves at a scheme and report the worst observed contraction and
displacement ratios next to their theoretical bounds; the convergence
probe tracks the sup distance between consecutive piecewise geodesic
interpolants, which the theory bounds by (1 + C + 2 mu) delta(p) mu^k.

Probes are deterministic for a fixed seed. Trials whose input gap is
(numerically) zero are skipped and trials that hit geometry errors are
excluded, with both counts reported so silent exclusions cannot hide a
failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CurveTooShortError,
    GeometryError,
    ParameterOutOfRangeError,
)
from .geometry import (
    Manifold,
    ManifoldPoint,
    Rotations3d,
    Sphere,
    distance,
    exp_map,
    geodesic_point,
    random_point,
)
from .schemes import CurveSequence, GimScheme, refine_once

DEFAULT_TRIALS = 200
DEFAULT_SAMPLES = 257
ZERO_DELTA = 1e-12


def delta(curve: CurveSequence) -> float:
    """Largest consecutive distance; periodic curves include the wrap pair."""
    pts = curve.points
    if len(pts) < 2:
        raise CurveTooShortError("delta needs at least 2 points")
    gaps = [distance(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    if curve.boundary == "periodic":
        gaps.append(distance(pts[-1], pts[0]))
    return max(gaps)


def pg_eval(curve: CurveSequence, level: int, t: float) -> ManifoldPoint:
    """Piecewise geodesic interpolant of a level-``level`` curve at ``t``.

    The curve's points sit at parameters i * 2^-level; between knots the
    value is the geodesic average of the bracketing points. Periodic
    curves wrap (period len(curve) * 2^-level); clamped curves reject
    parameters outside [0, (len(curve) - 1) * 2^-level].
    """
    n = len(curve)
    scale = 2.0**level
    u = t * scale
    if curve.boundary == "clamped":
        if u < 0.0 or u > n - 1:
            raise ParameterOutOfRangeError(
                f"parameter {t!r} outside [0, {(n - 1) / scale!r}] "
                f"covered by the clamped curve"
            )
        if u == n - 1:
            return curve.points[n - 1]
    i = math.floor(u)
    s = u - i
    if s == 0.0:
        return curve.point(i)
    return geodesic_point(curve.point(i), curve.point(i + 1), s)


# Step-size caps for the random curve generator. Sphere-like backends cap
# at pi/16 so consecutive gaps stay below pi/8 and extrapolated rules stay
# far inside the unique-geodesic guard.
_STEP_CAP = {"euclidean": 1.0, "sphere": math.pi / 16, "rotations3d": math.pi / 16, "spd": 0.5}


def random_periodic_curve(
    kind: Manifold,
    rng: np.random.Generator,
    min_len: int = 8,
    max_len: int = 32,
) -> CurveSequence:
    """Random closed curve with bounded consecutive gaps.

    Points scatter around a random center point within the backend's step
    cap, so every gap (including the wrap-around pair) stays within twice
    the cap and negative-weight rules remain inside the extrapolation
    guard.
    """
    length = int(rng.integers(min_len, max_len + 1))
    center = random_point(kind, rng)
    cap = _STEP_CAP[kind.tag]
    points = []
    for _ in range(length):
        radius = cap * rng.uniform(0.05, 1.0)
        points.append(exp_map(center, radius * kind.random_tangent(center.coords, rng)))
    return CurveSequence(points, "periodic")


@dataclass
class ProbeResult:
    """Worst observed ratios over a batch of random-curve trials."""

    scheme: str
    manifold: str
    trials: int
    max_ratio: float
    max_displacement_ratio: float
    worst_case: CurveSequence | None
    worst_trial: int
    worst_displacement_trial: int
    skipped: int
    geometry_errors: int
    mu: float | None
    displacement_bound: float


def probe_scheme(
    scheme: GimScheme,
    kind: Manifold,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> ProbeResult:
    """Measure contraction and displacement ratios on random curves.

    Each trial draws a random periodic curve, refines it once, and records
    delta(out)/delta(in) together with max_j d(out_{2j}, p_j)/delta(in).
    Trials with delta(in) below 1e-12 are skipped (the ratio would be
    0/0); trials hitting geometry errors are excluded and counted.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    max_ratio = 0.0
    max_disp = 0.0
    worst_case = None
    worst_trial = -1
    worst_disp_trial = -1
    skipped = 0
    errors = 0
    for trial in range(trials):
        curve = random_periodic_curve(kind, rng)
        d_in = delta(curve)
        if d_in < ZERO_DELTA:
            skipped += 1
            continue
        try:
            refined = refine_once(scheme, curve)
        except GeometryError:
            errors += 1
            continue
        ratio = delta(refined) / d_in
        if ratio > max_ratio:
            max_ratio = ratio
            worst_case = curve
            worst_trial = trial
        disp = (
            max(
                distance(refined.points[2 * j], curve.points[j])
                for j in range(len(curve))
            )
            / d_in
        )
        if disp > max_disp:
            max_disp = disp
            worst_disp_trial = trial
    return ProbeResult(
        scheme=scheme.name,
        manifold=kind.tag,
        trials=trials,
        max_ratio=max_ratio,
        max_displacement_ratio=max_disp,
        worst_case=worst_case,
        worst_trial=worst_trial,
        worst_displacement_trial=worst_disp_trial,
        skipped=skipped,
        geometry_errors=errors,
        mu=scheme.mu,
        displacement_bound=scheme.displacement_bound,
    )


def contractivity_probe(scheme, kind, trials=DEFAULT_TRIALS, seed=0) -> ProbeResult:
    """Worst delta(refine_once(p))/delta(p) over seeded random curves."""
    return probe_scheme(scheme, kind, trials=trials, seed=seed)


def displacement_probe(scheme, kind, trials=DEFAULT_TRIALS, seed=0) -> ProbeResult:
    """Worst max_j d(out_{2j}, p_j)/delta(p) over seeded random curves."""
    return probe_scheme(scheme, kind, trials=trials, seed=seed)


def _param_grid(curve: CurveSequence, level: int, samples: int) -> np.ndarray:
    if curve.boundary == "periodic":
        period = len(curve) * 2.0**-level
        return np.arange(samples) * (period / samples)
    top = (len(curve) - 1) * 2.0**-level
    return np.linspace(0.0, top, samples)


def cauchy_gap(
    coarse: CurveSequence, fine: CurveSequence, level: int, samples: int = DEFAULT_SAMPLES
) -> float:
    """Sup distance (sampled) between interpolants of consecutive levels."""
    ts = _param_grid(coarse, level, samples)
    return max(
        distance(pg_eval(coarse, level, t), pg_eval(fine, level + 1, t)) for t in ts
    )


@dataclass
class ConvergenceResult:
    """Cauchy gaps of successive refinement levels with their envelope."""

    gaps: list[float]
    mu: float | None
    displacement_bound: float
    c_tilde: float | None
    envelope: list[float] | None


def convergence_probe(
    scheme: GimScheme,
    curve: CurveSequence,
    max_level: int,
    samples: int = DEFAULT_SAMPLES,
) -> ConvergenceResult:
    """Gaps g_k between levels k and k+1 for k = 0 .. max_level-1.

    When the scheme's mu is known the theoretical envelope
    (1 + C + 2 mu) * delta(curve) * mu^k is returned alongside.
    """
    if max_level < 2:
        raise ValueError("max_level must be >= 2")
    levels = [curve]
    for _ in range(max_level):
        levels.append(refine_once(scheme, levels[-1]))
    gaps = [
        cauchy_gap(levels[k], levels[k + 1], k, samples) for k in range(max_level)
    ]
    c = scheme.displacement_bound
    if scheme.mu is None:
        return ConvergenceResult(gaps, None, c, None, None)
    c_tilde = (1.0 + c + 2.0 * scheme.mu) * delta(curve)
    envelope = [c_tilde * scheme.mu**k for k in range(max_level)]
    return ConvergenceResult(gaps, scheme.mu, c, c_tilde, envelope)


@dataclass
class LevelRecord:
    """Per-level diagnostics; ratios and gaps look forward to level + 1."""

    level: int
    delta: float
    contractivity_ratio: float = math.nan
    max_displacement_ratio: float = math.nan
    cauchy_gap: float = math.nan


@dataclass
class DiagnosticsReport:
    levels: list[LevelRecord]
    mu: float | None
    displacement_bound: float
    c_tilde: float | None

    FIELDS = ("level", "delta", "contractivity_ratio", "max_displacement_ratio", "cauchy_gap")

    def rows(self):
        for rec in self.levels:
            yield (
                rec.level,
                rec.delta,
                rec.contractivity_ratio,
                rec.max_displacement_ratio,
                rec.cauchy_gap,
            )


def refine_with_diagnostics(
    scheme: GimScheme,
    curve: CurveSequence,
    levels: int,
    samples: int = DEFAULT_SAMPLES,
) -> tuple[CurveSequence, DiagnosticsReport]:
    """Refine ``levels`` times, recording per-level diagnostics.

    Row k reports delta at level k plus the step to level k+1: the delta
    ratio, the worst displacement of even outputs from their sources
    relative to delta, and the sampled gap between the two interpolants.
    The last row carries only its delta.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    chain = [curve]
    for k in range(levels):
        try:
            chain.append(refine_once(scheme, chain[-1]))
        except GeometryError as exc:
            exc.level = k + 1  # annotate which level failed for reporting
            raise
    records = []
    for k in range(levels + 1):
        rec = LevelRecord(level=k, delta=delta(chain[k]))
        if k < levels:
            d_in = rec.delta
            nxt = chain[k + 1]
            rec.cauchy_gap = cauchy_gap(chain[k], nxt, k, samples)
            if d_in > ZERO_DELTA:
                rec.contractivity_ratio = delta(nxt) / d_in
                rec.max_displacement_ratio = (
                    max(
                        distance(nxt.points[2 * j], chain[k].points[j])
                        for j in range(len(chain[k]))
                    )
                    / d_in
                )
        records.append(rec)
    c = scheme.displacement_bound
    c_tilde = None
    if scheme.mu is not None:
        c_tilde = (1.0 + c + 2.0 * scheme.mu) * records[0].delta
    report = DiagnosticsReport(
        levels=records, mu=scheme.mu, displacement_bound=c, c_tilde=c_tilde
    )
    return chain[-1], report


def cluster(
    kind: Manifold,
    rng: np.random.Generator,
    count: int,
    radius: float,
) -> list[ManifoldPoint]:
    """Random points within ``radius`` of a common random center."""
    center = random_point(kind, rng)
    return [
        exp_map(center, rng.uniform(0.0, radius) * kind.random_tangent(center.coords, rng))
        for _ in range(count)
    ]
