"""Linear subdivision masks, their geodesic adaptation, and curve refinement.

A linear scheme with mask ``a`` refines a sequence f by

    out_{2j}   = sum_o a_{-2o}  f_{j+o}      (even phase)
    out_{2j+1} = sum_o a_{1-2o} f_{j+o}      (odd phase),

each phase's coefficients summing to 1. ``adapt`` turns such a mask into
manifold refinement rules by replacing the weighted sums with geodesic
means: palindromic phases keep their rule order and use the symmetric
mean, other phases are stably sorted by descending weight and use the
inductive mean. On Euclidean data the adapted rules reproduce the linear
scheme exactly.

Note the phase convention above ties each point offset o to mask index
-2o (even) or 1-2o (odd). Shifting a mask's offset by 2 shifts the output
indexing by one; shifting by 1 swaps the two phases. The built-in catalog
pins each mask's offset so the adapted rules come out in their standard
written form (e.g. the quartic B-spline's even rule reads points
(p_j, p_{j+1}, p_{j-1}) with weights (10, 5, 1)/16).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .averaging import (
    PALINDROME_TOL,
    displacement_constant,
    inductive_mean,
    symmetric_mean,
)
from .errors import (
    CurveTooShortError,
    GeometryError,
    MaskRowSumError,
    OmegaOutOfRangeError,
    RefinementError,
    UnknownSchemeError,
)
from .geometry import Manifold, ManifoldPoint

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Mask:
    """Finitely supported coefficient sequence of a linear scheme.

    ``offset`` is the mask index of the first coefficient, so coefficient i
    sits at mask index offset + i. Construction checks the convergence
    requirement that the even-index and odd-index coefficients each sum
    to 1.
    """

    coefficients: tuple[float, ...]
    offset: int

    def __init__(self, coefficients: Sequence[float], offset: int):
        object.__setattr__(
            self, "coefficients", tuple(float(c) for c in coefficients)
        )
        object.__setattr__(self, "offset", int(offset))
        if not self.coefficients:
            raise ValueError("mask needs at least one coefficient")
        for parity in (0, 1):
            total = sum(
                c
                for i, c in enumerate(self.coefficients)
                if (self.offset + i) % 2 == parity
            )
            if abs(total - 1.0) > ROW_SUM_TOL:
                name = "even" if parity == 0 else "odd"
                raise MaskRowSumError(
                    f"{name}-index coefficients sum to {total!r}, expected 1"
                )

    def coefficient(self, index: int) -> float:
        """Coefficient at mask index ``index`` (0 outside the support)."""
        i = index - self.offset
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return 0.0

    @property
    def support(self) -> tuple[int, int]:
        return self.offset, self.offset + len(self.coefficients) - 1


@dataclass(frozen=True)
class GimRule:
    """One refinement phase: point offsets with matching mean weights.

    ``point_offsets[i]`` is the data index relative to the rule position j
    of the i-th point fed to the mean. Symmetric rules keep the original
    (palindromic) order and evaluate through the symmetric mean; others
    carry weights sorted non-increasing and evaluate through the inductive
    mean.
    """

    point_offsets: tuple[int, ...]
    weights: tuple[float, ...]
    symmetric: bool

    @property
    def is_identity(self) -> bool:
        return self.point_offsets == (0,) and self.weights == (1.0,)

    @property
    def stencil(self) -> tuple[int, int]:
        return min(self.point_offsets), max(self.point_offsets)

    def __call__(self, fetch, j: int) -> ManifoldPoint:
        """Evaluate at rule position j; ``fetch`` resolves data indices."""
        if self.is_identity:
            return fetch(j)
        points = [fetch(j + o) for o in self.point_offsets]
        if len(points) == 1:
            return points[0]
        if self.symmetric:
            return symmetric_mean(points, self.weights)
        return inductive_mean(points, self.weights)


@dataclass(frozen=True)
class GimScheme:
    """A pair of adapted refinement rules plus catalog metadata.

    ``mu`` is the scheme's proven contraction factor per refinement step
    when one is known, else None.
    """

    name: str
    even_rule: GimRule
    odd_rule: GimRule
    mu: float | None = None
    interpolatory: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "interpolatory", self.even_rule.is_identity)

    @property
    def displacement_bound(self) -> float:
        """Bound C with d(out_{2j}, p_j) <= C * delta(p); 0 if interpolatory."""
        if self.interpolatory:
            return 0.0
        rule = self.even_rule
        return displacement_constant(rule.weights, symmetric=rule.symmetric)

    @property
    def stencil_width(self) -> int:
        lo = min(self.even_rule.stencil[0], self.odd_rule.stencil[0])
        hi = max(self.even_rule.stencil[1], self.odd_rule.stencil[1])
        return hi - lo + 1


def _phase_rule(mask: Mask, parity: int) -> GimRule:
    lo, hi = mask.support
    # Even phase pairs point offset o with mask index -2o, odd with 1-2o.
    o_min = math.ceil((parity - hi) / 2)
    o_max = math.floor((parity - lo) / 2)
    pairs = []
    for o in range(o_min, o_max + 1):
        w = mask.coefficient(parity - 2 * o)
        if w != 0.0:
            pairs.append((o, w))
    offsets = tuple(o for o, _ in pairs)
    weights = tuple(w for _, w in pairs)
    n = len(weights)
    palindromic = n > 1 and all(
        abs(weights[i] - weights[n - 1 - i]) <= PALINDROME_TOL for i in range(n // 2)
    )
    if palindromic:
        return GimRule(offsets, weights, symmetric=True)
    order = np.argsort(-np.asarray(weights), kind="stable")
    return GimRule(
        tuple(offsets[i] for i in order),
        tuple(weights[i] for i in order),
        symmetric=False,
    )


def adapt(mask: Mask, name: str = "custom", mu: float | None = None) -> GimScheme:
    """Adapt a linear mask to manifold data via geodesic means.

    Splits the mask into its two phase rules, drops zero weights, detects
    palindromic phases (kept in rule order, evaluated symmetrically) and
    stably sorts the rest by descending weight with point offsets permuted
    in lockstep.
    """
    return GimScheme(
        name=name,
        even_rule=_phase_rule(mask, 0),
        odd_rule=_phase_rule(mask, 1),
        mu=mu,
    )


def _interpolatory_mask(odd_weights: Sequence[float], first_offset: int) -> Mask:
    """Mask of an interpolatory scheme from its odd-phase weights.

    The odd weight for point offset o sits at mask index 1 - 2o; the even
    phase is the identity (a single 1 at index 0).
    """
    values = {1 - 2 * (first_offset + i): float(w) for i, w in enumerate(odd_weights)}
    values[0] = 1.0
    lo, hi = min(values), max(values)
    return Mask([values.get(i, 0.0) for i in range(lo, hi + 1)], lo)


def fourpoint_mask(omega: float) -> Mask:
    """Interpolatory 4-point mask with tension parameter omega."""
    return _interpolatory_mask(
        (-omega, 0.5 + omega, 0.5 + omega, -omega), first_offset=-1
    )


def sixpoint_dd_mask() -> Mask:
    """Interpolatory 6-point mask with weights (3,-25,150,150,-25,3)/256."""
    w = [c / 256.0 for c in (3.0, -25.0, 150.0, 150.0, -25.0, 3.0)]
    return _interpolatory_mask(w, first_offset=-2)


def bspline_mask(degree: int) -> Mask:
    """Degree-m B-spline mask: binomials (m+1 choose k) / 2^m.

    The offset centers the support so the adapted rules come out in their
    standard form (even rule anchored at p_j).
    """
    coeffs = [math.comb(degree + 1, k) / 2.0**degree for k in range(degree + 2)]
    return Mask(coeffs, -((degree + 2) // 2))


_BSPLINE_MU = {1: 0.5, 2: 0.5, 3: 0.5, 4: 5.0 / 6.0}


def builtin(name: str, omega: float | None = None) -> GimScheme:
    """Build a catalog scheme by name.

    Names: ``fourpoint`` (tension ``omega`` in [0, 1/8), default 1/16),
    ``sixpoint_dd``, and ``bspline1`` .. ``bspline4``. Each carries its
    proven contraction factor mu.
    """
    if name == "fourpoint":
        w = 1.0 / 16.0 if omega is None else float(omega)
        if not 0.0 <= w < 0.125:
            raise OmegaOutOfRangeError(
                f"fourpoint requires 0 <= omega < 1/8, got {w!r}"
            )
        return adapt(fourpoint_mask(w), name=f"fourpoint(omega={w:g})", mu=4.0 * w + 0.5)
    if omega is not None:
        raise UnknownSchemeError(f"scheme {name!r} takes no omega parameter")
    if name == "sixpoint_dd":
        return adapt(sixpoint_dd_mask(), name="sixpoint_dd", mu=0.9844)
    if name.startswith("bspline") and name[len("bspline") :] in {"1", "2", "3", "4"}:
        degree = int(name[len("bspline") :])
        return adapt(bspline_mask(degree), name=name, mu=_BSPLINE_MU[degree])
    raise UnknownSchemeError(
        f"unknown scheme {name!r}; known: {', '.join(scheme_names())}"
    )


def scheme_names() -> tuple[str, ...]:
    return ("fourpoint", "sixpoint_dd", "bspline1", "bspline2", "bspline3", "bspline4")


Boundary = Literal["periodic", "clamped"]


@dataclass(frozen=True)
class CurveSequence:
    """A finite manifold-point sequence with a boundary policy.

    Periodic curves wrap indices modulo the length; clamped curves
    replicate their endpoints for out-of-range stencil accesses.
    """

    points: tuple[ManifoldPoint, ...]
    boundary: Boundary = "periodic"

    def __init__(self, points: Sequence[ManifoldPoint], boundary: Boundary = "periodic"):
        points = tuple(points)
        if len(points) < 2:
            raise CurveTooShortError("a curve needs at least 2 points")
        kind = points[0].kind
        for p in points[1:]:
            if p.kind != kind:
                raise ValueError("curve points must share one manifold")
        if boundary not in ("periodic", "clamped"):
            raise ValueError(f"unknown boundary policy {boundary!r}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "boundary", boundary)

    @property
    def kind(self) -> Manifold:
        return self.points[0].kind

    def __len__(self) -> int:
        return len(self.points)

    def point(self, i: int) -> ManifoldPoint:
        """Point at index i under the boundary policy."""
        n = len(self.points)
        if self.boundary == "periodic":
            return self.points[i % n]
        return self.points[min(max(i, 0), n - 1)]

    def coords_array(self) -> np.ndarray:
        return np.stack([p.coords for p in self.points])


def refine_once(scheme: GimScheme, curve: CurveSequence) -> CurveSequence:
    """One refinement step.

    Periodic output holds 2L points (even rule at j -> entry 2j, odd rule
    at j -> entry 2j+1). Clamped output holds 2L-1 points: the even rule
    runs at every j, the odd rule between consecutive input points only,
    and stencil overruns replicate the endpoints.
    """
    n = len(curve)
    if curve.boundary == "clamped" and n < scheme.stencil_width:
        raise CurveTooShortError(
            f"clamped curve of length {n} is shorter than the scheme "
            f"stencil ({scheme.stencil_width})"
        )
    out: list[ManifoldPoint] = []
    last_odd = n if curve.boundary == "periodic" else n - 1
    for j in range(n):
        out.append(_eval_rule(scheme.even_rule, "even", curve, j))
        if j < last_odd:
            out.append(_eval_rule(scheme.odd_rule, "odd", curve, j))
    return CurveSequence(out, curve.boundary)


def _eval_rule(rule: GimRule, phase: str, curve: CurveSequence, j: int) -> ManifoldPoint:
    try:
        return rule(curve.point, j)
    except GeometryError as exc:
        raise RefinementError(
            f"{phase} rule failed at index {j}: {exc}", phase=phase, index=j
        ) from exc


def refine(scheme: GimScheme, curve: CurveSequence, levels: int) -> CurveSequence:
    """Apply ``refine_once`` ``levels`` times (0 returns the input)."""
    if levels < 0:
        raise ValueError("levels must be >= 0")
    for _ in range(levels):
        curve = refine_once(scheme, curve)
    return curve
