"""Weighted means of manifold points built from repeated geodesic averages.

``inductive_mean`` folds a weight-sorted tuple one point at a time: the
running mean of the first m points is pulled toward point m+1 with weight
w_{m+1} / (w_1 + ... + w_{m+1}). On Euclidean data this reproduces the
weighted arithmetic mean exactly. ``symmetric_mean`` is the variant for
palindromic weight lists: it folds each half separately (mirror-paired) and
joins the two half-means by a midpoint, preserving the rule's symmetry.

``displacement_constant`` returns the a-priori bound C such that the mean
stays within C times the largest consecutive gap of its input tuple;
``karcher_mean`` is the slower fixed-point oracle minimizing the weighted
sum of squared distances, used to cross-check the cheap means.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import (
    DegenerateNormalizerError,
    ManifoldMismatchError,
    NoConvergenceError,
    NonSymmetricWeightsError,
)
from .geometry import ManifoldPoint, distance, exp_map, geodesic_point, log_map

WEIGHT_SUM_TOL = 1e-12
PALINDROME_TOL = 1e-14
NORMALIZER_TOL = 1e-12


def _check_tuple(points: Sequence[ManifoldPoint], weights: Sequence[float]):
    if len(points) == 0:
        raise ValueError("need at least one point")
    if len(points) != len(weights):
        raise ValueError(
            f"{len(points)} points but {len(weights)} weights"
        )
    kind = points[0].kind
    for p in points[1:]:
        if p.kind != kind:
            raise ManifoldMismatchError("points must share one manifold")
    total = float(np.sum(weights))
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1, got {total!r}")


def _drop_zeros(points, weights):
    kept = [(p, float(w)) for p, w in zip(points, weights) if w != 0.0]
    return [p for p, _ in kept], [w for _, w in kept]


def inductive_mean(
    points: Sequence[ManifoldPoint], weights: Sequence[float]
) -> ManifoldPoint:
    """Geodesic inductive mean of points with non-increasing weights.

    Weights must sum to 1 and be sorted non-increasing. Zero weights are
    dropped up front: they contribute nothing but would waste geodesic
    evaluations. Raises DegenerateNormalizerError when a partial weight sum
    falls below 1e-12 in absolute value, since the fold would then divide
    by (nearly) zero.
    """
    _check_tuple(points, weights)
    if any(weights[i] < weights[i + 1] for i in range(len(weights) - 1)):
        raise ValueError("weights must be sorted non-increasing")
    pts, ws = _drop_zeros(points, weights)
    acc = pts[0]
    partial = ws[0]
    for p, w in zip(pts[1:], ws[1:]):
        partial += w
        if abs(partial) < NORMALIZER_TOL:
            raise DegenerateNormalizerError(
                f"partial weight sum {partial!r} too close to zero"
            )
        acc = geodesic_point(acc, p, w / partial)
    return acc


def _split_middle(points, weights):
    """Palindromic odd-length tuple -> even-length one, middle weight halved."""
    mid = len(weights) // 2
    half = 0.5 * weights[mid]
    new_w = list(weights[:mid]) + [half, half] + list(weights[mid + 1 :])
    new_p = list(points[: mid + 1]) + list(points[mid:])
    return new_p, new_w


def _sorted_halves(points, weights):
    """Front/back halves of a palindromic even-length tuple.

    The front half-weights are doubled so they sum to 1, then stably sorted
    non-increasing; front points follow that order and back points mirror
    it (point n-1-i pairs with point i).
    """
    n = len(weights)
    h = n // 2
    front_w = 2.0 * np.asarray(weights[:h], dtype=float)
    order = np.argsort(-front_w, kind="stable")
    w1 = [float(front_w[i]) for i in order]
    p1 = [points[i] for i in order]
    p2 = [points[n - 1 - i] for i in order]
    return p1, p2, w1


def symmetric_mean(
    points: Sequence[ManifoldPoint], weights: Sequence[float]
) -> ManifoldPoint:
    """Symmetry-preserving mean for palindromic weight lists.

    Points and weights are taken in rule order (not weight-sorted). Odd
    lengths split the middle weight in two and duplicate the middle point,
    reducing to the even case.
    """
    _check_tuple(points, weights)
    n = len(weights)
    for j in range(n // 2):
        if abs(weights[j] - weights[n - 1 - j]) > PALINDROME_TOL:
            raise NonSymmetricWeightsError(
                f"weights are not palindromic: w[{j}]={weights[j]!r} vs "
                f"w[{n - 1 - j}]={weights[n - 1 - j]!r}"
            )
    if n == 1:
        return points[0]
    if n % 2 == 1:
        points, weights = _split_middle(points, weights)
    p1, p2, w1 = _sorted_halves(points, weights)
    return geodesic_point(inductive_mean(p1, w1), inductive_mean(p2, w1), 0.5)


def _chain_constant(weights) -> float:
    # C_2 = max|w|; C_{m+1} = (1 + C_m)(1 + max(1/(m+1), max|w|)).
    n = len(weights)
    if n <= 1:
        return 0.0
    w_inf = max(abs(float(w)) for w in weights)
    c = w_inf
    for m in range(2, n):
        c = (1.0 + c) * (1.0 + max(1.0 / (m + 1), w_inf))
    return c


def displacement_constant(weights: Sequence[float], symmetric: bool = False) -> float:
    """Bound C with d(mean, p_i) <= C * max consecutive gap of the tuple.

    For plain inductive means ``weights`` is the sorted weight list and the
    bound follows the recursion above. With ``symmetric=True`` the weights
    are the palindromic rule weights in rule order and the bound is
    2*C_half + 1/2, where C_half is the recursion applied to the doubled,
    sorted front half (middle weight split first when the length is odd).
    """
    weights = [float(w) for w in weights]
    if symmetric:
        n = len(weights)
        for j in range(n // 2):
            if abs(weights[j] - weights[n - 1 - j]) > PALINDROME_TOL:
                raise NonSymmetricWeightsError("weights are not palindromic")
        if n % 2 == 1:
            mid = n // 2
            half = 0.5 * weights[mid]
            weights = weights[:mid] + [half, half] + weights[mid + 1 :]
        front = sorted((2.0 * w for w in weights[: len(weights) // 2]), reverse=True)
        front = [w for w in front if w != 0.0]
        return 2.0 * _chain_constant(front) + 0.5
    if any(weights[i] < weights[i + 1] for i in range(len(weights) - 1)):
        raise ValueError("weights must be sorted non-increasing")
    return _chain_constant([w for w in weights if w != 0.0])


def karcher_mean(
    points: Sequence[ManifoldPoint],
    weights: Sequence[float],
    max_iter: int = 200,
    tol: float = 1e-10,
) -> ManifoldPoint:
    """Riemannian center of mass by fixed-point iteration.

    Minimizes sum_j w_j d(x, p_j)^2 for positive weights summing to 1, by
    repeatedly shooting along the weighted tangent average. Seeded at the
    inductive mean of the weight-sorted tuple, which is already a good
    approximation. Returns once the tangent update norm drops below
    ``tol``; for sphere-like backends the points should lie within a ball
    of radius pi/4 of each other so the minimizer is unique (the caller's
    responsibility, not checked).
    """
    _check_tuple(points, weights)
    if any(w <= 0.0 for w in weights):
        raise ValueError("karcher_mean requires strictly positive weights")
    order = np.argsort(-np.asarray(weights, dtype=float), kind="stable")
    x = inductive_mean([points[i] for i in order], [float(weights[i]) for i in order])
    for _ in range(max_iter):
        step = np.zeros(x.kind.coord_size)
        for p, w in zip(points, weights):
            step += w * log_map(x, p)
        if float(np.linalg.norm(step)) < tol:
            return x
        x = exp_map(x, step)
    raise NoConvergenceError(
        f"karcher_mean did not converge in {max_iter} iterations", max_iter
    )


def mean_spread(points: Sequence[ManifoldPoint]) -> float:
    """Largest consecutive distance within a tuple (its displacement scale)."""
    return max(
        (distance(points[i], points[i + 1]) for i in range(len(points) - 1)),
        default=0.0,
    )
