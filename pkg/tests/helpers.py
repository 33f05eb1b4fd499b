"""Shared test helpers: backend lists, point comparison, random data."""

import numpy as np

from geosubdiv import (
    CurveSequence,
    Euclidean,
    ManifoldPoint,
    Rotations3d,
    Spd,
    Sphere,
    distance,
    exp_map,
    random_point,
)

BACKENDS = [Euclidean(3), Sphere(3), Rotations3d(), Spd(2)]


def assert_points_close(p, q, tol=1e-9):
    d = distance(p, q)
    assert d <= tol, f"points differ by {d!r} (> {tol!r})"


def random_pair(kind, rng, max_dist):
    """Random (p0, p1) with d(p0, p1) <= max_dist."""
    p0 = random_point(kind, rng)
    r = rng.uniform(0.0, max_dist)
    p1 = exp_map(p0, r * kind.random_tangent(p0.coords, rng))
    return p0, p1


def cluster_points(kind, rng, count, radius):
    """Points within ``radius`` of a shared random center."""
    center = random_point(kind, rng)
    return [
        exp_map(center, rng.uniform(0.0, radius) * kind.random_tangent(center.coords, rng))
        for _ in range(count)
    ]


def scalar_curve(values, boundary="periodic"):
    kind = Euclidean(1)
    return CurveSequence([ManifoldPoint(kind, [v]) for v in values], boundary)


def euclid_curve(rows, boundary="periodic"):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    kind = Euclidean(rows.shape[1])
    return CurveSequence([ManifoldPoint(kind, r) for r in rows], boundary)


def sphere_square():
    kind = Sphere(3)
    coords = [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    return CurveSequence([ManifoldPoint(kind, c) for c in coords], "periodic")
