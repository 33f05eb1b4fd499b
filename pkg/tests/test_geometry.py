"""Backend geometry: distances, geodesic averages, log/exp, sampling."""

import math

import numpy as np
import pytest

from geosubdiv import (
    Euclidean,
    ManifoldPoint,
    Rotations3d,
    Spd,
    Sphere,
    distance,
    exp_map,
    geodesic_point,
    log_map,
    random_point,
)
from geosubdiv.errors import (
    AntipodalPointsError,
    ExtrapolationOutOfRangeError,
    InvalidPointError,
    ManifoldMismatchError,
    TangentTooLongError,
)
from helpers import assert_points_close, random_pair
from oracles import spd_distance_eig

T_SET = [-0.25, 0.0, 0.1, 0.5, 0.9, 1.0, 1.25]

# largest pair separation per backend that keeps every t in T_SET admissible
SAFE_DIST = {"euclidean": 3.0, "sphere": 2.4, "rotations3d": 2.4, "spd": 3.0}


def _point(kind, coords):
    return ManifoldPoint(kind, coords)


class TestDistanceExamples:
    def test_euclidean_pythagoras(self):
        kind = Euclidean(2)
        assert distance(_point(kind, [0, 0]), _point(kind, [3, 4])) == pytest.approx(5.0, abs=1e-15)

    def test_sphere_orthogonal_quarter_turn(self):
        kind = Sphere(3)
        d = distance(_point(kind, [1, 0, 0]), _point(kind, [0, 1, 0]))
        assert d == pytest.approx(math.pi / 2, abs=1e-15)

    def test_spd_identity_to_scaled_identity(self):
        # scalar-log oracle: each of the 2 eigenvalues of I^{-1} 4I is 4,
        # so the distance is sqrt(2 * ln(4)^2) = sqrt(2) * ln(4)
        expected = math.sqrt(2.0) * math.log(4.0)
        kind = Spd(2)
        a = _point(kind, np.eye(2).ravel())
        b = _point(kind, (4.0 * np.eye(2)).ravel())
        assert distance(a, b) == pytest.approx(expected, abs=1e-12)

    def test_spd_distance_matches_independent_eigensolver(self, rng):
        kind = Spd(3)
        for _ in range(25):
            a = random_point(kind, rng)
            b = random_point(kind, rng)
            expected = spd_distance_eig(
                a.coords.reshape(3, 3), b.coords.reshape(3, 3)
            )
            assert distance(a, b) == pytest.approx(expected, abs=1e-9)

    def test_symmetry_and_zero(self, kind, rng):
        p, q = random_pair(kind, rng, SAFE_DIST[kind.tag])
        assert distance(p, q) == pytest.approx(distance(q, p), abs=1e-12)
        assert distance(p, p) == 0.0


class TestGeodesicPoint:
    def test_endpoints_are_exact(self, kind, rng):
        p, q = random_pair(kind, rng, SAFE_DIST[kind.tag])
        assert geodesic_point(p, q, 0.0) is p
        assert geodesic_point(p, q, 1.0) is q

    def test_sphere_arc_midpoint(self):
        kind = Sphere(3)
        mid = geodesic_point(_point(kind, [1, 0, 0]), _point(kind, [0, 1, 0]), 0.5)
        r = 1.0 / math.sqrt(2.0)
        np.testing.assert_allclose(mid.coords, [r, r, 0.0], atol=1e-15)

    def test_spd_midpoint_scalar_oracle(self):
        # per-eigenvalue oracle: 4^(1/2) = 2, so the midpoint of I and 4I is 2I
        kind = Spd(2)
        a = _point(kind, np.eye(2).ravel())
        b = _point(kind, (4.0 * np.eye(2)).ravel())
        mid = geodesic_point(a, b, 0.5)
        np.testing.assert_allclose(mid.coords, (2.0 * np.eye(2)).ravel(), atol=1e-12)

    def test_euclidean_extrapolation_matches_affine(self):
        kind = Euclidean(1)
        out = geodesic_point(_point(kind, [0.0]), _point(kind, [1.0]), -0.125)
        assert out.coords[0] == pytest.approx(-0.125, abs=1e-15)

    @pytest.mark.parametrize("t", T_SET)
    def test_metric_property(self, kind, rng, t):
        for _ in range(50):
            p0, p1 = random_pair(kind, rng, SAFE_DIST[kind.tag])
            d = distance(p0, p1)
            m = geodesic_point(p0, p1, t)
            tol = 1e-9 * (1.0 + d)
            assert abs(distance(p0, m) - abs(t) * d) <= tol
            assert abs(distance(m, p1) - abs(1.0 - t) * d) <= tol

    def test_reversal_identity(self, kind, rng):
        for t in (-0.2, 0.3, 0.5, 0.75, 1.2):
            p0, p1 = random_pair(kind, rng, SAFE_DIST[kind.tag] / 1.5)
            assert_points_close(
                geodesic_point(p0, p1, t), geodesic_point(p1, p0, 1.0 - t), tol=1e-10
            )

    def test_geodesic_consistency(self, kind, rng):
        for s, t in [(0.5, 0.5), (0.25, 0.8), (0.9, 0.2), (1.0, 0.7)]:
            p0, p1 = random_pair(kind, rng, SAFE_DIST[kind.tag])
            inner = geodesic_point(p0, p1, t)
            assert_points_close(
                geodesic_point(p0, inner, s), geodesic_point(p0, p1, s * t), tol=1e-9
            )

    def test_triangle_inequality(self, kind, rng):
        for _ in range(50):
            a = random_point(kind, rng)
            b = random_point(kind, rng)
            c = random_point(kind, rng)
            assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-10

    def test_output_validity(self, kind, rng):
        for t in T_SET:
            p0, p1 = random_pair(kind, rng, SAFE_DIST[kind.tag])
            out = geodesic_point(p0, p1, t)
            # revalidating in strict mode asserts the point invariants hold
            kind.validate(out.coords, strict=True)

    def test_rotation_sign_invariance(self, rng):
        kind = Rotations3d()
        for _ in range(20):
            p, q = random_pair(kind, rng, 2.4)
            q_neg = ManifoldPoint(kind, -q.coords)
            p_neg = ManifoldPoint(kind, -p.coords)
            assert distance(p, q_neg) == pytest.approx(distance(p, q), abs=1e-10)
            assert distance(p_neg, q) == pytest.approx(distance(p, q), abs=1e-10)
            m = geodesic_point(p, q, 0.3)
            for a, b in [(p, q_neg), (p_neg, q), (p_neg, q_neg)]:
                # equality modulo output sign == zero rotation distance
                assert_points_close(geodesic_point(a, b, 0.3), m, tol=1e-10)


class TestLogExp:
    def test_log_of_self_is_zero(self, kind, rng):
        p = random_point(kind, rng)
        np.testing.assert_allclose(log_map(p, p), 0.0, atol=1e-12)

    def test_euclidean_log_is_difference(self, rng):
        kind = Euclidean(3)
        a, b = random_point(kind, rng), random_point(kind, rng)
        np.testing.assert_allclose(log_map(a, b), b.coords - a.coords, atol=1e-15)

    def test_sphere_log_example(self):
        # theta*(q - cos(theta) base)/sin(theta) with theta = pi/2
        kind = Sphere(3)
        v = log_map(_point(kind, [1, 0, 0]), _point(kind, [0, 1, 0]))
        np.testing.assert_allclose(v, [0.0, math.pi / 2, 0.0], atol=1e-15)

    def test_log_norm_is_distance(self, kind, rng):
        for _ in range(20):
            p, q = random_pair(kind, rng, SAFE_DIST[kind.tag])
            assert np.linalg.norm(log_map(p, q)) == pytest.approx(
                distance(p, q), abs=1e-9
            )

    def test_exp_log_roundtrip(self, kind, rng):
        for _ in range(20):
            p, q = random_pair(kind, rng, SAFE_DIST[kind.tag])
            assert_points_close(exp_map(p, log_map(p, q)), q, tol=1e-9)

    def test_exp_moves_by_tangent_norm(self, kind, rng):
        for r in (0.0, 1e-3, 0.5, 2.0):
            p = random_point(kind, rng)
            v = r * kind.random_tangent(p.coords, rng)
            assert distance(p, exp_map(p, v)) == pytest.approx(r, abs=1e-9)


class TestRandomPoints:
    def test_deterministic_for_fixed_seed(self, kind):
        a = random_point(kind, np.random.default_rng(123))
        b = random_point(kind, np.random.default_rng(123))
        np.testing.assert_array_equal(a.coords, b.coords)

    def test_sphere_like_unit_norm(self, rng):
        for kind in (Sphere(3), Sphere(5), Rotations3d()):
            p = random_point(kind, rng)
            assert abs(np.linalg.norm(p.coords) - 1.0) <= 1e-12

    def test_spd_spectrum(self, rng):
        kind = Spd(3)
        for _ in range(10):
            eigs = np.linalg.eigvalsh(random_point(kind, rng).coords.reshape(3, 3))
            assert eigs[0] > 0.0
            assert eigs[0] >= 0.1 - 1e-9 and eigs[-1] <= 10.0 + 1e-9

    def test_outputs_validate(self, kind, rng):
        for _ in range(5):
            kind.validate(random_point(kind, rng).coords, strict=True)


class TestErrors:
    def test_kind_mismatch(self, rng):
        p = random_point(Euclidean(3), rng)
        q = random_point(Sphere(3), rng)
        with pytest.raises(ManifoldMismatchError):
            distance(p, q)
        with pytest.raises(ManifoldMismatchError):
            geodesic_point(p, ManifoldPoint(Euclidean(2), [0, 0]), 0.5)

    def test_sphere_antipodal(self):
        kind = Sphere(3)
        p = _point(kind, [1, 0, 0])
        q = _point(kind, [-1, 0, 0])
        with pytest.raises(AntipodalPointsError):
            geodesic_point(p, q, 0.5)
        with pytest.raises(AntipodalPointsError):
            log_map(p, q)

    def test_rotations_half_turn(self):
        # quaternions of rotations a half turn apart are orthogonal
        kind = Rotations3d()
        p = _point(kind, [1, 0, 0, 0])
        q = _point(kind, [0, 0, 0, 1])
        assert distance(p, q) == pytest.approx(math.pi, abs=1e-12)
        with pytest.raises(AntipodalPointsError):
            geodesic_point(p, q, 0.5)

    def test_extrapolation_out_of_range(self, rng):
        kind = Sphere(3)
        p = random_point(kind, rng)
        q = exp_map(p, 2.8 * kind.random_tangent(p.coords, rng))
        with pytest.raises(ExtrapolationOutOfRangeError):
            geodesic_point(p, q, 1.25)
        geodesic_point(p, q, 0.9)  # interior weights stay fine

    def test_tangent_too_long(self, rng):
        for kind in (Sphere(3), Rotations3d()):
            p = random_point(kind, rng)
            v = 3.2 * kind.random_tangent(p.coords, rng)
            with pytest.raises(TangentTooLongError):
                exp_map(p, v)

    def test_invalid_points(self):
        with pytest.raises(InvalidPointError):
            ManifoldPoint(Euclidean(3), [1.0, 2.0])  # wrong size
        with pytest.raises(InvalidPointError):
            ManifoldPoint(Euclidean(2), [np.nan, 0.0])
        with pytest.raises(InvalidPointError):
            ManifoldPoint(Spd(2), [1.0, 0.5, -0.5, 1.0])  # asymmetric
        with pytest.raises(InvalidPointError):
            ManifoldPoint(Spd(2), [1.0, 2.0, 2.0, 1.0])  # indefinite
        with pytest.raises(InvalidPointError):
            Sphere(3).validate([1.0 + 1e-6, 0.0, 0.0], strict=True)

    def test_constructor_renormalizes(self):
        p = ManifoldPoint(Sphere(3), [2.0, 0.0, 0.0])
        np.testing.assert_allclose(p.coords, [1.0, 0.0, 0.0], atol=0)
        q = ManifoldPoint(Rotations3d(), [0.0, 3.0, 0.0, 0.0])
        assert abs(np.linalg.norm(q.coords) - 1.0) <= 1e-12

    def test_points_are_immutable(self, kind, rng):
        p = random_point(kind, rng)
        with pytest.raises(ValueError):
            p.coords[0] = 0.0
