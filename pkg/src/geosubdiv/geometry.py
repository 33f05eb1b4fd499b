"""Manifold backends: distance, geodesic averages, log/exp maps, sampling.

Four concrete geometries share one interface: flat Euclidean space R^d, the
unit sphere S^{d-1}, the rotation group SO(3) modeled as unit quaternions,
and symmetric positive definite matrices with the affine-invariant metric.

The central operation is the weighted geodesic average ``geodesic_point``:
the point dividing the minimal geodesic from p0 to p1 in ratio t : (1-t).
It satisfies the metric identities

    d(p0, M_t(p0, p1)) = |t| d(p0, p1),
    d(M_t(p0, p1), p1) = |1-t| d(p0, p1),

also for t outside [0, 1] where the geodesic is extrapolated. On the sphere
and SO(3) extrapolation is only allowed while the extended arc stays inside
the unique-geodesic range; outside it the backend raises instead of
silently clamping.

All operations are pure functions of their inputs and safe to call from
multiple threads. Random sampling takes a caller-owned numpy Generator; the
module keeps no hidden state.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import (
    AntipodalPointsError,
    ExtrapolationOutOfRangeError,
    InvalidPointError,
    ManifoldMismatchError,
    TangentTooLongError,
)

# Unit-norm and symmetry defects tolerated on strict validation.
UNIT_TOL = 1e-12
SYM_TOL = 1e-12
# Eigenvalues below this are treated as "not positive definite at working
# precision"; matrix-function kernels clamp here defensively.
MIN_EIG = 1e-14
# Arc angles within this guard of pi count as antipodal / out of range.
ANGLE_GUARD = 1e-8


def _unit_angle(x: np.ndarray, y: np.ndarray) -> float:
    """Angle between unit vectors, accurate near both 0 and pi."""
    return 2.0 * math.atan2(
        float(np.linalg.norm(x - y)), float(np.linalg.norm(x + y))
    )


def _slerp(x: np.ndarray, y: np.ndarray, t: float, theta: float) -> np.ndarray:
    # Valid for any real t; the output is renormalized for hygiene.
    if theta < 1e-12:
        out = (1.0 - t) * x + t * y
    else:
        s = math.sin(theta)
        out = (math.sin((1.0 - t) * theta) * x + math.sin(t * theta) * y) / s
    return out / np.linalg.norm(out)


def _check_arc(theta: float, t: float) -> None:
    """Reject antipodal endpoints and over-extrapolated arcs.

    ``theta`` is the geodesic distance between the endpoints (arc angle on
    the sphere, rotation angle on SO(3)).
    """
    if theta >= math.pi - ANGLE_GUARD:
        raise AntipodalPointsError(
            f"endpoints are antipodal (distance {theta:.6g} ~ pi): "
            "no unique minimal geodesic"
        )
    if not 0.0 <= t <= 1.0:
        reach = max(abs(t), abs(1.0 - t)) * theta
        if reach >= math.pi - ANGLE_GUARD:
            raise ExtrapolationOutOfRangeError(
                f"extrapolated arc of length {reach:.6g} leaves the "
                f"unique-geodesic range (t={t:.6g}, distance={theta:.6g})"
            )


class Manifold(ABC):
    """A geodesically complete manifold backend.

    Concrete subclasses are small frozen dataclasses (so two descriptors of
    the same manifold compare equal) and implement the geometry kernels on
    raw coordinate arrays. Points are flat float64 vectors of length
    ``coord_size``; tangent vectors are flat vectors of the same length
    whose Euclidean norm equals geodesic length.
    """

    tag: str = ""

    @property
    @abstractmethod
    def coord_size(self) -> int:
        """Number of coordinates a point carries."""

    @abstractmethod
    def validate(self, coords, strict: bool = False) -> np.ndarray:
        """Return cleaned, normalized coordinates or raise InvalidPointError.

        With ``strict`` the coordinates must already satisfy the point
        invariants (unit norm to 1e-12, symmetry defect below 1e-12, ...);
        otherwise small defects are repaired by renormalization.
        """

    @abstractmethod
    def distance(self, x: np.ndarray, y: np.ndarray) -> float: ...

    @abstractmethod
    def geodesic(self, x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray: ...

    @abstractmethod
    def log(self, x: np.ndarray, y: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def exp(self, x: np.ndarray, v: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def random(self, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def random_tangent(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Unit-length tangent vector at ``x`` (uniform random direction)."""

    def _as_vector(self, coords, strict: bool) -> np.ndarray:
        arr = np.asarray(coords, dtype=float).reshape(-1)
        if arr.size != self.coord_size:
            raise InvalidPointError(
                f"{self.tag}: expected {self.coord_size} coordinates, "
                f"got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidPointError(f"{self.tag}: coordinates must be finite")
        return arr.copy()

    def _unit(self, coords, strict: bool) -> np.ndarray:
        arr = self._as_vector(coords, strict)
        norm = float(np.linalg.norm(arr))
        if strict and abs(norm - 1.0) > UNIT_TOL:
            raise InvalidPointError(
                f"{self.tag}: norm {norm!r} is not 1 to within {UNIT_TOL}"
            )
        if norm < 1e-6:
            raise InvalidPointError(f"{self.tag}: norm {norm!r} too small")
        return arr / norm


@dataclass(frozen=True)
class Euclidean(Manifold):
    """Flat space R^d with the usual distance; averages are affine."""

    dim: int
    tag = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("euclidean dimension must be >= 1")

    @property
    def coord_size(self) -> int:
        return self.dim

    def validate(self, coords, strict: bool = False) -> np.ndarray:
        return self._as_vector(coords, strict)

    def distance(self, x, y):
        return float(np.linalg.norm(x - y))

    def geodesic(self, x, y, t):
        return (1.0 - t) * x + t * y

    def log(self, x, y):
        return y - x

    def exp(self, x, v):
        return x + v

    def random(self, rng):
        return rng.standard_normal(self.dim)

    def random_tangent(self, x, rng):
        v = rng.standard_normal(self.dim)
        return v / np.linalg.norm(v)


@dataclass(frozen=True)
class Sphere(Manifold):
    """Unit sphere S^{d-1} in R^d; geodesics are great-circle arcs."""

    ambient_dim: int
    tag = "sphere"

    def __post_init__(self):
        if self.ambient_dim < 2:
            raise ValueError("sphere ambient dimension must be >= 2")

    @property
    def coord_size(self) -> int:
        return self.ambient_dim

    def validate(self, coords, strict: bool = False) -> np.ndarray:
        return self._unit(coords, strict)

    def distance(self, x, y):
        return _unit_angle(x, y)

    def geodesic(self, x, y, t):
        theta = _unit_angle(x, y)
        _check_arc(theta, t)
        return _slerp(x, y, t, theta)

    def log(self, x, y):
        theta = _unit_angle(x, y)
        if theta >= math.pi - ANGLE_GUARD:
            raise AntipodalPointsError(
                "log map undefined for antipodal endpoints"
            )
        u = y - math.cos(theta) * x
        norm = float(np.linalg.norm(u))
        if norm < 1e-300:
            return np.zeros_like(x)
        return (theta / norm) * u

    def exp(self, x, v):
        v = v - float(np.dot(v, x)) * x  # keep v tangential
        theta = float(np.linalg.norm(v))
        if theta >= math.pi - ANGLE_GUARD:
            raise TangentTooLongError(
                f"tangent of length {theta:.6g} exceeds the sphere's "
                "injective range"
            )
        if theta < 1e-300:
            return x.copy()
        out = math.cos(theta) * x + math.sin(theta) * (v / theta)
        return out / np.linalg.norm(out)

    def random(self, rng):
        v = rng.standard_normal(self.ambient_dim)
        return v / np.linalg.norm(v)

    def random_tangent(self, x, rng):
        v = rng.standard_normal(self.ambient_dim)
        v -= float(np.dot(v, x)) * x
        return v / np.linalg.norm(v)


@dataclass(frozen=True)
class Rotations3d(Manifold):
    """SO(3) as unit quaternions (w, x, y, z); q and -q are the same rotation.

    Distances are rotation angles: d(p, q) = 2 arccos(|<p, q>|), in [0, pi].
    Tangent vectors are scaled so their Euclidean norm equals this rotation
    distance. All operations sign-align the second argument first, so every
    result is invariant under negating either input quaternion (the output
    sign itself is not canonicalized).
    """

    tag = "rotations3d"

    @property
    def coord_size(self) -> int:
        return 4

    def validate(self, coords, strict: bool = False) -> np.ndarray:
        return self._unit(coords, strict)

    @staticmethod
    def _aligned(x, y):
        return y if float(np.dot(x, y)) >= 0.0 else -y

    def distance(self, x, y):
        # quaternion angle to the sign-aligned representative, in [0, pi/2]
        return 2.0 * _unit_angle(x, self._aligned(x, y))

    def geodesic(self, x, y, t):
        y = self._aligned(x, y)
        theta_q = _unit_angle(x, y)
        _check_arc(2.0 * theta_q, t)
        return _slerp(x, y, t, theta_q)

    def log(self, x, y):
        y = self._aligned(x, y)
        theta_q = _unit_angle(x, y)
        if 2.0 * theta_q >= math.pi - ANGLE_GUARD:
            raise AntipodalPointsError(
                "log map undefined for rotations a half-turn apart"
            )
        u = y - math.cos(theta_q) * x
        norm = float(np.linalg.norm(u))
        if norm < 1e-300:
            return np.zeros_like(x)
        return (2.0 * theta_q / norm) * u

    def exp(self, x, v):
        v = v - float(np.dot(v, x)) * x
        length = float(np.linalg.norm(v))
        if length >= math.pi - ANGLE_GUARD:
            raise TangentTooLongError(
                f"tangent of length {length:.6g} exceeds SO(3)'s injective "
                "range"
            )
        if length < 1e-300:
            return x.copy()
        theta_q = 0.5 * length
        out = math.cos(theta_q) * x + math.sin(theta_q) * (v / length)
        return out / np.linalg.norm(out)

    def random(self, rng):
        v = rng.standard_normal(4)
        return v / np.linalg.norm(v)

    def random_tangent(self, x, rng):
        v = rng.standard_normal(4)
        v -= float(np.dot(v, x)) * x
        return v / np.linalg.norm(v)


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class Spd(Manifold):
    """Symmetric positive definite n x n matrices, affine-invariant metric.

    Points are row-major flattened matrices. Matrix powers, logs and exps go
    through symmetric eigendecompositions. Tangent vectors at A are stored
    in "anchored" form: the flattened symmetric matrix
    V = logm(A^{-1/2} B A^{-1/2}), whose Frobenius norm is exactly the
    geodesic distance d(A, B). This space is globally geodesic, so every
    real weight t is admissible.
    """

    size: int
    tag = "spd"

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("spd matrix size must be >= 1")

    @property
    def coord_size(self) -> int:
        return self.size * self.size

    def _matrix(self, flat: np.ndarray) -> np.ndarray:
        return flat.reshape(self.size, self.size)

    def validate(self, coords, strict: bool = False) -> np.ndarray:
        arr = self._as_vector(coords, strict)
        a = self._matrix(arr)
        defect = float(np.max(np.abs(a - a.T))) if self.size > 1 else 0.0
        if defect > SYM_TOL:
            raise InvalidPointError(
                f"spd: symmetry defect {defect!r} exceeds {SYM_TOL}"
            )
        a = _sym(a)
        min_eig = float(np.linalg.eigvalsh(a)[0])
        if min_eig < MIN_EIG:
            raise InvalidPointError(
                f"spd: smallest eigenvalue {min_eig!r} is not positive at "
                "working precision"
            )
        return a.reshape(-1)

    def _roots(self, a: np.ndarray):
        """Return (A^{1/2}, A^{-1/2}) via eigendecomposition."""
        w, v = np.linalg.eigh(a)
        w = np.maximum(w, MIN_EIG)
        s = np.sqrt(w)
        return (v * s) @ v.T, (v / s) @ v.T

    def _whitened(self, x, y):
        """M = A^{-1/2} B A^{-1/2} together with A^{1/2}."""
        a = self._matrix(x)
        b = self._matrix(y)
        root, inv_root = self._roots(a)
        return _sym(inv_root @ b @ inv_root), root

    def distance(self, x, y):
        if x is y or np.array_equal(x, y):
            return 0.0
        m, _ = self._whitened(x, y)
        w = np.maximum(np.linalg.eigvalsh(m), MIN_EIG)
        return float(np.linalg.norm(np.log(w)))

    def geodesic(self, x, y, t):
        m, root = self._whitened(x, y)
        w, v = np.linalg.eigh(m)
        w = np.maximum(w, MIN_EIG)
        powered = (v * w**t) @ v.T
        return _sym(root @ powered @ root).reshape(-1)

    def log(self, x, y):
        m, _ = self._whitened(x, y)
        w, v = np.linalg.eigh(m)
        w = np.maximum(w, MIN_EIG)
        return _sym((v * np.log(w)) @ v.T).reshape(-1)

    def exp(self, x, v):
        a = self._matrix(x)
        root, _ = self._roots(a)
        vm = _sym(self._matrix(np.asarray(v, dtype=float)))
        w, q = np.linalg.eigh(vm)
        em = (q * np.exp(w)) @ q.T
        return _sym(root @ em @ root).reshape(-1)

    def random(self, rng):
        # Q diag(lam) Q^T with lam log-uniform in [0.1, 10] and Q a random
        # orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
        lam = 10.0 ** rng.uniform(-1.0, 1.0, self.size)
        g = rng.standard_normal((self.size, self.size))
        q, r = np.linalg.qr(g)
        q = q * np.sign(np.diag(r))
        return _sym((q * lam) @ q.T).reshape(-1)

    def random_tangent(self, x, rng):
        g = rng.standard_normal((self.size, self.size))
        w = _sym(g)
        return (w / np.linalg.norm(w)).reshape(-1)


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A point on a concrete manifold.

    Construction validates and normalizes the coordinates (renormalizing
    unit vectors, symmetrizing matrices); the stored array is read-only.
    """

    kind: Manifold
    coords: np.ndarray

    def __post_init__(self):
        cleaned = self.kind.validate(self.coords)
        cleaned.flags.writeable = False
        object.__setattr__(self, "coords", cleaned)

    @classmethod
    def _wrap(cls, kind: Manifold, coords: np.ndarray) -> "ManifoldPoint":
        # Fast path for kernel outputs that are valid by construction.
        point = object.__new__(cls)
        coords.flags.writeable = False
        object.__setattr__(point, "kind", kind)
        object.__setattr__(point, "coords", coords)
        return point

    def __repr__(self):
        return f"ManifoldPoint({self.kind.tag}, {np.array2string(self.coords, precision=6)})"


def _same_kind(p: ManifoldPoint, q: ManifoldPoint) -> Manifold:
    if p.kind != q.kind:
        raise ManifoldMismatchError(
            f"points live on different manifolds: {p.kind} vs {q.kind}"
        )
    return p.kind


def distance(p: ManifoldPoint, q: ManifoldPoint) -> float:
    """Geodesic distance between two points of the same kind."""
    kind = _same_kind(p, q)
    return kind.distance(p.coords, q.coords)


def geodesic_point(p0: ManifoldPoint, p1: ManifoldPoint, t: float) -> ManifoldPoint:
    """Weighted geodesic average M_t(p0, p1).

    t=0 returns p0 and t=1 returns p1 exactly; other weights evaluate the
    backend's closed-form geodesic, including extrapolation for t outside
    [0, 1] where the backend allows it.
    """
    kind = _same_kind(p0, p1)
    if t == 0.0:
        return p0
    if t == 1.0:
        return p1
    return ManifoldPoint._wrap(kind, kind.geodesic(p0.coords, p1.coords, float(t)))


def log_map(base: ManifoldPoint, q: ManifoldPoint) -> np.ndarray:
    """Tangent vector at ``base`` pointing to ``q``, with norm d(base, q)."""
    kind = _same_kind(base, q)
    return kind.log(base.coords, q.coords)


def exp_map(base: ManifoldPoint, v) -> ManifoldPoint:
    """Geodesic shooting: the point at distance ||v|| from ``base`` along v."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != base.kind.coord_size:
        raise InvalidPointError(
            f"tangent size {v.size} does not match {base.kind.tag} "
            f"coordinate size {base.kind.coord_size}"
        )
    return ManifoldPoint._wrap(base.kind, base.kind.exp(base.coords, v))


def random_point(kind: Manifold, rng: np.random.Generator) -> ManifoldPoint:
    """Random valid point, deterministic for a fixed generator state."""
    return ManifoldPoint._wrap(kind, kind.random(rng))
