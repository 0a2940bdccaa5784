"""Points, geodesics and isometries of the sphere, plane and hyperbolic plane.

Every point is a 3-vector: (x, y, 1) in the plane, a unit vector on the
sphere, and a point on the upper sheet of z^2 - x^2 - y^2 = 1 for the
hyperbolic plane.  Isometries are 3x3 matrices acting on these vectors.
"""
from __future__ import annotations

import math

import numpy as np

SPHERICAL = "spherical"
EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"

CURVATURE = {SPHERICAL: 1, EUCLIDEAN: 0, HYPERBOLIC: -1}
MINKOWSKI = np.diag([1.0, 1.0, -1.0])


class GeometryError(ValueError):
    pass


def origin(geometry: str) -> np.ndarray:
    return np.array([0.0, 0.0, 1.0])


def inner(geometry: str, a: np.ndarray, b: np.ndarray) -> float:
    if geometry == HYPERBOLIC:
        return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])
    if geometry == SPHERICAL:
        return float(a @ b)
    return float(a[0] * b[0] + a[1] * b[1])


def distance(geometry: str, p: np.ndarray, q: np.ndarray) -> float:
    if geometry == EUCLIDEAN:
        return float(math.hypot(p[0] - q[0], p[1] - q[1]))
    # chord-length forms stay accurate for nearby points
    diff = p - q
    if geometry == SPHERICAL:
        return 2 * math.asin(min(1.0, float(np.linalg.norm(diff)) / 2))
    chord = max(0.0, inner(HYPERBOLIC, diff, diff))
    return 2 * math.asinh(math.sqrt(chord) / 2)


def normalize_point(geometry: str, p: np.ndarray) -> np.ndarray:
    if geometry == EUCLIDEAN:
        return p / p[2]
    if geometry == SPHERICAL:
        return p / np.linalg.norm(p)
    q = -inner(HYPERBOLIC, p, p)
    if q <= 0:
        raise GeometryError("vector is not timelike")
    p = p / math.sqrt(q)
    return p if p[2] > 0 else -p


def tangent_frame(geometry: str, p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit tangent u at p pointing toward q, and the unit normal n at p."""
    if geometry == EUCLIDEAN:
        d = np.array([q[0] - p[0], q[1] - p[1], 0.0])
        u = d / math.hypot(d[0], d[1])
        n = np.array([-u[1], u[0], 0.0])
        return u, n
    if geometry == SPHERICAL:
        d = q - (p @ q) * p
        u = d / np.linalg.norm(d)
        n = np.cross(p, u)
        return u, n
    d = q + inner(HYPERBOLIC, p, q) * p
    u = d / math.sqrt(inner(HYPERBOLIC, d, d))
    n = MINKOWSKI @ np.cross(p, u)
    n = n / math.sqrt(inner(HYPERBOLIC, n, n))
    return u, n


def exp_map(geometry: str, p: np.ndarray, w: np.ndarray, t: float) -> np.ndarray:
    """Point at distance t from p in unit tangent direction w."""
    if geometry == EUCLIDEAN:
        return p + t * w
    if geometry == SPHERICAL:
        return math.cos(t) * p + math.sin(t) * w
    return math.cosh(t) * p + math.sinh(t) * w


def side_sign(geometry: str, n: np.ndarray, p: np.ndarray, x: np.ndarray) -> float:
    """Signed offset of x from the geodesic through p with normal n."""
    if geometry == EUCLIDEAN:
        return float(n[0] * (x[0] - p[0]) + n[1] * (x[1] - p[1]))
    return inner(geometry, n, x)


def cos_angle(geometry: str, a, b, c):
    """Cosine of the angle opposite side c in a triangle with sides a, b, c.

    Works elementwise on numpy arrays.
    """
    if geometry == EUCLIDEAN:
        return (a * a + b * b - c * c) / (2 * a * b)
    if geometry == SPHERICAL:
        return (np.cos(c) - np.cos(a) * np.cos(b)) / (np.sin(a) * np.sin(b))
    return (np.cosh(a) * np.cosh(b) - np.cosh(c)) / (np.sinh(a) * np.sinh(b))


def equilateral_side(geometry: str, angle: float) -> float:
    """Side length of the equilateral triangle with the given angles."""
    if geometry == EUCLIDEAN:
        return 1.0
    c = math.cos(angle) / (1 - math.cos(angle))
    if geometry == SPHERICAL:
        return math.acos(max(-1.0, min(1.0, c)))
    return math.acosh(max(1.0, c))


# ------------------------------------------------------------ isometries

class Isometry:
    """A 3x3 matrix acting on model vectors of one geometry."""

    __slots__ = ("matrix", "geometry")

    def __init__(self, matrix, geometry: str):
        self.matrix = np.asarray(matrix, dtype=float)
        self.geometry = geometry

    @classmethod
    def identity(cls, geometry: str) -> "Isometry":
        return cls(np.eye(3), geometry)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.matrix @ other.matrix, self.geometry)

    def __call__(self, p: np.ndarray) -> np.ndarray:
        return self.matrix @ p

    def inverse(self) -> "Isometry":
        return Isometry(inverse_matrix(self.geometry, self.matrix), self.geometry)

    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def form_residual(self) -> float:
        """How far the matrix is from preserving the geometry's form."""
        m = self.matrix
        if self.geometry == EUCLIDEAN:
            lin = m[:2, :2]
            return float(max(np.abs(lin.T @ lin - np.eye(2)).max(),
                             np.abs(m[2] - [0, 0, 1]).max()))
        if self.geometry == SPHERICAL:
            return float(np.abs(m.T @ m - np.eye(3)).max())
        return float(np.abs(m.T @ MINKOWSKI @ m - MINKOWSKI).max())

    def is_identity(self, tol: float = 1e-9) -> bool:
        return bool(np.abs(self.matrix - np.eye(3)).max() < tol)

    def __repr__(self):
        return f"Isometry({self.geometry}, {self.matrix.tolist()})"


def orthonormalize(geometry: str, m: np.ndarray) -> np.ndarray:
    """Project a nearly isometric matrix onto the geometry's isometry group."""
    m = np.array(m, dtype=float)
    if geometry == EUCLIDEAN:
        u, _, vt = np.linalg.svd(m[:2, :2])
        m[:2, :2] = u @ vt
        m[2] = [0.0, 0.0, 1.0]
        return m
    if geometry == SPHERICAL:
        u, _, vt = np.linalg.svd(m)
        return u @ vt
    # Lorentz Gram-Schmidt, starting from the timelike image of the origin
    t = m[:, 2] / math.sqrt(-inner(HYPERBOLIC, m[:, 2], m[:, 2]))
    if t[2] < 0:
        t = -t
    a = m[:, 0] + inner(HYPERBOLIC, m[:, 0], t) * t
    a = a / math.sqrt(inner(HYPERBOLIC, a, a))
    b = m[:, 1] + inner(HYPERBOLIC, m[:, 1], t) * t - inner(HYPERBOLIC, m[:, 1], a) * a
    b = b / math.sqrt(inner(HYPERBOLIC, b, b))
    return np.column_stack([a, b, t])


def frame(geometry: str, p: np.ndarray, q: np.ndarray, r: np.ndarray | None = None) -> np.ndarray:
    """Isometry taking the origin to p and the +x direction toward q.

    With ``r`` given, the +y direction points to r's side of the geodesic pq,
    so the frame of a triangle encodes its orientation.
    """
    u, n = tangent_frame(geometry, p, q)
    if r is not None and side_sign(geometry, n, p, r) < 0:
        n = -n
    if geometry == EUCLIDEAN:
        return np.array([[u[0], n[0], p[0] / p[2]], [u[1], n[1], p[1] / p[2]], [0.0, 0.0, 1.0]])
    return np.column_stack([u, n, p])


def inverse_matrix(geometry: str, m: np.ndarray) -> np.ndarray:
    """Inverse of an isometry matrix using the geometry's form."""
    if geometry == SPHERICAL:
        return m.T
    if geometry == HYPERBOLIC:
        return MINKOWSKI @ m.T @ MINKOWSKI
    out = np.eye(3)
    lin = m[:2, :2].T
    out[:2, :2] = lin
    out[:2, 2] = -lin @ m[:2, 2]
    return out


def triangle_map(geometry: str, src: np.ndarray, dst: np.ndarray) -> Isometry:
    """Isometry taking triangle ``src`` (rows = vertices) onto congruent ``dst``."""
    fa = frame(geometry, src[0], src[1], src[2])
    fb = frame(geometry, dst[0], dst[1], dst[2])
    return Isometry(fb @ inverse_matrix(geometry, fa), geometry)


def to_origin(geometry: str, p: np.ndarray) -> np.ndarray:
    """Isometry matrix moving p to the origin (no rotation about p added)."""
    o = origin(geometry)
    if np.abs(p - o).max() < 1e-15:
        return np.eye(3)
    if geometry == EUCLIDEAN:
        m = np.eye(3)
        m[:2, 2] = -p[:2] / p[2]
        return m
    # frame at p whose +x direction points away from the origin
    u, n = tangent_frame(geometry, p, o)
    f = np.column_stack([-u, -n, p])
    if geometry == SPHERICAL and np.linalg.det(f) < 0:
        f[:, 1] = -f[:, 1]
    return inverse_matrix(geometry, f)


def fit_isometry(geometry: str, src: np.ndarray, dst: np.ndarray) -> Isometry:
    """Isometry mapping the columns of ``src`` onto those of ``dst``.

    Exact for congruent triangles; for nearly congruent input the linear
    solution is re-orthonormalized with respect to the geometry's form.
    """
    m = dst @ np.linalg.inv(src)
    return Isometry(orthonormalize(geometry, m), geometry)
