"""Copies of the fundamental domain covering a region, and model projections."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import space
from .layout import DomainLayout
from .spatial import PointTree
from .space import EUCLIDEAN, HYPERBOLIC, SPHERICAL, GeometryError, Isometry

COPY_BUDGET = 1_000_000
DEDUP_TOL = 1e-6
MODELS = ("euclidean", "poincare", "klein", "hyperboloid", "orthographic")


class DevelopmentError(RuntimeError):
    pass


# ------------------------------------------------------------ models

def _as_point(obj) -> np.ndarray:
    if isinstance(obj, Isometry):
        return obj.matrix @ np.array([0.0, 0.0, 1.0])
    return np.asarray(obj, dtype=float)


def to_model(obj, model: str, check: bool = True) -> np.ndarray:
    """Planar coordinates of a point (or of the image of the origin under an isometry)."""
    p = _as_point(obj)
    if model == "euclidean":
        return p[:2] / p[2]
    if model == "orthographic":
        if check and abs(p @ p - 1) > 1e-6:
            raise GeometryError("point is not on the unit sphere")
        return p[:2].copy()
    if check and (abs(p[2] ** 2 - p[0] ** 2 - p[1] ** 2 - 1) > 1e-6 * max(1.0, p[2] ** 2) or p[2] <= 0):
        raise GeometryError("point is not on the upper hyperboloid sheet")
    if model == "hyperboloid":
        return p.copy()
    if model == "poincare":
        return p[:2] / (1 + p[2])
    if model == "klein":
        return p[:2] / p[2]
    raise ValueError(f"unknown model {model!r}")


def model_array(points: np.ndarray, model: str) -> np.ndarray:
    """Vectorized ``to_model`` for an (N, 3) array, without surface checks."""
    if model == "euclidean":
        return points[:, :2] / points[:, 2:3]
    if model == "orthographic":
        return points[:, :2]
    if model == "poincare":
        return points[:, :2] / (1 + points[:, 2:3])
    if model == "klein":
        return points[:, :2] / points[:, 2:3]
    raise ValueError(f"unknown model {model!r}")


def poincare_to_klein(p: float) -> float:
    return 2 * p / (1 + p * p)


# ------------------------------------------------------------ regions

@dataclass(frozen=True)
class Disc:
    """Disc around the model origin; for hyperbolic geometry in Poincare coordinates."""
    radius: float
    center: tuple = (0.0, 0.0)


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float


@dataclass(frozen=True)
class WholeSurface:
    """Every copy is visible (spherical tilings)."""


def _triangles_2d(layout: DomainLayout, iso: np.ndarray) -> np.ndarray | None:
    """Chamber triangles of one copy in straight-line planar coordinates.

    Hyperbolic copies use the Klein model, where geodesics are straight.
    """
    pts = layout.points.reshape(-1, 3) @ iso.T
    if layout.geometry == EUCLIDEAN:
        flat = pts[:, :2] / pts[:, 2:3]
    elif layout.geometry == HYPERBOLIC:
        flat = pts[:, :2] / pts[:, 2:3]
    else:
        return None
    return flat.reshape(-1, 3, 2)


def _tri_disc(tris: np.ndarray, center, radius) -> bool:
    c = np.asarray(center)
    p = tris - c
    if np.any((p ** 2).sum(axis=2).min(axis=1) < radius ** 2):
        return True
    for k in range(3):
        a, b = p[:, k], p[:, (k + 1) % 3]
        d = b - a
        t = np.clip(-(a * d).sum(axis=1) / np.maximum((d * d).sum(axis=1), 1e-300), 0, 1)
        close = a + t[:, None] * d
        if np.any((close ** 2).sum(axis=1) < radius ** 2):
            return True
    # center inside a triangle
    return bool(np.any(_inside(tris, c[None, :])[:, 0]))


def _inside(tris: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """(T, P) boolean: point P strictly inside triangle T."""
    a, b, c = tris[:, 0, None, :], tris[:, 1, None, :], tris[:, 2, None, :]
    q = pts[None, :, :]

    def cross(o, u, v):
        return (u[..., 0] - o[..., 0]) * (v[..., 1] - o[..., 1]) - (u[..., 1] - o[..., 1]) * (v[..., 0] - o[..., 0])
    d1, d2, d3 = cross(a, b, q), cross(b, c, q), cross(c, a, q)
    pos = (d1 > 0) & (d2 > 0) & (d3 > 0)
    neg = (d1 < 0) & (d2 < 0) & (d3 < 0)
    return pos | neg


def _tri_rect(tris: np.ndarray, r: Rect) -> bool:
    """Separating-axis test: does any triangle's interior meet the rectangle's?"""
    lo = tris.min(axis=1)
    hi = tris.max(axis=1)
    cand = (lo[:, 0] < r.xmax) & (hi[:, 0] > r.xmin) & (lo[:, 1] < r.ymax) & (hi[:, 1] > r.ymin)
    if not cand.any():
        return False
    corners = np.array([[r.xmin, r.ymin], [r.xmax, r.ymin], [r.xmax, r.ymax], [r.xmin, r.ymax]])
    for tri in tris[cand]:
        separated = False
        for k in range(3):
            e = tri[(k + 1) % 3] - tri[k]
            n = np.array([-e[1], e[0]])
            tp = tri @ n
            rp = corners @ n
            if tp.max() <= rp.min() or rp.max() <= tp.min():
                separated = True
                break
        if not separated:
            return True
    return False


def copy_visible(layout: DomainLayout, iso: np.ndarray, region) -> bool:
    if isinstance(region, WholeSurface) or layout.geometry == SPHERICAL:
        return True
    tris = _triangles_2d(layout, iso)
    if isinstance(region, Rect):
        return _tri_rect(tris, region)
    if layout.geometry == HYPERBOLIC:
        # a Poincare disc about the origin is a Klein disc of larger radius
        return _tri_disc(tris, (0.0, 0.0), poincare_to_klein(region.radius))
    return _tri_disc(tris, region.center, region.radius)


# ------------------------------------------------------------ development

def _dedup_coords(geometry: str, p: np.ndarray) -> np.ndarray:
    if geometry == EUCLIDEAN:
        return p[:2] / p[2]
    return p


def _tolerance(layout: DomainLayout, scale: float) -> float:
    cell = layout.diameter if layout.diameter > 0 else 1.0
    return scale * cell


@dataclass
class Copy:
    isometry: Isometry
    visible: bool


def develop(layout: DomainLayout, generators, region, budget: int = COPY_BUDGET,
            tol: float = DEDUP_TOL) -> list[Copy]:
    """Breadth-first closure over the generators, keeping visible copies.

    Copies are identified by the image of the layout's reference point;
    hyperbolic matches use a tolerance scaled by the point's height on the
    hyperboloid, which tracks the growth of rounding error.
    """
    geometry = layout.geometry
    gens = [g.matrix for _side, g in generators]
    dim = 2 if geometry == EUCLIDEAN else 3
    base_tol = _tolerance(layout, tol)
    tree = PointTree(dim, base_tol, extent=4.0)
    ref = layout.reference
    ident = np.eye(3)
    kept = [ident]
    tree.insert(_dedup_coords(geometry, ref), 0)
    if not copy_visible(layout, ident, region):
        return [Copy(Isometry(ident, geometry), False)]
    frontier = deque([ident])
    while frontier:
        g = frontier.popleft()
        for h in gens:
            m = g @ h
            p = _dedup_coords(geometry, m @ ref)
            if geometry == HYPERBOLIC:
                tree.tol = base_tol * max(1.0, p[2])
            if tree.find(p) is not None:
                continue
            if geometry == HYPERBOLIC:
                m = space.orthonormalize(geometry, m)
            elif geometry == SPHERICAL:
                m = space.orthonormalize(geometry, m)
            if not copy_visible(layout, m, region):
                continue
            tree.insert(p, len(kept))
            kept.append(m)
            frontier.append(m)
            if len(kept) > budget:
                raise DevelopmentError(f"copy budget {budget} exceeded")
    return [Copy(Isometry(m, geometry), True) for m in kept]


# ------------------------------------------------------------ cover walks

class Cover:
    """Chamber instances of the universal cover as (node, group element)."""

    def __init__(self, layout: DomainLayout):
        self.layout = layout
        self.s = layout.symbol
        self.gens = {side: iso.matrix for side, iso in layout.side_generators.items()}

    def cross(self, d: int, g: np.ndarray, i: int):
        e = self.s.s(i, d)
        h = self.gens.get((d, i))
        return e, (g if h is None else g @ h)

    def vertex(self, d: int, g: np.ndarray, k: int) -> np.ndarray:
        return g @ self.layout.points[d - 1, k]
