"""Pseudo-convexity test by developing a tile together with its first corona."""
from __future__ import annotations

import numpy as np

from ..dsym import DelaneySymbol, components
from .develop import Cover, DEDUP_TOL
from .layout import DomainLayout, layout_fundamental_domain
from .space import EUCLIDEAN, HYPERBOLIC
from .spatial import PointTree


class _Cells:
    """Assigns integer ids to points of the cover, matching within tolerance."""

    def __init__(self, layout: DomainLayout, tol: float):
        self.geometry = layout.geometry
        self.base = tol * (layout.diameter or 1.0)
        self.tree = PointTree(2 if self.geometry == EUCLIDEAN else 3, self.base, extent=4.0)

    def id(self, p: np.ndarray) -> int:
        if self.geometry == EUCLIDEAN:
            p = p[:2] / p[2]
        elif self.geometry == HYPERBOLIC:
            self.tree.tol = self.base * max(1.0, p[2])
        return self.tree.find_or_insert(p, len(self.tree))[0]


def _contiguous(positions: set[int], length: int) -> bool:
    if len(positions) >= length:
        return False
    starts = sum(1 for p in positions if (p - 1) % length not in positions)
    return starts == 1


def tile_is_normal(cover: Cover, cells: _Cells, d: int) -> bool:
    s = cover.s
    m = s.m01[d - 1]
    # walk the tile: chambers c_0 .. c_{2m-1} alternating sides 1 and 0
    chambers = []
    e, g = d, np.eye(3)
    for step in range(2 * m):
        chambers.append((e, g))
        e, g = cover.cross(e, g, 1 if step % 2 == 0 else 0)
    center = cells.id(cover.vertex(d, np.eye(3), 2))
    if cells.id(cover.vertex(e, g, 2)) != center or e != d:
        raise RuntimeError("tile walk did not close")
    cycle = []        # cell ids V_0, E_0, V_1, E_1, ...
    touching = {}     # neighbor tile center id -> positions on the cycle
    for t in range(m):
        cv, gv = chambers[2 * t]
        ce, ge = chambers[2 * t + 1]
        cycle.append(cells.id(cover.vertex(cv, gv, 0)))
        cycle.append(cells.id(cover.vertex(ce, ge, 1)))
        # tiles around the vertex: alternate sides 1 and 2
        x, h = cv, gv
        for step in range(2 * s.m12[cv - 1]):
            tid = cells.id(cover.vertex(x, h, 2))
            if tid != center:
                touching.setdefault(tid, set()).add(2 * t)
            x, h = cover.cross(x, h, 1 if step % 2 == 0 else 2)
        # the tile across the edge
        x, h = cover.cross(ce, ge, 2)
        tid = cells.id(cover.vertex(x, h, 2))
        if tid != center:
            touching.setdefault(tid, set()).add(2 * t + 1)
    if len(set(cycle)) != len(cycle):
        return False
    return all(_contiguous(pos, 2 * m) for pos in touching.values())


def is_pseudo_convex(s: DelaneySymbol, layout: DomainLayout | None = None,
                     tol: float = DEDUP_TOL) -> bool:
    """True if every two tiles meet in a connected set (or not at all)."""
    if layout is None:
        layout = layout_fundamental_domain(s)
    cover = Cover(layout)
    cells = _Cells(layout, tol)
    return all(tile_is_normal(cover, cells, comp.nodes[0]) for comp in components(s, 0, 1))
