"""SVG drawings of developed tilings."""
from __future__ import annotations

import colorsys
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .dsym import DelaneySymbol, canonical_trace, components
from .geometry import space
from .geometry.develop import Cover, Disc, Rect, WholeSurface, develop, model_array
from .geometry.layout import DomainLayout, compute_generators, layout_fundamental_domain
from .geometry.spatial import PointTree
from .geometry.space import EUCLIDEAN, HYPERBOLIC, SPHERICAL

PALETTE = ["#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
           "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff"]
MODELS_FOR = {
    EUCLIDEAN: ("euclidean",),
    HYPERBOLIC: ("poincare", "klein"),
    SPHERICAL: ("orthographic",),
}
SAGITTA_PX = 0.25


class RenderError(ValueError):
    pass


def palette_color(k: int) -> str:
    if k < len(PALETTE):
        return PALETTE[k]
    hue = ((k - len(PALETTE)) * 0.61803398875) % 1.0
    r, g, b = colorsys.hls_to_rgb(hue, 0.6, 0.65)
    return "#%02x%02x%02x" % (round(r * 255), round(g * 255), round(b * 255))


@dataclass
class RenderStyle:
    palette: list = field(default_factory=list)
    stroke_width: float = 1.0
    show_chambers: bool = False
    background: str = "white"
    size: int = 512

    def color(self, k: int) -> str:
        return self.palette[k] if k < len(self.palette) else palette_color(k)


@dataclass
class DrawnTile:
    tile_class: int
    corners: np.ndarray         # model 3-vectors V_0, E_0, V_1, E_1, ...
    cells: list                 # ids of those boundary points (shared across tiles)


def default_model(geometry: str) -> str:
    return MODELS_FOR[geometry][0]


def default_region(layout: DomainLayout, model: str, radius: float | None):
    if layout.geometry == SPHERICAL:
        return WholeSurface()
    if layout.geometry == HYPERBOLIC:
        return Disc(radius if radius is not None else 0.95)
    half = (radius if radius is not None else 3.0) * max(layout.diameter, 1e-9)
    return Rect(-half, -half, half, half)


def collect_tiles(layout: DomainLayout, copies, tol: float = 1e-6) -> list[DrawnTile]:
    """Tile instances met by the developed copies, each listed once."""
    s = layout.symbol
    cover = Cover(layout)
    klass = {}
    for idx, comp in enumerate(components(s, 0, 1)):
        for d in comp.nodes:
            klass[d] = idx
    geometry = layout.geometry
    dim = 2 if geometry == EUCLIDEAN else 3
    base = tol * (layout.diameter or 1.0)
    centers = PointTree(dim, base, extent=4.0)
    cells = PointTree(dim, base, extent=4.0)

    def key(p):
        if geometry == EUCLIDEAN:
            return p[:2] / p[2]
        return p

    def cell_id(tree, p):
        q = key(p)
        if geometry == HYPERBOLIC:
            tree.tol = base * max(1.0, q[2])
        return tree.find_or_insert(q, len(tree))

    tiles = []
    for c in copies:
        g = c.isometry.matrix
        for d in s.nodes:
            _cid, new = cell_id(centers, g @ layout.points[d - 1, 2])
            if not new:
                continue
            pts, ids = [], []
            e, h = d, g
            for step in range(2 * s.m01[d - 1]):
                k = 0 if step % 2 == 0 else 1
                p = h @ layout.points[e - 1, k]
                pts.append(p)
                ids.append(cell_id(cells, p)[0])
                e, h = cover.cross(e, h, 1 if step % 2 == 0 else 0)
            tiles.append(DrawnTile(klass[d], np.array(pts), ids))
    return tiles


# ------------------------------------------------------------ path output

def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


class _Canvas:
    def __init__(self, model: str, size: int, half: float, center=(0.0, 0.0)):
        self.model = model
        self.size = size
        self.scale = size / (2 * half)
        self.cx, self.cy = center

    def px(self, xy) -> tuple[float, float]:
        return ((xy[0] - self.cx) * self.scale + self.size / 2,
                self.size / 2 - (xy[1] - self.cy) * self.scale)


def _poincare_arc(a: np.ndarray, b: np.ndarray):
    """Circle (center, radius) of the geodesic through disc points a, b, or None if straight."""
    cross = a[0] * b[1] - a[1] * b[0]
    if abs(cross) < 1e-9:
        return None
    # circle orthogonal to the unit circle through a and b
    na, nb = (a @ a + 1) / 2, (b @ b + 1) / 2
    det = a[0] * b[1] - a[1] * b[0]
    cx = (na * b[1] - nb * a[1]) / det
    cy = (a[0] * nb - b[0] * na) / det
    center = np.array([cx, cy])
    return center, math.sqrt(max(center @ center - 1, 0.0))


def _arc_cubics(canvas: _Canvas, a, b) -> list[str]:
    """Cubic Bezier commands for the Poincare geodesic from a to b."""
    arc = _poincare_arc(a, b)
    if arc is None:
        return ["L %s %s" % tuple(map(_fmt, canvas.px(b)))]
    center, rho = arc
    rho_px = rho * canvas.scale
    t0 = math.atan2(a[1] - center[1], a[0] - center[0])
    t1 = math.atan2(b[1] - center[1], b[0] - center[0])
    sweep = (t1 - t0 + math.pi) % (2 * math.pi) - math.pi
    # a single chord is already within tolerance
    if rho_px * (1 - math.cos(sweep / 2)) <= SAGITTA_PX:
        return ["L %s %s" % tuple(map(_fmt, canvas.px(b)))]
    pieces = 1
    while True:
        phi = abs(sweep) / pieces
        # radial error of the standard cubic circle-arc approximation
        err = rho_px * (4 / 27) * math.sin(phi / 4) ** 6 / math.cos(phi / 4) ** 2
        if err <= SAGITTA_PX / 4:
            break
        pieces += 1
    out = []
    k = 4 / 3 * math.tan(sweep / pieces / 4)
    for n in range(pieces):
        u0 = t0 + sweep * n / pieces
        u1 = t0 + sweep * (n + 1) / pieces
        p0 = center + rho * np.array([math.cos(u0), math.sin(u0)])
        p3 = center + rho * np.array([math.cos(u1), math.sin(u1)])
        c1 = p0 + k * rho * np.array([-math.sin(u0), math.cos(u0)])
        c2 = p3 - k * rho * np.array([-math.sin(u1), math.cos(u1)])
        coords = [*canvas.px(c1), *canvas.px(c2), *canvas.px(p3)]
        out.append("C " + " ".join(_fmt(v) for v in coords))
    return out


def _sphere_samples(canvas: _Canvas, a: np.ndarray, b: np.ndarray) -> list[np.ndarray]:
    """Points along the great-circle arc from a (excluded) to b (included)."""
    ang = space.distance(SPHERICAL, a, b)
    pieces = max(1, int(math.ceil(ang * math.sqrt(canvas.scale / (8 * SAGITTA_PX)))))
    out = []
    for n in range(1, pieces + 1):
        t = n / pieces
        p = math.sin((1 - t) * ang) * a + math.sin(t * ang) * b
        out.append(p / np.linalg.norm(p))
    return out


def _clip_front(points: list[np.ndarray]) -> list[np.ndarray]:
    """Clip a closed polyline on the sphere to z >= 0; cuts follow the rim."""
    out = []
    n = len(points)
    for i in range(n):
        cur, nxt = points[i], points[(i + 1) % n]
        if cur[2] >= 0:
            out.append(cur)
        if (cur[2] >= 0) != (nxt[2] >= 0):
            t = cur[2] / (cur[2] - nxt[2])
            q = cur + t * (nxt - cur)
            q[2] = 0.0
            out.append(q / np.linalg.norm(q))
    if len(out) < 3:
        return []
    # replace straight chords between rim points by arcs along the rim
    full = []
    m = len(out)
    for i in range(m):
        a, b = out[i], out[(i + 1) % m]
        full.append(a)
        if a[2] == 0.0 and b[2] == 0.0:
            ta, tb = math.atan2(a[1], a[0]), math.atan2(b[1], b[0])
            sweep = (tb - ta + math.pi) % (2 * math.pi) - math.pi
            steps = int(abs(sweep) / 0.05)
            for k in range(1, steps):
                u = ta + sweep * k / steps
                full.append(np.array([math.cos(u), math.sin(u), 0.0]))
    return full


def _tile_path(canvas: _Canvas, geometry: str, corners: np.ndarray) -> str | None:
    model = canvas.model
    n = len(corners)
    if model == "orthographic":
        dense = []
        for i in range(n):
            dense.extend(_sphere_samples(canvas, corners[i], corners[(i + 1) % n]))
        dense = _clip_front(dense)
        if not dense:
            return None
        cmds = ["M %s %s" % tuple(map(_fmt, canvas.px(dense[0][:2])))]
        cmds.extend("L %s %s" % tuple(map(_fmt, canvas.px(p[:2]))) for p in dense[1:])
        return " ".join(cmds) + " Z"
    flat = model_array(corners, model)
    cmds = ["M %s %s" % tuple(map(_fmt, canvas.px(flat[0])))]
    for i in range(n):
        a, b = flat[i], flat[(i + 1) % n]
        if model == "poincare":
            cmds.extend(_arc_cubics(canvas, a, b))
        else:
            cmds.append("L %s %s" % tuple(map(_fmt, canvas.px(b))))
    return " ".join(cmds) + " Z"


def _tile_in_view(tile: DrawnTile, model: str, region, geometry: str) -> bool:
    if model == "orthographic":
        # tiles reaching the front hemisphere; clipped when drawn
        return True
    flat = model_array(tile.corners, model)
    if model in ("poincare", "klein"):
        r = np.sqrt((flat ** 2).sum(axis=1))
        # keep tiles that reach into the region, and stay clear of the ideal boundary
        limit = region.radius if model == "poincare" else 2 * region.radius / (1 + region.radius ** 2)
        return bool(r.min() < limit and r.max() < 1 - 1e-4)
    xmin, ymin = flat.min(axis=0)
    xmax, ymax = flat.max(axis=0)
    return bool(xmax > region.xmin and xmin < region.xmax and ymax > region.ymin and ymin < region.ymax)


def _draw_order(tile: DrawnTile, model: str):
    if model == "orthographic":
        c = tile.corners.mean(axis=0)
        return (round(float(c[2] / np.linalg.norm(c)), 9), tile.tile_class,
                tuple(np.round(tile.corners[0], 9)))
    return (tile.tile_class, tuple(np.round(model_array(tile.corners[:1], model)[0], 9)))


def render_tiles(s: DelaneySymbol, model: str | None = None, radius: float | None = None):
    """Layout, develop and return (layout, model, region, visible tiles)."""
    layout = layout_fundamental_domain(s)
    if model is None:
        model = default_model(layout.geometry)
    if model not in MODELS_FOR[layout.geometry]:
        raise RenderError(f"model {model!r} does not fit a {layout.geometry} tiling")
    region = default_region(layout, model, radius)
    copies = develop(layout, compute_generators(layout), region)
    tiles = [t for t in collect_tiles(layout, copies) if _tile_in_view(t, model, region, layout.geometry)]
    tiles.sort(key=lambda t: _draw_order(t, model))
    return layout, model, region, tiles


def render_svg(s: DelaneySymbol, model: str | None = None, radius: float | None = None,
               style: RenderStyle | None = None) -> str:
    style = style or RenderStyle()
    layout, model, region, tiles = render_tiles(s, model, radius)
    size = style.size
    if model in ("poincare", "klein", "orthographic"):
        canvas = _Canvas(model, size, 1.02)
    else:
        canvas = _Canvas(model, size, region.xmax)
    out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect x="0" y="0" width="{size}" height="{size}" fill="{style.background}"/>']
    if model in ("poincare", "klein", "orthographic"):
        out.append(f'<circle cx="{_fmt(size / 2)}" cy="{_fmt(size / 2)}" r="{_fmt(canvas.scale)}" '
                   f'fill="none" stroke="gray" stroke-width="{_fmt(style.stroke_width)}"/>')
    out.append(f'<g stroke="black" stroke-width="{_fmt(style.stroke_width)}" '
               f'stroke-linejoin="round" fill-rule="evenodd">')
    for tile in tiles:
        d = _tile_path(canvas, layout.geometry, tile.corners)
        if d is not None:
            out.append(f'<path d="{d}" fill="{style.color(tile.tile_class)}"/>')
    out.append('</g>')
    if style.show_chambers:
        out.append(f'<g stroke="gray" stroke-width="{_fmt(style.stroke_width / 4)}" fill="none">')
        out.extend(_chamber_paths(layout, canvas, region, model))
        out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def _chamber_paths(layout, canvas, region, model):
    copies = develop(layout, compute_generators(layout), region)
    paths = []
    for c in copies:
        pts = np.einsum("ij,nkj->nki", c.isometry.matrix, layout.points)
        for tri in pts:
            flat = model_array(tri, model) if model != "orthographic" else tri[:, :2]
            if model == "orthographic" and tri[:, 2].min() < 0:
                continue
            p = [canvas.px(x) for x in flat]
            paths.append('<path d="M %s %s L %s %s L %s %s Z"/>' % tuple(_fmt(v) for q in p for v in q))
    return paths


def svg_filename(s: DelaneySymbol, model: str) -> str:
    digest = hashlib.sha1(canonical_trace(s).encode()).hexdigest()[:16]
    return f"{digest}.{model}.svg"
