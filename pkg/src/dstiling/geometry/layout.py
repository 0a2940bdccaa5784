"""Fundamental-domain layout and side-pairing generators.

Each chamber D becomes a geodesic triangle whose k-vertex represents the
i,j-component of D with {i, j, k} = {0, 1, 2}.  Side i of the triangle is
the one opposite the k = i vertex and is shared with chamber s_i(D).

Side lengths are solved for directly: one unknown per s_i-orbit of chamber
sides, one equation per component asking that the corner angles of its
member chambers add up to 2pi/v (cycles) or pi/v (chains).  A solution is a
metric of constant curvature on the orbifold, so gluing the triangles along
a spanning tree gives a fundamental domain whose remaining side pairings are
exact isometries.

Symbols whose chamber complex is not simplicial (a tile that touches itself)
admit no such triangle metric.  For those the layout is computed on the
subdivided symbol, whose chambers are the six flags of each chamber, and
the original chambers are read off as unions of six small triangles.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..dsym import COLOR_PAIRS, DelaneySymbol, components
from . import space
from .space import EUCLIDEAN, HYPERBOLIC, SPHERICAL, Isometry

# (k, i) flags of a chamber: k the chamber vertex, i a chamber side through it
FLAGS = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
FLAG_INDEX = {f: n for n, f in enumerate(FLAGS)}

SOLVE_TOL = 1e-12
MAX_ITER = 200
ATTEMPTS = 8


class LayoutError(RuntimeError):
    pass


def _geometry(s: DelaneySymbol) -> str:
    from ..invariants import geometry_of
    return geometry_of(s)


def subdivide(s: DelaneySymbol) -> DelaneySymbol:
    """Symbol of the tiling of the same group whose tiles are the chambers of ``s``.

    Node 6(D-1)+f+1 is flag FLAGS[f] = (k, i) of chamber D: the k-vertex of
    D together with side i (i != k).  The new 0-vertex is the old k-vertex,
    the new 1-vertex is the midpoint of side i and the new 2-vertex is the
    center of D.
    """
    n = s.size
    ops = [[0] * (6 * n) for _ in range(3)]
    m01 = [3] * (6 * n)
    m12 = [0] * (6 * n)
    for d in s.nodes:
        for f, (k, i) in enumerate(FLAGS):
            node = 6 * (d - 1) + f
            other = 3 - i - k
            ops[0][node] = 6 * (d - 1) + FLAG_INDEX[(other, i)] + 1
            ops[1][node] = 6 * (d - 1) + FLAG_INDEX[(k, other)] + 1
            ops[2][node] = 6 * (s.s(i, d) - 1) + f + 1
            if k == 0:
                m12[node] = 2 * s.m12[d - 1]
            elif k == 1:
                m12[node] = 4
            else:
                m12[node] = 2 * s.m01[d - 1]
    return DelaneySymbol(ops, m01, m12)


# ------------------------------------------------------------ metric solve

def _side_classes(s: DelaneySymbol) -> tuple[np.ndarray, int]:
    cls = -np.ones((s.size, 3), dtype=int)
    count = 0
    for i in range(3):
        for d in s.nodes:
            if cls[d - 1, i] < 0:
                e = s.s(i, d)
                cls[d - 1, i] = cls[e - 1, i] = count
                count += 1
    return cls, count


def _angle_targets(s: DelaneySymbol):
    """Rows of (corner list, target angle) for every component."""
    rows = []
    for i, j in COLOR_PAIRS:
        k = 3 - i - j
        for comp in components(s, i, j):
            full = 2 * math.pi if comp.kind == "cycle" else math.pi
            rows.append(([(d - 1, k) for d in comp.nodes], full / comp.v, (i, j), comp))
    return rows


class _Metric:
    def __init__(self, s: DelaneySymbol, geometry: str):
        self.s = s
        self.geometry = geometry
        self.cls, self.nvars = _side_classes(s)
        self.rows = _angle_targets(s)
        self.targets = np.array([r[1] for r in self.rows])
        self.row_of = np.zeros((s.size, 3), dtype=int)
        for r, (corners, *_rest) in enumerate(self.rows):
            for d, k in corners:
                self.row_of[d, k] = r

    def angles(self, x):
        """Corner angles (n, 3) and cosines, or None if a triangle is invalid."""
        lengths = np.exp(x)[self.cls]
        if self.geometry == SPHERICAL and lengths.max() >= math.pi:
            return None
        cosines = np.empty_like(lengths)
        for k in range(3):
            a = lengths[:, (k + 1) % 3]
            b = lengths[:, (k + 2) % 3]
            cosines[:, k] = space.cos_angle(self.geometry, a, b, lengths[:, k])
        if not np.all(np.abs(cosines) < 1 - 1e-12):
            return None
        return np.arccos(cosines), cosines, lengths

    def residual(self, angles, x):
        sums = np.zeros(len(self.rows))
        np.add.at(sums, self.row_of.ravel(), angles.ravel())
        res = sums - self.targets
        if self.geometry == EUCLIDEAN:
            res = np.append(res, x.mean())
        return res

    def jacobian(self, x, angles, cosines, lengths):
        g = self.geometry
        if g == EUCLIDEAN:
            sn, ct = (lambda t: t), (lambda t: 1 / t)
        elif g == SPHERICAL:
            sn, ct = np.sin, (lambda t: 1 / np.tan(t))
        else:
            sn, ct = np.sinh, (lambda t: 1 / np.tanh(t))
        jac = np.zeros((len(self.rows) + (g == EUCLIDEAN), self.nvars))
        sin_a = np.sin(angles)
        for k in range(3):
            ia, ib = (k + 1) % 3, (k + 2) % 3
            a, b, c = lengths[:, ia], lengths[:, ib], lengths[:, k]
            cos = cosines[:, k]
            dc = -sn(c) / (sn(a) * sn(b))
            da = ct(b) - cos * ct(a)
            db = ct(a) - cos * ct(b)
            rows = self.row_of[:, k]
            for col, deriv, length in ((k, dc, c), (ia, da, a), (ib, db, b)):
                np.add.at(jac, (rows, self.cls[:, col]), -deriv / sin_a[:, k] * length)
        if g == EUCLIDEAN:
            jac[-1, :] = 1.0 / self.nvars
        return jac

    def start(self) -> np.ndarray:
        total = self.targets.sum()
        angle = total / (3 * self.s.size)
        side = space.equilateral_side(self.geometry, angle)
        return np.full(self.nvars, math.log(side))

    def solve(self, x0):
        """Levenberg-Marquardt with minimum-norm steps; None if stuck."""
        x = x0.copy()
        state = self.angles(x)
        if state is None:
            return None
        res = self.residual(state[0], x)
        norm = np.linalg.norm(res)
        lam = 1e-3
        for _ in range(MAX_ITER):
            if norm < SOLVE_TOL:
                return x
            jac = self.jacobian(x, *state)
            gram = jac @ jac.T
            while lam < 1e8:
                y = np.linalg.solve(gram + lam * np.eye(len(res)), -res)
                trial = x + jac.T @ y
                st = self.angles(trial)
                if st is not None:
                    r = self.residual(st[0], trial)
                    if np.linalg.norm(r) < norm:
                        x, state, res = trial, st, r
                        norm = np.linalg.norm(r)
                        lam = max(lam / 5, 1e-12)
                        break
                lam *= 4
            else:
                break
        return x if norm < 1e-9 else None


class _Packing(_Metric):
    """Circle-packing metric: one radius per component, sides r_a + r_b.

    Tangent-circle triangles are valid for all radii (spherical: perimeter
    below 2pi), so Newton's method on the log radii only has to avoid the
    spherical bound.
    """

    def __init__(self, s: DelaneySymbol, geometry: str):
        super().__init__(s, geometry)
        self.nrad = len(self.rows)
        # side class -> the two components at its endpoints
        self.ends = np.zeros((self.nvars, 2), dtype=int)
        for d in range(s.size):
            for i in range(3):
                self.ends[self.cls[d, i]] = (self.row_of[d, (i + 1) % 3], self.row_of[d, (i + 2) % 3])
        self.incidence = np.zeros((self.nvars, self.nrad))
        for c, (a, b) in enumerate(self.ends):
            self.incidence[c, a] += 1
            self.incidence[c, b] += 1

    def side_logs(self, u):
        r = np.exp(u)
        return np.log(r[self.ends[:, 0]] + r[self.ends[:, 1]])

    def solve_packing(self, u0):
        u = u0.copy()
        for _ in range(MAX_ITER):
            x = self.side_logs(u)
            state = self.angles(x)
            if state is None:
                return None
            res = self.residual(state[0], x)
            if self.geometry == EUCLIDEAN:
                res[-1] = u.mean()
            norm = np.linalg.norm(res)
            if norm < SOLVE_TOL:
                return x
            jac_x = self.jacobian(x, *state)
            # chain rule: dx/du = r_Z / (r_a + r_b)
            r = np.exp(u)
            dxdu = self.incidence * r[None, :] / np.exp(x)[:, None]
            jac = jac_x @ dxdu
            if self.geometry == EUCLIDEAN:
                jac[-1, :] = 1.0 / self.nrad
            step = np.linalg.lstsq(jac, -res, rcond=None)[0]
            limit = np.abs(step).max()
            if limit > 2.0:
                step *= 2.0 / limit
            t = 1.0
            while t > 1e-10:
                trial = u + t * step
                xt = self.side_logs(trial)
                st = self.angles(xt)
                if st is not None:
                    rt = self.residual(st[0], xt)
                    if self.geometry == EUCLIDEAN:
                        rt[-1] = trial.mean()
                    if np.linalg.norm(rt) < (1 - 1e-4 * t) * norm:
                        u = trial
                        break
                t /= 2
            else:
                return x if norm < 1e-9 else None
            if np.abs(u).max() > 60:
                return None
        return None

    def start_packing(self) -> np.ndarray:
        side = math.exp(self.start()[0]) if self.nvars else 1.0
        return np.full(self.nrad, math.log(side / 2))


# ------------------------------------------------------------ layout

@dataclass(frozen=True)
class DomainLayout:
    """Geodesic triangles for the chambers of one fundamental domain.

    ``points[D-1, k]`` is the k-vertex of chamber D as a model 3-vector.
    ``side_generators`` maps each boundary side (D, i) to the isometry that
    carries the triangle of s_i(D) onto its neighbor across that side.
    """

    symbol: DelaneySymbol
    geometry: str
    points: np.ndarray
    angles: np.ndarray
    lengths: np.ndarray
    parent: tuple
    side_generators: dict
    boundary: tuple
    vertex_map: dict
    corner_vertex: dict
    diameter: float
    subdivided: bool = False
    reference: np.ndarray = field(default=None, compare=False)

    def triangle(self, d: int) -> np.ndarray:
        return self.points[d - 1]

    def generator(self, d: int, i: int) -> Isometry | None:
        return self.side_generators.get((d, i))


def _tree(s: DelaneySymbol, order=(0, 1, 2)):
    """BFS spanning tree from node 1: parent[D-1] = (parent node, color)."""
    parent = [None] * s.size
    parent[0] = (0, -1)
    queue = deque([1])
    seq = [1]
    while queue:
        d = queue.popleft()
        for i in order:
            e = s.s(i, d)
            if parent[e - 1] is None:
                parent[e - 1] = (d, i)
                queue.append(e)
                seq.append(e)
    return parent, seq


def _glue(geometry, tri, i, angles_e, lengths_e):
    """Triangle of the neighbor across side i, given its corner data."""
    j, l = (i + 1) % 3, (i + 2) % 3
    pj, pl = tri[j], tri[l]
    u, n = space.tangent_frame(geometry, pj, pl)
    side = space.side_sign(geometry, n, pj, tri[i])
    sign = -1.0 if side > 0 else 1.0
    a = angles_e[j]
    w = math.cos(a) * u + sign * math.sin(a) * n
    x = space.exp_map(geometry, pj, w, lengths_e[l])
    out = tri.copy()
    out[i] = space.normalize_point(geometry, x)
    return out


def _first_triangle(geometry, angles, lengths):
    o = space.origin(geometry)
    ex = np.array([1.0, 0.0, 0.0])
    dirn = np.array([math.cos(angles[0]), math.sin(angles[0]), 0.0])
    p1 = space.exp_map(geometry, o, ex, lengths[2])
    p2 = space.exp_map(geometry, o, dirn, lengths[1])
    return np.array([o, p1, p2])


def _centroid(geometry, tri):
    c = tri.sum(axis=0) / 3
    return space.normalize_point(geometry, c) if geometry != EUCLIDEAN else c


def _realize(s: DelaneySymbol, geometry: str, parent, seq, x):
    metric = _Metric(s, geometry)
    angles, _cos, lengths = metric.angles(x)
    points = np.zeros((s.size, 3, 3))
    root = seq[0]
    points[root - 1] = _first_triangle(geometry, angles[root - 1], lengths[root - 1])
    for d in seq[1:]:
        p, i = parent[d - 1]
        points[d - 1] = _glue(geometry, points[p - 1], i, angles[d - 1], lengths[d - 1])
    # move the domain's center to the origin to keep coordinates small
    flat = points.reshape(-1, 3)
    center = space.normalize_point(geometry, flat.mean(axis=0))
    shift = space.to_origin(geometry, center)
    points = np.einsum("ij,nkj->nki", shift, points)
    flat = points.reshape(-1, 3)
    diameter = 0.0
    for a in flat[:: max(1, len(flat) // 60)]:
        for b in flat:
            diameter = max(diameter, space.distance(geometry, a, b))
    gens = {}
    tree_sides = set()
    for d in seq[1:]:
        p, i = parent[d - 1]
        tree_sides.add((p, i))
        tree_sides.add((d, i))
    for d in s.nodes:
        for i in range(3):
            if (d, i) in tree_sides:
                continue
            e = s.s(i, d)
            want = _glue(geometry, points[d - 1], i, angles[e - 1], lengths[e - 1])
            iso = space.triangle_map(geometry, points[e - 1], want)
            err = max(space.distance(geometry, iso(points[e - 1][k]), want[k]) for k in range(3))
            if err > 1e-6 * max(diameter, 1e-9):
                raise LayoutError(f"generator fit residual {err:.3g} at node {d}, side {i}")
            if not iso.is_identity(1e-8):
                gens[(d, i)] = iso
    return points, angles, lengths, gens, diameter


def _boundary_cycle(s: DelaneySymbol, gens) -> tuple:
    """Boundary sides of the disc, in the order met walking around it."""
    sides = sorted(gens)
    if not sides:
        return ()
    seen = set()
    cycles = []
    for start in sides:
        if start in seen:
            continue
        cyc = []
        d, i = start
        k = (i + 1) % 3
        while (d, i) not in seen:
            seen.add((d, i))
            cyc.append((d, i))
            # rotate around the k-vertex to the next boundary side
            j = 3 - i - k
            e, c = d, j
            while (e, c) not in gens:
                e = s.s(c, e)
                c = 3 - k - c
            d, i, k = e, c, 3 - c - k
        cycles.append(tuple(cyc))
    return cycles[0] if len(cycles) == 1 else tuple(x for c in cycles for x in c)


def _vertex_classes(s: DelaneySymbol, gens):
    """Merge chamber corners that coincide inside the disc."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in s.nodes:
        for i in range(3):
            if (d, i) in gens:
                continue
            e = s.s(i, d)
            for k in range(3):
                if k != i:
                    a, b = find((d, k)), find((e, k))
                    if a != b:
                        parent[a] = b
    corner_vertex = {}
    ids = {}
    for d in s.nodes:
        for k in range(3):
            root = find((d, k))
            corner_vertex[(d, k)] = ids.setdefault(root, len(ids))
    comp_of = {}
    for i, j in COLOR_PAIRS:
        k = 3 - i - j
        for idx, comp in enumerate(components(s, i, j)):
            for d in comp.nodes:
                comp_of[(d, k)] = ((i, j), idx)
    reps = {}
    for (d, k), vid in corner_vertex.items():
        reps.setdefault(comp_of[(d, k)], set()).add(vid)
    vertex_map = {}
    for (d, k), vid in corner_vertex.items():
        key = comp_of[(d, k)]
        vertex_map[vid] = (key, len(reps[key]))
    return corner_vertex, vertex_map


def _solve_lengths(s: DelaneySymbol, geometry: str):
    """Log side lengths of a triangle metric with the required cone angles."""
    packing = _Packing(s, geometry)
    x = packing.solve_packing(packing.start_packing())
    if x is not None:
        return x
    rng = np.random.default_rng(12345)
    x0 = packing.start()
    for attempt in range(ATTEMPTS):
        start = x0 if attempt == 0 else x0 + rng.normal(0, 0.1 + 0.05 * attempt, size=x0.shape)
        x = packing.solve(start)
        if x is not None:
            return x
    return None


def _layout_direct(s: DelaneySymbol, geometry: str, parent, seq, subdivided=False):
    x = _solve_lengths(s, geometry)
    if x is None:
        return None
    points, angles, lengths, gens, diameter = _realize(s, geometry, parent, seq, x)
    corner_vertex, vertex_map = _vertex_classes(s, gens)
    return DomainLayout(s, geometry, points, angles, lengths, tuple(parent), gens,
                        _boundary_cycle(s, gens), vertex_map, corner_vertex, diameter,
                        subdivided, _centroid(geometry, points[0]))


def _subdivided_tree(s: DelaneySymbol, sub: DelaneySymbol):
    """Spanning tree of the subdivision that mirrors the BFS tree of ``s``."""
    parent_s, seq_s = _tree(s)
    parent = [None] * sub.size
    seq = []
    chain = [(2, 0), (1, 0), (1, 2), (0, 2), (0, 1), (2, 1)]  # joined by s0, s1 alternately
    for d in seq_s:
        base = 6 * (d - 1)
        nodes = [base + FLAG_INDEX[f] + 1 for f in chain]
        p, i = parent_s[d - 1]
        if p == 0:
            parent[nodes[0] - 1] = (0, -1)
            first = nodes[0]
        else:
            f = FLAG_INDEX[((i + 1) % 3, i)]
            first = base + f + 1
            parent[first - 1] = (6 * (p - 1) + f + 1, 2)
        seq.append(first)
        at = nodes.index(first)
        for step in (1, -1):
            prev = first
            for t in range(1, 6):
                node = nodes[(at + step * t) % 6]
                if parent[node - 1] is not None:
                    break
                color = 0 if sub.s(0, prev) == node else 1
                if sub.s(color, prev) != node:
                    break
                parent[node - 1] = (prev, color)
                seq.append(node)
                prev = node
    return parent, seq


def _from_subdivision(s: DelaneySymbol, geometry: str) -> DomainLayout | None:
    sub = subdivide(s)
    parent, seq = _subdivided_tree(s, sub)
    inner = _layout_direct(sub, geometry, parent, seq, subdivided=True)
    if inner is None:
        return None
    points = np.zeros((s.size, 3, 3))
    for d in s.nodes:
        for k in range(3):
            points[d - 1, k] = inner.points[6 * (d - 1) + FLAG_INDEX[(k, (k + 1) % 3)], 0]
    gens = {}
    for (node, c), iso in inner.side_generators.items():
        if c == 2:
            d = (node - 1) // 6 + 1
            k, i = FLAGS[(node - 1) % 6]
            gens[(d, i)] = iso
    corner_vertex, vertex_map = _vertex_classes(s, gens)
    s_parent, _seq = _tree(s)
    angles = np.zeros((s.size, 3))
    for d in s.nodes:
        for k in range(3):
            angles[d - 1, k] = sum(inner.angles[6 * (d - 1) + FLAG_INDEX[(k, i)], 0]
                                   for i in range(3) if i != k)
    lengths = np.zeros((s.size, 3))
    for d in s.nodes:
        for i in range(3):
            a, b = [points[d - 1, k] for k in range(3) if k != i]
            lengths[d - 1, i] = space.distance(geometry, a, b)
    return DomainLayout(s, geometry, points, angles, lengths, tuple(s_parent), gens,
                        _boundary_cycle(s, gens), vertex_map, corner_vertex,
                        inner.diameter, True, inner.reference)


def layout_fundamental_domain(s: DelaneySymbol, geometry: str | None = None) -> DomainLayout:
    """Lay out a fundamental domain of the tiling's symmetry group."""
    if geometry is None:
        geometry = _geometry(s)
    parent, seq = _tree(s)
    lay = _layout_direct(s, geometry, parent, seq)
    if lay is None:
        lay = _from_subdivision(s, geometry)
    if lay is None:
        raise LayoutError(f"no triangle metric found for {s}")
    return lay


def compute_generators(layout: DomainLayout) -> list[tuple[tuple[int, int], Isometry]]:
    """Side-pairing isometries for the boundary sides, in boundary order."""
    return [(side, layout.side_generators[side]) for side in sorted(layout.side_generators)]
