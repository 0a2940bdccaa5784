"""Per-tiling invariants computed from a Delaney-Dress symbol."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .dsym import (COLOR_PAIRS, DelaneySymbol, components, dual, is_isomorphic,
                   minimal_image, orbit, r_value)

SPHERICAL = "spherical"
EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"


class OrbifoldError(RuntimeError):
    """Internal inconsistency while deriving an orbifold."""


@dataclass(frozen=True)
class OrbifoldSignature:
    handles: int = 0
    cones: tuple[int, ...] = ()
    boundaries: tuple[tuple[int, ...], ...] = ()
    crosscaps: int = 0
    # corner lists in a consistent walking direction (orientable surfaces only)
    oriented: bool = field(default=True, compare=False)

    @property
    def corners(self) -> list[int]:
        return [c for b in self.boundaries for c in b]

    def euler(self) -> Fraction:
        """Conway cost formula for the orbifold Euler characteristic."""
        chi = Fraction(2 - 2 * self.handles - self.crosscaps - len(self.boundaries))
        for a in self.cones:
            chi -= 1 - Fraction(1, a)
        for a in self.corners:
            chi -= Fraction(1 - Fraction(1, a), 2)
        return chi

    def is_bad(self) -> bool:
        if self.handles or self.crosscaps:
            return False
        if not self.boundaries:
            cones = self.cones
            return len(cones) == 1 or (len(cones) == 2 and cones[0] != cones[1])
        if len(self.boundaries) == 1 and not self.cones:
            c = self.boundaries[0]
            return len(c) == 1 or (len(c) == 2 and c[0] != c[1])
        return False


def curvature(s: DelaneySymbol) -> Fraction:
    k = Fraction(0)
    for d in range(s.size):
        k += Fraction(1, s.m01[d]) + Fraction(1, s.m12[d]) - Fraction(1, 2)
    return k


def geometry_of(s: DelaneySymbol) -> str:
    return _geometry_for(curvature(s))


def _geometry_for(k: Fraction) -> str:
    if k > 0:
        return SPHERICAL
    if k < 0:
        return HYPERBOLIC
    return EUCLIDEAN


def euler_characteristic(s: DelaneySymbol) -> Fraction:
    return curvature(s) / 2


def two_coloring(s: DelaneySymbol, ignore_loops: bool) -> list[int] | None:
    """Colors 0/1 per node such that every sigma edge joins different colors.

    With ``ignore_loops`` fixed points are skipped (surface orientability);
    otherwise a fixed point makes the coloring impossible.
    """
    color = [-1] * s.size
    color[0] = 0
    stack = [1]
    while stack:
        d = stack.pop()
        for op in s.ops:
            e = op[d - 1]
            if e == d:
                if ignore_loops:
                    continue
                return None
            if color[e - 1] < 0:
                color[e - 1] = 1 - color[d - 1]
                stack.append(e)
            elif color[e - 1] == color[d - 1]:
                return None
    return color


def _boundary_walks(s: DelaneySymbol, coloring: list[int] | None):
    """Trace the mirror boundary; yields one cyclic list of chain v-values per boundary.

    A state (D, i, k) is the mirror side i of chamber D walked toward its
    k-vertex.  Around that vertex the i,j-chain (j the third color) is walked
    to its far end E, which is fixed by some i2 in {i, j}; the walk continues
    on side i2 of E toward its other endpoint.
    """
    slots = [(d, i) for d in s.nodes for i in range(3) if s.ops[i][d - 1] == d]
    used = set()
    for d0, i0 in slots:
        if (d0, i0) in used:
            continue
        if coloring is not None:
            k0 = (i0 + 2) % 3 if coloring[d0 - 1] == 0 else (i0 + 1) % 3
        else:
            k0 = (i0 + 1) % 3
        state = (d0, i0, k0)
        corners = []
        guard = 0
        while True:
            d, i, k = state
            used.add((d, i))
            j = 3 - i - k
            e, c = d, j
            while s.ops[c][e - 1] != e:
                e = s.ops[c][e - 1]
                c = i + j - c
            lo, hi = min(i, j), max(i, j)
            v = s.m(lo, hi, d) // r_value(s, lo, hi, d)
            corners.append(v)
            state = (e, c, 3 - c - k)
            guard += 1
            if state == (d0, i0, k0):
                break
            if guard > 6 * s.size + 6:
                raise OrbifoldError("boundary walk did not close")
        yield [v for v in corners if v >= 2]


def orbifold(s: DelaneySymbol) -> OrbifoldSignature:
    cones = []
    for i, j in COLOR_PAIRS:
        for comp in components(s, i, j):
            if comp.kind == "cycle" and comp.v >= 2:
                cones.append(comp.v)
    surface_coloring = two_coloring(s, ignore_loops=True)
    boundaries = [tuple(b) for b in _boundary_walks(s, surface_coloring)]
    # Euler characteristic of the underlying surface from the chamber complex
    n_vertices = sum(len(components(s, i, j)) for i, j in COLOR_PAIRS)
    n_edges = 0
    for op in s.ops:
        n_edges += sum(1 for d in s.nodes if op[d - 1] >= d)
    chi = n_vertices - n_edges + s.size
    b = len(boundaries)
    if surface_coloring is not None:
        twice_h = 2 - b - chi
        if twice_h < 0 or twice_h % 2:
            raise OrbifoldError(f"non-integral handle count from chi={chi}, b={b}")
        h, k = twice_h // 2, 0
    else:
        h, k = 0, 2 - b - chi
        if k < 1:
            raise OrbifoldError(f"invalid crosscap count {k} from chi={chi}, b={b}")
    sig = OrbifoldSignature(h, tuple(sorted(cones, reverse=True)), tuple(boundaries), k,
                            oriented=surface_coloring is not None)
    if sig.euler() != curvature(s) / 2:
        raise OrbifoldError(f"cost identity violated: {sig.euler()} != {curvature(s) / 2}")
    return sig


# --------------------------------------------------------------- naming

def _max_rotation(seq, allow_flip: bool):
    if not seq:
        return ()
    cands = [seq]
    if allow_flip:
        cands.append(seq[::-1])
    best = ()
    for c in cands:
        for k in range(len(c)):
            rot = tuple(c[k:] + c[:k])
            if rot > best:
                best = rot
    return best


def canonical_boundaries(o: OrbifoldSignature) -> tuple[tuple[int, ...], ...]:
    lists = [list(b) for b in o.boundaries]
    with_corners = sum(1 for b in lists if b)
    if o.crosscaps or not o.oriented or with_corners <= 1:
        canon = [_max_rotation(b, True) for b in lists]
        return tuple(sorted(canon, reverse=True))
    # orientable, several cornered boundaries: only a global flip is allowed
    options = []
    for flip in (False, True):
        canon = [_max_rotation(b[::-1] if flip else b, False) for b in lists]
        options.append(tuple(sorted(canon, reverse=True)))
    return max(options)


def _digit(v: int) -> str:
    return str(v) if v < 10 else f"({v})"


def orbifold_name(o: OrbifoldSignature) -> str:
    if o.is_bad():
        raise OrbifoldError(f"bad orbifold {o}")
    parts = ["o" * o.handles]
    parts += [_digit(c) for c in sorted(o.cones, reverse=True)]
    for b in canonical_boundaries(o):
        parts.append("*" + "".join(_digit(c) for c in b))
    parts.append("x" * o.crosscaps)
    name = "".join(parts)
    return name or "1"


def symmetry_class(o: OrbifoldSignature) -> str:
    """Classify by which orbifold features are present."""
    b = len(o.boundaries)
    cones = bool(o.cones)
    if o.handles:
        return "Torus"
    if o.crosscaps:
        if b:
            return "Möbius"
        return "Projective" if cones else "Klein"
    if b == 0:
        return "Stellate" if cones else "Sphere"
    if cones:
        return "Hat"
    if b >= 2 and sum(1 for x in o.boundaries if x) <= 1:
        return "Annular"
    return "Coxeter"


# --------------------------------------------------------------- counting

class ClassCounts(NamedTuple):
    tiles: int
    edges: int
    vertices: int


def class_counts(s: DelaneySymbol) -> ClassCounts:
    return ClassCounts(len(components(s, 0, 1)), len(components(s, 0, 2)),
                       len(components(s, 1, 2)))


def degree_lists(s: DelaneySymbol) -> tuple[list[int], list[int]]:
    tiles = sorted(c.m for c in components(s, 0, 1))
    verts = sorted(c.m for c in components(s, 1, 2))
    return tiles, verts


def _min_cyclic(seq: list[int]) -> tuple[int, ...]:
    best = None
    for c in (seq, seq[::-1]):
        for k in range(len(c)):
            rot = tuple(c[k:] + c[:k])
            if best is None or rot < best:
                best = rot
    return best


def tile_corner_degrees(s: DelaneySymbol, d: int) -> list[int]:
    """Vertex degrees at the corners of the tile through ``d``, in cyclic order."""
    m = s.m01[d - 1]
    out = []
    e = d
    for _ in range(m):
        out.append(s.m12[e - 1])
        e = s.s(0, s.s(1, e))
    return out


def signature_string(s: DelaneySymbol) -> str:
    parts = []
    for comp in components(s, 0, 1):
        corners = _min_cyclic(tile_corner_degrees(s, comp.nodes[0]))
        parts.append("(" + " ".join(map(str, corners)) + ")")
    return "".join(sorted(parts))


# --------------------------------------------------------------- minimality

def _v_values(s: DelaneySymbol):
    for i, j in COLOR_PAIRS:
        for comp in components(s, i, j):
            yield (i, j), comp


def is_geometry_minimal(s: DelaneySymbol, name: str | None = None) -> bool:
    k = curvature(s)
    if k == 0:
        return True
    if k > 0:
        if all(comp.v <= 4 for _, comp in _v_values(s)):
            return True
        if name is None:
            name = orbifold_name(orbifold(s))
        return name in ("532", "*532")
    for pair in ((0, 1), (1, 2)):
        for comp in components(s, *pair):
            if comp.v < 2 or (comp.v - 1) * comp.r < 3:
                continue
            c = 2 if comp.kind == "cycle" else 1
            reduced = k + Fraction(c, comp.v - 1) - Fraction(c, comp.v)
            if reduced < 0:
                return False
    return True


# --------------------------------------------------------------- flags

class Flags(NamedTuple):
    maximal: bool
    colorable: bool
    orientable: bool
    fixed_point_free: bool
    self_dual: bool


def is_maximal(s: DelaneySymbol) -> bool:
    return minimal_image(s).size == s.size


def is_colorable(s: DelaneySymbol) -> bool:
    tile = {}
    for comp in components(s, 0, 1):
        for d in comp.nodes:
            tile[d] = comp.nodes[0]
    return all(tile[d] != tile[s.s(2, d)] for d in s.nodes)


def is_orientable(s: DelaneySymbol) -> bool:
    return two_coloring(s, ignore_loops=False) is not None


def is_fixed_point_free(s: DelaneySymbol) -> bool:
    if any(op[d - 1] == d for op in s.ops for d in s.nodes):
        return False
    return all(comp.v == 1 for _, comp in _v_values(s))


def is_self_dual(s: DelaneySymbol) -> bool:
    return is_isomorphic(s, dual(s))


def flags(s: DelaneySymbol) -> Flags:
    return Flags(is_maximal(s), is_colorable(s), is_orientable(s),
                 is_fixed_point_free(s), is_self_dual(s))


def tile_nodes(s: DelaneySymbol, d: int) -> list[int]:
    return orbit(s, 0, 1, d)


def is_pseudo_convex(s: DelaneySymbol) -> bool:
    """Every two tiles meet in a connected set (decided on a developed corona)."""
    from .geometry.corona import is_pseudo_convex as check
    return check(s)
