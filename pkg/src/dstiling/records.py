"""One database row of invariants per tiling."""
from __future__ import annotations

from dataclasses import asdict, astuple, dataclass, fields
from fractions import Fraction

from . import invariants as inv
from .dsym import DelaneySymbol, canonical_form, parse, serialize

GEOMETRY_NAMES = {inv.SPHERICAL: "Spherical", inv.EUCLIDEAN: "Euclidean",
                  inv.HYPERBOLIC: "Hyperbolic"}


@dataclass(frozen=True)
class TilingRecord:
    id: int
    symbol: str
    complexity: int
    geometry: str
    curvature: str
    euler: float
    orbifold: str
    symmetry_class: str
    signature: str
    tile_deg: str
    vertex_deg: str
    tiles: int
    edges: int
    vertices: int
    normal: bool
    maximal: bool
    colorable: bool
    orientable: bool
    fixed_point_free: bool
    self_dual: bool

    def as_tuple(self) -> tuple:
        return astuple(self)

    def as_dict(self) -> dict:
        return asdict(self)

    def with_id(self, new_id: int) -> "TilingRecord":
        d = asdict(self)
        d["id"] = new_id
        return TilingRecord(**d)


COLUMNS = [f.name for f in fields(TilingRecord)]
COLUMN_TYPES = {
    "id": "INTEGER PRIMARY KEY", "symbol": "TEXT", "complexity": "INTEGER",
    "geometry": "TEXT", "curvature": "TEXT", "euler": "REAL", "orbifold": "TEXT",
    "symmetry_class": "TEXT", "signature": "TEXT", "tile_deg": "TEXT",
    "vertex_deg": "TEXT", "tiles": "INTEGER", "edges": "INTEGER", "vertices": "INTEGER",
    "normal": "BOOLEAN", "maximal": "BOOLEAN", "colorable": "BOOLEAN",
    "orientable": "BOOLEAN", "fixed_point_free": "BOOLEAN", "self_dual": "BOOLEAN",
}
BOOL_COLUMNS = [c for c in COLUMNS if COLUMN_TYPES[c] == "BOOLEAN"]
INT_COLUMNS = [c for c in COLUMNS if COLUMN_TYPES[c].startswith("INTEGER")]


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def make_record(s: DelaneySymbol, record_id: int = 0, normal: bool | None = None) -> TilingRecord:
    """All invariants of ``s``; the stored symbol is its canonical form."""
    s = canonical_form(s)
    k = inv.curvature(s)
    orb = inv.orbifold(s)
    counts = inv.class_counts(s)
    tdeg, vdeg = inv.degree_lists(s)
    fl = inv.flags(s)
    if normal is None:
        normal = inv.is_pseudo_convex(s)
    return TilingRecord(
        id=record_id,
        symbol=serialize(s),
        complexity=s.size,
        geometry=GEOMETRY_NAMES[inv.geometry_of(s)],
        curvature=format_fraction(k),
        euler=float(inv.euler_characteristic(s)),
        orbifold=inv.orbifold_name(orb),
        symmetry_class=inv.symmetry_class(orb),
        signature=inv.signature_string(s),
        tile_deg=" ".join(map(str, tdeg)),
        vertex_deg=" ".join(map(str, vdeg)),
        tiles=counts.tiles,
        edges=counts.edges,
        vertices=counts.vertices,
        normal=bool(normal),
        maximal=fl.maximal,
        colorable=fl.colorable,
        orientable=fl.orientable,
        fixed_point_free=fl.fixed_point_free,
        self_dual=fl.self_dual,
    )


def record_symbol(rec: TilingRecord) -> DelaneySymbol:
    return parse(rec.symbol)


def number_records(records):
    """Assign ids 1, 2, ... in stream order."""
    for n, rec in enumerate(records, 1):
        yield rec.with_id(n)
