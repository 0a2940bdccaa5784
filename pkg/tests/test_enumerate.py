import pytest

from conftest import CENSUS
from dstiling import invariants as inv
from dstiling.dsym import DelaneySymbol, canonical_form, canonical_trace, serialize
from dstiling.enumerate import (
    GEOMETRY_CODES, MAX_V, assign_branching, census, enumerate_all, enumerate_graphs,
    enumerate_symbols, work_packages, graphs_in_package,
)
from oracles import brute_graphs, brute_symbols

GEOMS = (inv.SPHERICAL, inv.EUCLIDEAN, inv.HYPERBOLIC)


def test_size_one_exact():
    syms = list(enumerate_symbols(1))
    by_geom = {g: {(s.m01[0], s.m12[0]) for s in syms if inv.geometry_of(s) == g} for g in GEOMS}
    assert len(syms) == 12
    assert by_geom[inv.SPHERICAL] == {(3, 3), (3, 4), (4, 3), (3, 5), (5, 3)}
    assert by_geom[inv.EUCLIDEAN] == {(4, 4), (3, 6), (6, 3)}
    assert by_geom[inv.HYPERBOLIC] == {(4, 5), (5, 4), (3, 7), (7, 3)}


def test_census_rows_1_to_6():
    table = census(6)
    for size in range(1, 7):
        assert tuple(table[size][g] for g in GEOMS) == CENSUS[size]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_graphs_match_brute_force(n):
    ours = set()
    for ops in enumerate_graphs(n, sizes=[n]):
        s = DelaneySymbol(ops, [3] * n, [3] * n, validate=False)
        ours.add(canonical_trace(s).split(" | ")[0])
    assert ours == set(brute_graphs(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symbols_match_brute_force(n):
    ours = [canonical_trace(s) for s in enumerate_symbols(n, sizes=[n])]
    assert len(ours) == len(set(ours))
    assert set(ours) == brute_symbols(n)


def test_outputs_are_canonical_and_minimal():
    for s in enumerate_symbols(5):
        assert canonical_form(s) == s
        assert inv.is_geometry_minimal(s)
        assert max(c.v for pair in ((0, 1), (1, 2)) for c in inv.components(s, *pair)) <= MAX_V


@pytest.mark.parametrize("code", sorted(GEOMETRY_CODES))
def test_geometry_filter(code):
    geom = GEOMETRY_CODES[code]
    syms = list(enumerate_symbols(4, geometry=geom))
    assert all(inv.geometry_of(s) == geom for s in syms)
    assert len(syms) == sum(CENSUS[n][GEOMS.index(geom)] for n in range(1, 5))


def test_packages_partition_graphs():
    n = 6
    whole = sorted(enumerate_graphs(n, sizes=[n]))
    parts = []
    for prefix in work_packages(n, 4):
        parts.extend(graphs_in_package(n, prefix))
    assert sorted(parts) == whole
    assert len(parts) == len(set(parts))


def test_stream_order_is_deterministic():
    a = [serialize(s) for s in enumerate_all(6, with_records=False)]
    b = [serialize(s) for s in enumerate_all(6, with_records=False, jobs=2)]
    assert a == b
    sizes = [int(t[1:t.index(":")]) for t in a]
    assert sizes == sorted(sizes)


def test_records_follow_symbol_stream():
    syms = [serialize(s) for s in enumerate_all(3, with_records=False)]
    recs = list(enumerate_all(3))
    assert [r.symbol for r in recs] == syms


def test_branching_rejects_long_02_orbits():
    # sigma0 sigma2 of order 3 is not a valid graph; nothing is produced
    ops = ((2, 1, 3), (1, 3, 2), (3, 2, 1))
    assert list(assign_branching(ops)) == []


def test_bad_max_complexity():
    with pytest.raises(ValueError):
        list(enumerate_all(0))
