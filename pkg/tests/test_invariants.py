from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from dstiling import invariants as inv
from dstiling.dsym import dual, parse, relabel


def pq(p, q):
    return parse(f"<1:1,1,1:{p},{q}>")


@pytest.mark.parametrize("p,q,k", [
    (4, 4, Fraction(0)),
    (5, 3, Fraction(1, 30)),
    (4, 5, Fraction(-1, 20)),
    (3, 7, Fraction(-1, 42)),
    (3, 6, Fraction(0)),
])
def test_curvature_size_one(p, q, k):
    assert inv.curvature(pq(p, q)) == k


def test_curvature_s8(s8):
    assert inv.curvature(s8) == 0
    assert inv.geometry_of(s8) == inv.EUCLIDEAN


@pytest.mark.parametrize("p,q,geom", [
    (5, 3, inv.SPHERICAL), (3, 6, inv.EUCLIDEAN), (3, 7, inv.HYPERBOLIC), (4, 4, inv.EUCLIDEAN),
])
def test_geometry(p, q, geom):
    assert inv.geometry_of(pq(p, q)) == geom


@pytest.mark.parametrize("p,q,name", [
    (5, 3, "*532"), (3, 5, "*532"), (4, 4, "*442"), (3, 3, "*332"), (3, 4, "*432"),
    (3, 6, "*632"), (3, 7, "*732"), (4, 5, "*542"),
])
def test_orbifold_size_one(p, q, name):
    o = inv.orbifold(pq(p, q))
    assert inv.orbifold_name(o) == name
    assert o.handles == o.crosscaps == 0 and o.cones == ()


def test_orbifold_s8(s8):
    o = inv.orbifold(s8)
    assert o.cones == (3,)
    assert [list(b) for b in o.boundaries] == [[3]]
    assert (o.handles, o.crosscaps) == (0, 0)
    assert inv.orbifold_name(o) == "3*3"
    assert inv.symmetry_class(o) == "Hat"


def test_trivial_orbifold_name():
    assert inv.orbifold_name(inv.OrbifoldSignature()) == "1"
    assert inv.symmetry_class(inv.OrbifoldSignature()) == "Sphere"


@pytest.mark.parametrize("sig,cls", [
    (inv.OrbifoldSignature(boundaries=((2, 3, 5),)), "Coxeter"),
    (inv.OrbifoldSignature(cones=(6, 3, 2)), "Stellate"),
    (inv.OrbifoldSignature(cones=(3,), boundaries=((3,),)), "Hat"),
    (inv.OrbifoldSignature(cones=(2, 2), crosscaps=1), "Projective"),
    (inv.OrbifoldSignature(boundaries=((),), crosscaps=1), "Möbius"),
    (inv.OrbifoldSignature(handles=1), "Torus"),
    (inv.OrbifoldSignature(crosscaps=2), "Klein"),
    (inv.OrbifoldSignature(boundaries=((), ())), "Annular"),
])
def test_symmetry_class_table(sig, cls):
    assert inv.symmetry_class(sig) == cls


@pytest.mark.parametrize("sig", [
    inv.OrbifoldSignature(cones=(5,)),
    inv.OrbifoldSignature(cones=(2, 3)),
    inv.OrbifoldSignature(boundaries=((4,),)),
    inv.OrbifoldSignature(boundaries=((2, 5),)),
])
def test_bad_orbifolds_rejected(sig):
    assert sig.is_bad()
    with pytest.raises(inv.OrbifoldError):
        inv.orbifold_name(sig)


@pytest.mark.parametrize("text", FIXTURES)
def test_conway_cost_identity(text):
    s = parse(text)
    o = inv.orbifold(s)
    assert inv.curvature(s) == 2 * o.euler()
    assert inv.euler_characteristic(s) == o.euler()
    assert o.handles >= 0 and o.crosscaps >= 0 and o.handles * o.crosscaps == 0
    assert not o.is_bad()


@pytest.mark.parametrize("text,euler", [
    ("<1:1,1,1:5,3>", Fraction(1, 60)),
    ("<1:1,1,1:3,7>", Fraction(-1, 84)),
])
def test_euler_values(text, euler):
    assert inv.euler_characteristic(parse(text)) == euler


def test_class_counts(s8):
    assert tuple(inv.class_counts(s8)) == (3, 3, 2)
    assert tuple(inv.class_counts(pq(3, 6))) == (1, 1, 1)
    d = inv.class_counts(dual(s8))
    assert (d.tiles, d.vertices) == (2, 3)


def test_degree_lists(s8):
    assert inv.degree_lists(pq(3, 6)) == ([3], [6])
    assert inv.degree_lists(s8) == ([3, 3, 4], [4, 6])
    assert inv.degree_lists(dual(s8)) == ([4, 6], [3, 3, 4])


def test_signature_strings(s8):
    assert inv.signature_string(pq(4, 4)) == "(4 4 4 4)"
    assert inv.signature_string(pq(3, 6)) == "(6 6 6)"
    assert inv.signature_string(s8) == "(4 4 4)(4 4 6 6)(4 6 6)"


def test_cyclic_canonicalization():
    # rotations and reversals of a degree-4 tile's corner list
    for seq in ([3, 4, 6, 5], [6, 5, 3, 4], [5, 6, 4, 3], [4, 3, 5, 6]):
        assert inv._min_cyclic(seq) == (3, 4, 6, 5)


@pytest.mark.parametrize("p,q,expected", [
    (3, 7, True), (4, 6, False), (3, 5, True), (4, 4, True), (3, 8, False), (5, 5, False),
    (7, 3, True), (4, 5, True),
])
def test_geometry_minimal(p, q, expected):
    assert inv.is_geometry_minimal(pq(p, q)) is expected


def test_size_one_partition():
    found = {inv.SPHERICAL: set(), inv.EUCLIDEAN: set(), inv.HYPERBOLIC: set()}
    for p in range(3, 13):
        for q in range(3, 13):
            s = pq(p, q)
            if inv.curvature(s) > 0 and inv.orbifold(s).is_bad():
                continue
            if inv.is_geometry_minimal(s):
                found[inv.geometry_of(s)].add((p, q))
    assert found[inv.SPHERICAL] == {(3, 3), (3, 4), (4, 3), (3, 5), (5, 3)}
    assert found[inv.EUCLIDEAN] == {(4, 4), (3, 6), (6, 3)}
    assert found[inv.HYPERBOLIC] == {(4, 5), (5, 4), (3, 7), (7, 3)}


def test_flags_size_one():
    f = inv.flags(pq(4, 4))
    assert f == inv.Flags(maximal=True, colorable=False, orientable=False,
                          fixed_point_free=False, self_dual=True)
    assert not inv.flags(pq(3, 6)).self_dual


def test_flags_s8(s8):
    f = inv.flags(s8)
    assert f.colorable and f.maximal
    assert not f.orientable


def test_double_cover_not_maximal():
    assert not inv.is_maximal(parse("<2:2 1,2 1,2 1:4 4,4 4>"))


def test_rotation_group_is_orientable():
    s = parse("<2:2 1,2 1,2 1:3 3,6 6>")  # 632
    assert inv.is_orientable(s)
    assert inv.orbifold_name(inv.orbifold(s)) == "632"
    assert inv.symmetry_class(inv.orbifold(s)) == "Stellate"


@pytest.mark.parametrize("text", FIXTURES)
def test_fixed_point_free_has_no_cones_or_mirrors(text):
    s = parse(text)
    o = inv.orbifold(s)
    if inv.is_fixed_point_free(s):
        assert o.cones == () and o.boundaries == ()


@pytest.mark.parametrize("text", FIXTURES)
def test_dual_properties(text):
    s = parse(text)
    d = dual(s)
    assert inv.curvature(d) == inv.curvature(s)
    assert inv.geometry_of(d) == inv.geometry_of(s)
    a, b = inv.class_counts(s), inv.class_counts(d)
    assert (a.tiles, a.edges, a.vertices) == (b.vertices, b.edges, b.tiles)
    assert inv.orbifold_name(inv.orbifold(d)) == inv.orbifold_name(inv.orbifold(s))


def _invariant_values(s):
    o = inv.orbifold(s)
    return (inv.curvature(s), inv.geometry_of(s), inv.orbifold_name(o), inv.symmetry_class(o),
            inv.class_counts(s), inv.degree_lists(s), inv.signature_string(s),
            inv.is_geometry_minimal(s), inv.flags(s))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIXTURES), st.randoms(use_true_random=False))
def test_invariants_ignore_labels(text, rng):
    s = parse(text)
    perm = list(range(1, s.size + 1))
    rng.shuffle(perm)
    assert _invariant_values(relabel(s, perm)) == _invariant_values(s)


@pytest.mark.parametrize("text", ["<1:1,1,1:4,4>", "<1:1,1,1:3,6>"])
def test_pseudo_convex_simple(text):
    assert inv.is_pseudo_convex(parse(text))


def test_pseudo_convex_s8(s8):
    assert inv.is_pseudo_convex(s8)
