import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricmot.polycone import (
    Cone,
    Fan,
    dot,
    dual_cone,
    face_semigroup_cone,
    faces_of,
    fan_intersection,
    newton_polyhedron,
    normal_fan,
    relative_interior_membership,
    support_function,
)

SURFACE = [(5, 0), (0, 2), (0, 3), (6, 2)]

vec2 = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any)
vec3 = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(any)


def test_surface_cone_and_dual():
    sd = Cone.from_rays(SURFACE)
    assert sd.rays == ((0, 1), (1, 0))
    assert sd.lines == ()
    s = sd.dual()
    assert s.rays == ((0, 1), (1, 0))


def test_a1_dual():
    sd = Cone.from_rays([(1, 0), (1, 1), (1, 2)])
    assert sd.rays == ((1, 0), (1, 2))
    assert dual_cone(sd).rays == ((0, 1), (2, -1))


def test_skew_dual_and_facet_normals():
    c = Cone.from_rays([(2, 5), (3, 5)])
    assert sorted(c.dual().rays) == sorted([(5, -2), (-5, 3)])
    assert sorted(c.ineqs) == sorted([(5, -2), (-5, 3)])


def test_lineality_detection():
    c = Cone.from_rays([(1, 0), (-1, 0), (0, 1)])
    assert c.lines == ((1, 0),)
    assert c.rays == ((0, 1),)
    assert c.dim == 2
    assert Cone.from_rays([(1, 1), (-1, -1)]).dim == 1


@given(st.lists(vec2, min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_double_dual_2d(gens):
    c = Cone.from_rays(gens, d=2)
    assert c.dual().dual() == c
    for g in gens:
        assert c.contains(g)


@given(st.lists(vec3, min_size=1, max_size=5))
@settings(max_examples=60, deadline=None)
def test_double_dual_3d(gens):
    c = Cone.from_rays(gens, d=3)
    assert c.dual().dual() == c
    for g in gens:
        assert c.contains(g)
    for u in c.dual().rays:
        for g in gens:
            assert dot(u, g) >= 0


def test_faces_of_quadrant():
    fs = faces_of(Cone.orthant(2))
    assert [f.dim for f in fs] == [0, 1, 1, 2]
    assert fs[1].rays == ((0, 1),)


def test_faces_of_3d_cone():
    c = Cone.from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)])
    fs = faces_of(c)
    dims = [f.dim for f in fs]
    assert dims.count(0) == 1 and dims.count(3) == 1
    assert dims.count(1) == 4 and dims.count(2) == 4


def test_relative_interior():
    c = Cone.orthant(2)
    assert relative_interior_membership(c, (1, 1))
    assert not relative_interior_membership(c, (0, 1))
    ray = Cone.from_rays([(1, 2)])
    assert ray.in_relint((2, 4))
    assert not ray.in_relint((0, 0))


def test_face_semigroup_cone():
    sd = Cone.orthant(2)
    eta = Cone.from_rays([(1, 0)])
    f = face_semigroup_cone(sd, eta)
    assert f.lines == ((0, 1),)
    with pytest.raises(ValueError):
        face_semigroup_cone(sd, Cone.from_rays([(1, 1)]))


def test_intersect():
    a = Cone.from_rays([(1, 0), (1, 2)])
    b = Cone.from_rays([(1, 1), (0, 1)])
    assert a.intersect(b).rays == ((1, 1), (1, 2))


def test_newton_polyhedron_vertices():
    P = newton_polyhedron([(2, 0), (1, 1), (0, 2)], Cone.orthant(2))
    assert sorted(P.vertices) == [(0, 2), (2, 0)]
    assert P.ord((1, 1)) == 2
    assert sorted(P.face_at((1, 1))) == [(0, 2), (1, 1), (2, 0)]
    assert P.face_at((1, 2)) == ((2, 0),)


def test_normal_fan_and_support_function():
    sd = Cone.from_rays(SURFACE)
    P = newton_polyhedron(SURFACE, sd)
    F = normal_fan(P)
    assert F.rays == ((0, 1), (1, 0), (2, 5))
    h = support_function(P)
    for nu in [(1, 1), (2, 5), (3, 1), (1, 7)]:
        assert h(nu) == min(dot(nu, e) for e in SURFACE)
    c = F.locate((1, 1))
    assert c.rays == ((0, 1), (2, 5)) or c.rays == ((1, 0), (2, 5))


@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9), st.integers(1, 9))
@settings(max_examples=60, deadline=None)
def test_support_function_concave_superadditive(a, b, c, d):
    sd = Cone.from_rays(SURFACE)
    P = newton_polyhedron(SURFACE, sd)
    h = support_function(P)
    u, v = (a, b), (c, d)
    w = (a + c, b + d)
    assert h(w) >= h(u) + h(v)


def test_fan_intersection_refines():
    sd = Cone.orthant(2)
    f1 = Fan.from_maximal(sd, [Cone.from_rays([(1, 0), (1, 1)]), Cone.from_rays([(1, 1), (0, 1)])])
    f2 = Fan.from_maximal(sd, [Cone.from_rays([(1, 0), (1, 2)]), Cone.from_rays([(1, 2), (0, 1)])])
    g = fan_intersection([f1, f2])
    assert g.rays == ((0, 1), (1, 0), (1, 1), (1, 2))
    assert len(g.cones_of_dim(2)) == 3
    with pytest.raises(ValueError):
        g.locate((-1, 0))
