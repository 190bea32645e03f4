import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorstrings import catalog
from colorstrings.core import replay
from colorstrings.triangulation import (
    EmbeddingError,
    PlaneTriangulation,
    RotationError,
    ShellingError,
    boundary_path,
    build_from_derivation,
    compute_shelling_order,
    derivation_from_order,
    separating_triangles,
    validate,
)
from oracles import all_triangles

K3 = PlaneTriangulation({1: (2, 3), 2: (3, 1), 3: (1, 2)}, (1, 3, 2))
# K4 minus the edge 1-4: two triangles and a quadrilateral outer face
DIAMOND = PlaneTriangulation({1: (3, 2), 2: (4, 3, 1), 3: (1, 2, 4), 4: (3, 2)}, (1, 3, 4, 2))


@st.composite
def scripts(draw, max_steps=8):
    length = 3
    steps = []
    for _ in range(draw(st.integers(0, max_steps))):
        i = draw(st.integers(1, length - 1))
        j = draw(st.integers(i + 1, length))
        steps.append((i, j))
        length = length + i + 2 - j
    return steps


def test_triangle_is_near_triangulation():
    rep = validate(K3)
    assert rep.is_near_triangulation and rep.is_triangulation
    assert len(rep.faces) == 2
    assert set(rep.outer_face) == {1, 2, 3}


def test_octahedron_is_triangulation():
    rep = validate(catalog.load("octahedron"))
    assert rep.is_triangulation
    assert (rep.vertices, rep.edges, len(rep.faces)) == (6, 12, 8)


def test_icosahedron_is_triangulation():
    rep = validate(catalog.load("icosahedron"))
    assert rep.is_triangulation
    assert (rep.vertices, rep.edges, len(rep.faces)) == (12, 30, 20)


def test_diamond_has_quadrilateral_outer_face():
    rep = validate(DIAMOND)
    assert rep.is_near_triangulation
    assert not rep.all_faces_triangles
    assert sorted(len(f) for f in rep.faces) == [3, 3, 4]


def test_diamond_with_wrong_outer_face_fails():
    rep = validate(PlaneTriangulation(DIAMOND.rotation, (1, 2, 3)))
    assert not rep.is_near_triangulation
    assert not rep.inner_faces_triangles


def test_asymmetric_rotation_is_reported():
    G = PlaneTriangulation({1: (2, 3), 2: (3,), 3: (1, 2)}, (1, 2, 3))
    rep = validate(G)
    assert not rep.symmetric
    assert any("vertex 1" in p for p in rep.problems)


def test_unknown_neighbour_raises_naming_vertex():
    with pytest.raises(RotationError, match="vertex 2"):
        PlaneTriangulation({1: (2,), 2: (1, 7)}, (1, 2))


def test_loop_is_not_simple():
    rep = validate(PlaneTriangulation({1: (1, 2), 2: (1,)}, (1, 2)))
    assert not rep.simple


def test_path_is_not_biconnected():
    rep = validate(PlaneTriangulation({1: (2,), 2: (1, 3), 3: (2,)}, (1, 2, 3)))
    assert not rep.biconnected
    assert not rep.is_near_triangulation


def test_wrong_cyclic_order_breaks_euler():
    G = catalog.load("octahedron")
    rot = dict(G.rotation)
    a, b, c, d = rot[1]
    rot[1] = (a, c, b, d)
    rep = validate(PlaneTriangulation(rot, G.outer))
    assert not rep.euler


@pytest.mark.parametrize("name", catalog.NAMES)
def test_separating_triangles_match_brute_force(name):
    G = catalog.load(name)
    faces = {tuple(sorted(f)) for f in G.faces()}
    expected = [t for t in all_triangles(G.edges()) if t not in faces]
    assert separating_triangles(G) == expected


def test_separating_triangle_examples():
    assert separating_triangles(catalog.load("octahedron")) == []
    assert separating_triangles(catalog.load("icosahedron")) == []
    assert separating_triangles(catalog.load("bipyramid")) == [(1, 2, 3)]


def _outer_edges(G):
    o = G.outer
    return [(o[a], o[b]) for a, b in itertools.permutations(range(3), 2)]


def _check_lemma(G, order):
    n = G.n
    for i in range(3, n - 2):
        assert validate(G.induced(order.order[:i])).is_near_triangulation, ("prefix", i)
        assert validate(G.induced(order.order[i:])).is_near_triangulation, ("suffix", i)


@pytest.mark.parametrize("name", ["octahedron", "icosahedron"])
def test_shelling_order_for_every_outer_edge(name):
    G = catalog.load(name)
    for v1, v2 in _outer_edges(G):
        order = compute_shelling_order(G, v1, v2)
        assert sorted(order.order) == G.vertices
        assert order.order[:2] == (v1, v2)
        vn = next(v for v in G.outer if v not in (v1, v2))
        assert order.order[-1] == vn
        assert any(set(f) == {v1, v2, order.v3} for f in G.faces())
        _check_lemma(G, order)
        assert len(order.labels) == G.n - 3


def test_shelling_rejects_separating_triangle():
    with pytest.raises(ShellingError, match="separating triangle"):
        compute_shelling_order(catalog.load("bipyramid"))


def test_shelling_rejects_small_or_bad_input():
    with pytest.raises(ShellingError):
        compute_shelling_order(catalog.load("tetrahedron"))
    G = catalog.load("octahedron")
    inner = next(v for v in G.vertices if v not in G.outer)
    with pytest.raises(ShellingError, match="outer face"):
        compute_shelling_order(G, G.outer[0], inner)
    with pytest.raises(ShellingError, match="triangulation"):
        compute_shelling_order(DIAMOND)


def test_octahedron_derivation_has_three_labels():
    G = catalog.load("octahedron")
    order = compute_shelling_order(G)
    script = derivation_from_order(G, order)
    assert len(script.steps) == 3
    states = replay(script)
    assert states[-1].length == 3
    assert states[-1]


def test_single_vertex_on_whole_face_gives_label_1_3():
    G, order = build_from_derivation([(1, 3)])
    assert tuple(derivation_from_order(G, order).steps[0]) == (1, 3)


def test_derivation_rejects_non_consecutive_neighbours():
    G = catalog.load("octahedron")
    order = list(compute_shelling_order(G).order)
    # put the last outer vertex fourth: its neighbours wrap past v1 and v2
    bad = order[:3] + [order[-1]] + order[3:-1]
    with pytest.raises(EmbeddingError):
        derivation_from_order(G, bad)


def test_build_examples():
    G, order = build_from_derivation([])
    assert validate(G).is_near_triangulation and G.n == 3
    G, order = build_from_derivation([(1, 3)])
    assert G.n == 4 and G.outer == (1, 4, 2)
    assert validate(G).is_triangulation
    G, order = build_from_derivation([(2, 3), (1, 3)])
    assert G.n == 5 and validate(G).is_near_triangulation
    lengths = [len(boundary_path(G.induced(order.order[:i]), 1, 2)) for i in range(3, 6)]
    # (1, 3) on a 4-boundary keeps length 4 + 1 + 2 - 3 = 4
    assert lengths == [3, 4, 4]


def test_build_rejects_bad_label_naming_step():
    with pytest.raises(ValueError, match="step 2"):
        build_from_derivation([(1, 2), (3, 6)])


@settings(max_examples=150, deadline=None)
@given(scripts())
def test_build_then_derive_is_identity(steps):
    G, order = build_from_derivation(steps)
    assert validate(G).is_near_triangulation
    assert [tuple(x) for x in derivation_from_order(G, order).steps] == steps


@settings(max_examples=60, deadline=None)
@given(scripts())
def test_boundary_lengths_follow_replay(steps):
    G, order = build_from_derivation(steps)
    length = 3
    for t, (i, j) in enumerate(steps, start=1):
        length = length + i + 2 - j
        H = G.induced(order.order[: 3 + t])
        assert validate(H).is_near_triangulation
        assert len(boundary_path(H, 1, 2)) == length


def test_induced_rejects_removed_vertices_in_two_faces():
    G = catalog.load("octahedron")
    # drop two antipodal vertices: the remaining 4-cycle separates them
    v = G.vertices[0]
    far = next(u for u in G.vertices if u != v and u not in G.rotation[v])
    with pytest.raises(EmbeddingError):
        G.induced(set(G.vertices) - {v, far})
