import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_regular, random_signs
from hdxlift.complex import SimplicialComplex, build_from_top_faces, complete_complex
from hdxlift.errors import DimensionError, DomainError, LevelError, PartialSigningError, StructureViolation
from hdxlift.graph import cycle_graph
from hdxlift.lifting import (
    Signing,
    base_vertex,
    check_link_structure,
    face_sign,
    graph_induced_lift,
    lifted_id,
    link_edge_signing,
    local_lift,
    projection,
    spectrum_union_check,
    vertex_sign,
)


def _nx(g):
    h = nx.Graph(list(g.edges))
    h.add_nodes_from(range(g.n))
    return h


def test_vertex_encoding():
    assert lifted_id(3, 1) == 6 and lifted_id(3, -1) == 7
    assert base_vertex(7) == 3 and vertex_sign(7) == -1 and vertex_sign(6) == 1
    assert face_sign((0, 3, 5)) == 1 and face_sign((1, 2)) == -1
    assert projection((7, 0, 4)) == (0, 2, 3)


def test_plus_lift_is_two_copies():
    g = random_regular(10, 3, 1)
    lift = graph_induced_lift(g, 1)
    assert nx.number_connected_components(_nx(lift)) == 2 * nx.number_connected_components(_nx(g))
    assert nx.is_isomorphic(_nx(lift), nx.disjoint_union(_nx(g), _nx(g)))


def test_minus_lift_is_bipartite_double_cover():
    g = random_regular(10, 3, 2)
    lift = graph_induced_lift(g, -1)
    cover = nx.tensor_product(_nx(g), nx.complete_graph(2))
    assert nx.is_isomorphic(_nx(lift), cover)
    assert nx.is_bipartite(_nx(lift))


@pytest.mark.parametrize("seed", range(5))
def test_lift_is_a_covering_map(seed):
    rng = np.random.default_rng(seed)
    g = random_regular(12, 4, seed)
    s = random_signs(len(g.edges), rng)
    lift = graph_induced_lift(g, s)
    assert lift.n == 2 * g.n and lift.degree == g.degree
    for x in range(lift.n):
        down = sorted(base_vertex(y) for y in lift.adj[x])
        assert down == sorted(g.adj[base_vertex(x)])
    for (u, v), sign in zip(g.edges, s):
        for j in (1, -1):
            assert (lifted_id(v, j * sign) in lift.adj[lifted_id(u, j)])


def test_lift_rejects_missing_signs():
    g = cycle_graph(5)
    with pytest.raises(PartialSigningError):
        graph_induced_lift(g, [1, 1, 0, 1, 1])
    with pytest.raises(PartialSigningError):
        graph_induced_lift(g, [1, 1])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(8, 3), (10, 4), (12, 5), (9, 4)]))
def test_spectrum_union(seed, nd):
    n, d = nd
    g = random_regular(n, d, seed)
    s = random_signs(len(g.edges), np.random.default_rng(seed))
    assert spectrum_union_check(g, s)


def test_signing_construction_and_errors():
    X = complete_complex(5, 2)
    f = Signing.from_mapping(X, {"0-1-2": -1, **{"-".join(map(str, t)): 1 for t in X.top_faces[1:]}})
    assert f[(2, 1, 0)] == -1 and f.complete
    assert Signing.from_mapping(X, f.as_mapping()) == f
    with pytest.raises(DomainError):
        Signing.from_mapping(X, {"0-1-9": 1})
    with pytest.raises(DomainError):
        Signing.from_mapping(X, {"0-1-2": 1})
    with pytest.raises(DomainError):
        Signing(X, [1, 2] + [1] * 8)
    with pytest.raises(DomainError):
        Signing(X, [1])


def test_random_signing_is_seeded():
    X = complete_complex(6, 2)
    a = Signing.random(X, np.random.default_rng(3))
    b = Signing.random(X, np.random.default_rng(3))
    assert a == b and a.complete


@pytest.mark.parametrize("n,k", [(5, 2), (6, 2), (6, 3), (7, 3), (6, 4)])
def test_local_lift_profile_and_counts(n, k, rng):
    X = complete_complex(n, k)
    f = Signing.random(X, rng)
    Xh = local_lift(X, f)
    Xh.validate()
    d = X.regularity_profile().degrees
    assert Xh.regularity_profile().degrees == tuple(2 * x for x in d[:-1]) + (d[-1],)
    counts = X.counts()
    assert Xh.counts() == tuple(2 ** (l + 1) * c for l, c in enumerate(counts[:-1])) + (2**k * counts[-1],)


def test_local_lift_top_faces_obey_sign_rule(rng):
    X = complete_complex(6, 2)
    f = Signing.random(X, rng)
    Xh = local_lift(X, f)
    for face in Xh.top_faces:
        assert face_sign(face) == f[projection(face)]


def test_local_lift_errors():
    X = complete_complex(5, 2)
    with pytest.raises(PartialSigningError):
        local_lift(X, Signing(X))
    with pytest.raises(DomainError):
        local_lift(X, Signing.constant(complete_complex(6, 2), 1))
    X0 = build_from_top_faces(0, [[0], [1]])
    with pytest.raises(DimensionError):
        local_lift(X0, Signing.constant(X0, 1))


@pytest.mark.parametrize("seed", range(6))
def test_k1_lift_equals_graph_lift(seed):
    rng = np.random.default_rng(seed)
    g = random_regular(10, 3, seed)
    X = build_from_top_faces(1, g.edges)
    f = Signing.random(X, rng)
    assert set(local_lift(X, f).graph().edges) == set(graph_induced_lift(g, f.values).edges)


def test_link_edge_signing_values(rng):
    X = complete_complex(6, 3)
    f = Signing.random(X, rng)
    sigma = (1, 4)
    view = X.link(sigma)
    fs = link_edge_signing(X, f, sigma)
    for e, v in zip(view.graph().edges, fs):
        assert v == f[sigma + view.to_parent(e)]


@pytest.mark.parametrize("n,k", [(6, 2), (6, 3)])
def test_link_structure_every_face(n, k, rng):
    X = complete_complex(n, k)
    f = Signing.random(X, rng)
    Xh = local_lift(X, f)
    for level in range(-1, k - 1):
        for sh in Xh.faces(level):
            assert check_link_structure(X, f, Xh, sh)
    with pytest.raises(LevelError):
        check_link_structure(X, f, Xh, Xh.faces(k - 1)[0])


def test_link_structure_detects_a_wrong_signing(rng):
    X = complete_complex(6, 2)
    f = Signing.random(X, rng)
    Xh = local_lift(X, f)
    g = f.copy()
    g.values[0] = -g.values[0]
    # the flipped top face 0-1-2 changes the links of its vertices' lifts
    with pytest.raises(StructureViolation) as info:
        check_link_structure(X, g, Xh, (0,))
    assert info.value.edge is not None


def test_lifted_complex_differs_from_flipped_signing(rng):
    X = complete_complex(5, 2)
    f = Signing.random(X, rng)
    g = f.copy()
    g.values[3] *= -1
    assert local_lift(X, f) != local_lift(X, g)
    assert isinstance(local_lift(X, f), SimplicialComplex)
