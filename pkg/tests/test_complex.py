from itertools import combinations
from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdxlift.complex import build_from_top_faces, complete_complex, face_key, parse_face_key
from hdxlift.errors import (
    DimensionError,
    FaceNotFoundError,
    LevelError,
    MultifaceError,
    PurityError,
    SelfLoopError,
)


@pytest.mark.parametrize("n,k", [(4, 1), (6, 2), (7, 3), (8, 2), (5, 4)])
def test_complete_counts(n, k):
    X = complete_complex(n, k)
    assert X.counts() == tuple(comb(n, level + 1) for level in range(k + 1))
    assert X.faces(-1) == ((),)


def test_degrees_and_profile():
    X = complete_complex(6, 2)
    assert X.degree((0, 1)) == 4
    assert X.degree((3,)) == 5
    assert X.degree(()) == 6
    assert X.regularity_profile().degrees == (5, 4)


def test_skeleton_is_complete_graph():
    g = complete_complex(6, 2).skeleton(1).graph()
    assert nx.is_isomorphic(nx.Graph(list(g.edges)), nx.complete_graph(6))
    assert sorted(g.edges) == sorted(combinations(range(6), 2))


def test_face_keys_roundtrip():
    assert face_key((0, 3, 7)) == "0-3-7"
    assert parse_face_key("0-3-7") == (0, 3, 7)
    assert parse_face_key("") == ()


@pytest.mark.parametrize(
    "tops,err",
    [
        ([[0, 1, 2], [2, 1, 0]], MultifaceError),
        ([[0, 0, 1]], SelfLoopError),
        ([[0, 1, 2], [3, 4]], PurityError),
        ([[0, 1, 2, 3]], DimensionError),
        ([], DimensionError),
    ],
)
def test_validation_errors(tops, err):
    with pytest.raises(err):
        build_from_top_faces(2, tops)


def test_isolated_vertex_is_not_pure():
    with pytest.raises(PurityError, match="vertex 3"):
        build_from_top_faces(2, [[0, 1, 2]], vertices=4)


def test_listed_subface_of_a_top_face_is_accepted():
    X = build_from_top_faces(2, [[0, 1, 2], [0, 1]])
    assert X.counts() == (3, 3, 1)


def test_complete_complex_dimension_error():
    with pytest.raises(DimensionError):
        complete_complex(3, 3)


def test_level_and_face_errors():
    X = complete_complex(6, 2)
    with pytest.raises(LevelError):
        X.faces(3)
    with pytest.raises(LevelError):
        X.skeleton(4)
    with pytest.raises(FaceNotFoundError):
        X.degree((0, 9))
    with pytest.raises(FaceNotFoundError):
        X.link((7,))


def test_full_validation_of_complete_complexes():
    for n, k in [(5, 2), (6, 3), (7, 1)]:
        complete_complex(n, k).validate()


def test_irregular_profile_reports_a_face():
    # two triangles sharing an edge: vertex degrees 2 and 1
    X = build_from_top_faces(2, [[0, 1, 2], [1, 2, 3]])
    p = X.regularity_profile()
    assert not p.regular
    level, face, first, seen = p.offending
    assert level == 0 and first != seen


def _relabel(view):
    """Link as a set of parent-vertex faces."""
    return {tuple(sorted(view.to_parent(f))) for level in range(view.complex.k + 1) for f in view.complex.faces(level)}


pure_complexes = st.builds(
    lambda n, k, drop: _drop_tops(complete_complex(n, k), drop),
    st.integers(4, 7),
    st.integers(1, 3),
    st.sets(st.integers(0, 30), max_size=6),
)


def _drop_tops(X, drop):
    keep = [t for i, t in enumerate(X.top_faces) if i not in drop] or [X.top_faces[0]]
    used = sorted({v for t in keep for v in t})
    index = {v: i for i, v in enumerate(used)}
    return build_from_top_faces(X.k, [[index[v] for v in t] for t in keep])


@settings(max_examples=40, deadline=None)
@given(pure_complexes, st.data())
def test_link_of_link(X, data):
    top = data.draw(st.sampled_from(X.top_faces))
    size = data.draw(st.integers(0, len(top) - 1))
    sigma = top[:size]
    rest = top[size:]
    tau_size = data.draw(st.integers(0, len(rest) - 1))
    tau = rest[:tau_size]
    inner = X.link(sigma)
    tau_local = tuple(sorted(inner.local_index()[v] for v in tau))
    nested = inner.complex.link(tau_local)
    nested_parent = {tuple(sorted(inner.to_parent(nested.to_parent(f)))) for f in _iter_faces(nested.complex)}
    direct = X.link(tuple(sorted(sigma + tau)))
    assert nested_parent == _relabel(direct)


def _iter_faces(cx):
    for level in range(cx.k + 1):
        yield from cx.faces(level)


def test_link_dimension():
    X = complete_complex(7, 3)
    assert X.link((0,)).complex.k == 2
    assert X.link((0, 1)).complex.k == 1
    assert X.link(()).complex.k == 3
