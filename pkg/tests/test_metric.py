import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghembed.metric import (
    MetricError,
    SearchTooLarge,
    diameter,
    find_isometry,
    is_isometric,
    loads_space,
    dumps_space,
    one_point,
    read_space,
    scale,
    two_point,
    validate_metric,
    write_space,
)

from conftest import metrics


def kinds(exc):
    return [v.kind for v in exc.value.violations]


def test_one_point():
    X = validate_metric([[0]])
    assert X.n == 1 and diameter(X) == 0
    assert diameter(one_point()) == 0


def test_two_point_matches_standard():
    X = validate_metric([[0, 2], [2, 0]])
    assert is_isometric(X, two_point(1.0))
    assert diameter(two_point()) == 2


def test_triangle_violation_reported():
    with pytest.raises(MetricError) as exc:
        validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    (v,) = exc.value.violations
    assert v.kind == "TriangleViolation"
    assert v.indices == (0, 2, 1)
    assert v.slack == 3


@pytest.mark.parametrize(
    "matrix, kind",
    [
        ([[0, 1]], "NotSquare"),
        ([[0, -1], [-1, 0]], "NegativeEntry"),
        ([[0, 1], [2, 0]], "AsymmetricEntry"),
        ([[1, 1], [1, 0]], "NonzeroDiagonal"),
        ([[0, 0], [0, 0]], "ZeroOffDiagonal"),
        ([[0, float("nan")], [1, 0]], "NonFiniteEntry"),
        ([], "NotSquare"),
    ],
)
def test_axiom_violations(matrix, kind):
    with pytest.raises(MetricError) as exc:
        validate_metric(matrix)
    assert kind in kinds(exc)


def test_tolerance_controls_triangle():
    m = [[0, 1, 2 + 1e-12], [1, 0, 1], [2 + 1e-12, 1, 0]]
    validate_metric(m)
    with pytest.raises(MetricError):
        validate_metric(m, tol=0)
    with pytest.raises(ValueError):
        validate_metric(m, tol=-1)


def test_label_count_checked():
    with pytest.raises(ValueError):
        validate_metric([[0, 1], [1, 0]], labels=["a"])


def test_immutable():
    X = two_point()
    with pytest.raises(ValueError):
        X.dist[0, 1] = 5


def test_scale():
    X = scale(two_point(), 1.5)
    np.testing.assert_array_equal(X.dist, [[0, 3], [3, 0]])
    assert diameter(scale(two_point(), 3)) == 6
    assert diameter(scale(two_point(), 0.25)) == 0.5
    Y = scale(two_point(), 1)
    np.testing.assert_array_equal(Y.dist, two_point().dist)
    for bad in (0, -1, float("nan")):
        with pytest.raises(ValueError):
            scale(two_point(), bad)


def test_isometry_examples(path3):
    perm = [2, 0, 1]
    shuffled = validate_metric(path3.dist[np.ix_(perm, perm)])
    bij = find_isometry(path3, shuffled)
    assert bij is not None
    for i in range(3):
        for j in range(3):
            assert path3.dist[i, j] == shuffled.dist[bij[i], bij[j]]
    assert not is_isometric(two_point(), scale(two_point(), 1.5))
    eq = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert is_isometric(validate_metric(eq), validate_metric(eq, labels="abc"))
    assert not is_isometric(path3, two_point())


def test_isometry_cap():
    n = 9
    d = np.ones((n, n)) - np.eye(n)
    X = validate_metric(d)
    with pytest.raises(SearchTooLarge):
        is_isometric(X, X)
    assert is_isometric(X, X, max_points=9)


@settings(max_examples=60, deadline=None)
@given(metrics(max_points=6), st.floats(0.01, 100))
def test_scale_properties(X, t):
    Y = scale(X, t)
    validate_metric(Y.dist)
    assert diameter(Y) == pytest.approx(t * diameter(X), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(metrics(max_points=5), metrics(max_points=5))
def test_isometry_reflexive_symmetric(X, Y):
    assert is_isometric(X, X)
    assert is_isometric(X, Y) == is_isometric(Y, X)
    if is_isometric(X, Y):
        assert abs(diameter(X) - diameter(Y)) <= 1e-9


def test_json_roundtrip(tmp_path, rng):
    from ghembed.experiments import gen_random_metric

    X = gen_random_metric(5, 1.3, rng)
    path = tmp_path / "x.json"
    write_space(X, path)
    Y = read_space(path)
    assert Y.labels == X.labels
    assert Y.dist.tobytes() == X.dist.tobytes()


@pytest.mark.parametrize(
    "text",
    [
        '{"labels": ["a", "b"], "matrix": [[0, NaN], [1, 0]]}',
        '{"labels": ["a", "b"], "matrix": [[0, Infinity], [1, 0]]}',
        '{"labels": ["a", "b"], "matrix": [[0], [1, 0]]}',
        '{"labels": ["a"], "matrix": [["0"]]}',
        '{"labels": ["a"]}',
    ],
)
def test_json_rejects(text):
    with pytest.raises(ValueError):
        loads_space(text)


def test_json_shape():
    doc = json.loads(dumps_space(two_point(0.5)))
    assert doc == {"labels": ["-", "+"], "matrix": [[0.0, 1.0], [1.0, 0.0]]}
