
import pytest
from hypothesis import strategies as st

from ghembed.experiments import gen_random_metric, make_rng
from ghembed.metric import validate_metric


def enumerate_gh(DX, DY):
    """Plain-Python GH distance over every relation; shares no code with the package."""
    n, m = len(DX), len(DY)
    pairs = [(i, j) for i in range(n) for j in range(m)]
    best = None
    for mask in range(1, 1 << len(pairs)):
        R = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        if {a for a, _ in R} != set(range(n)) or {b for _, b in R} != set(range(m)):
            continue
        d = max(abs(DX[a][c] - DY[b][e]) for a, b in R for c, e in R)
        if best is None or d < best:
            best = d
    return best / 2


@st.composite
def metrics(draw, min_points=1, max_points=4):
    n = draw(st.integers(min_points, max_points))
    seed = draw(st.integers(0, 2**32 - 1))
    diam = draw(st.floats(0.1, 3.0))
    return gen_random_metric(n, diam, make_rng(seed))


@pytest.fixture
def path3():
    return validate_metric([[0, 1, 2], [1, 0, 1], [2, 1, 0]], tol=0)


@pytest.fixture
def rng():
    return make_rng(12345)
