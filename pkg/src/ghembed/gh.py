"""Correspondences, distortion and exact Gromov-Hausdorff distance.

Two independent routes compute the distance:

* :func:`gh_bruteforce` enumerates every relation ``R`` in ``X x Y``, keeps
  the correspondences, and minimises distortion. Only usable for
  ``|X| * |Y| <= 20``.
* :func:`gh_exact` runs a depth-first branch-and-bound over pairs of maps
  ``f: X -> Y`` and ``g: Y -> X``. Every correspondence contains
  ``graph(f) | graph(g)^-1`` for some such pair, and distortion can only
  shrink when a correspondence is restricted, so the two minima agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .metric import FiniteMetricSpace, SearchTooLarge, diameter

__all__ = [
    "Correspondence",
    "NotACorrespondence",
    "GHResult",
    "distortion",
    "gh_bruteforce",
    "gh_exact",
    "gh_bounds",
    "profile_lower_bounds",
    "BRUTEFORCE_MAX_PAIRS",
    "DEFAULT_BUDGET",
]

BRUTEFORCE_MAX_PAIRS = 20
DEFAULT_BUDGET = 10**8


class NotACorrespondence(ValueError):
    pass


@dataclass(frozen=True, init=False)
class Correspondence:
    """A relation between point indices of two spaces.

    ``pairs`` is kept sorted and duplicate-free, so two correspondences
    compare equal (and order lexicographically) by their pair sets.
    """

    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs: Iterable[Sequence[int]]):
        object.__setattr__(self, "pairs", tuple(sorted({(int(i), int(j)) for i, j in pairs})))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __lt__(self, other: "Correspondence") -> bool:
        return self.pairs < other.pairs

    def inverse(self) -> "Correspondence":
        return Correspondence((j, i) for i, j in self.pairs)

    def image(self, A: Iterable[int]) -> set[int]:
        A = set(A)
        return {j for i, j in self.pairs if i in A}

    def preimage(self, B: Iterable[int]) -> set[int]:
        B = set(B)
        return {i for i, j in self.pairs if j in B}

    def covers(self, nx: int, ny: int) -> bool:
        left = {i for i, _ in self.pairs}
        right = {j for _, j in self.pairs}
        return left == set(range(nx)) and right == set(range(ny))

    def check(self, nx: int, ny: int) -> None:
        """Raise :class:`NotACorrespondence` unless both sides are covered."""
        for i, j in self.pairs:
            if not (0 <= i < nx and 0 <= j < ny):
                raise NotACorrespondence(f"pair {(i, j)} out of range for sizes {nx}x{ny}")
        if not self.covers(nx, ny):
            raise NotACorrespondence(f"relation does not cover both sides ({nx}x{ny})")

    @classmethod
    def full(cls, nx: int, ny: int) -> "Correspondence":
        return cls((i, j) for i in range(nx) for j in range(ny))

    @classmethod
    def identity(cls, n: int) -> "Correspondence":
        return cls((i, i) for i in range(n))


def distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, R: Correspondence) -> float:
    """Largest ``|d_X(x, x') - d_Y(y, y')|`` over ``(x, y), (x', y')`` in ``R``."""
    R.check(X.n, Y.n)
    idx = np.array(R.pairs)
    dx = X.dist[np.ix_(idx[:, 0], idx[:, 0])]
    dy = Y.dist[np.ix_(idx[:, 1], idx[:, 1])]
    return float(np.abs(dx - dy).max())


@dataclass(frozen=True)
class GHResult:
    """Outcome of a GH computation.

    ``value`` is the distance (half the certificate's distortion).
    ``lower_bound`` is the root lower bound the search started from; it equals
    ``value`` when the bounds alone settled the problem. ``optimal`` is
    False when the node budget ran out, in which case ``value`` is merely the
    best upper bound found.
    """

    value: float
    certificate: Correspondence
    nodes_explored: int
    lower_bound: float
    method: str
    optimal: bool = True

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "optimal_pairs": [list(p) for p in self.certificate.pairs],
            "nodes": self.nodes_explored,
            "method": self.method,
            "optimal": self.optimal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)


def gh_bruteforce(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> GHResult:
    """Exact GH distance by enumerating all ``2**(|X||Y|)`` relations.

    Ties are broken towards the lexicographically smallest pair set.
    """
    n, m = X.n, Y.n
    k = n * m
    if k > BRUTEFORCE_MAX_PAIRS:
        raise SearchTooLarge(f"brute force over {k} pairs exceeds cap {BRUTEFORCE_MAX_PAIRS}")
    pairs = [(i, j) for i in range(n) for j in range(m)]
    masks = ((np.arange(1 << k, dtype=np.int64)[:, None] >> np.arange(k)) & 1).astype(bool)
    grid = masks.reshape(-1, n, m)
    valid = grid.any(axis=2).all(axis=1) & grid.any(axis=1).all(axis=1)
    masks = masks[valid]
    # cost[p, q] = |d_X(i_p, i_q) - d_Y(j_p, j_q)|
    cost = np.abs(X.dist[:, None, :, None] - Y.dist[None, :, None, :]).reshape(k, k)
    dis = np.zeros(len(masks))
    for p in range(k):
        for q in range(p + 1, k):
            if cost[p, q] > 0:
                both = masks[:, p] & masks[:, q]
                np.maximum(dis, np.where(both, cost[p, q], 0.0), out=dis)
    best = dis.min()
    winners = masks[dis == best]
    cert = min(
        Correspondence(pairs[q] for q in np.flatnonzero(row)) for row in winners
    )
    return GHResult(
        value=float(best) / 2,
        certificate=cert,
        nodes_explored=int(valid.sum()),
        lower_bound=float(best) / 2,
        method="oracle",
    )


def profile_lower_bounds(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> np.ndarray:
    """``L[x, y]``: a lower bound on ``dis(R)`` for any correspondence holding ``(x, y)``.

    Every ``x'`` is matched to some ``y'``, so ``dis(R)`` is at least
    ``min_y' |d(x, x') - d(y, y')|``, and likewise with the roles swapped.
    """
    diff = np.abs(X.dist[:, None, :, None] - Y.dist[None, :, None, :])  # [x, y, x', y']
    from_x = diff.min(axis=3).max(axis=2)
    from_y = diff.min(axis=2).max(axis=2)
    return np.maximum(from_x, from_y)


def _greedy(L: np.ndarray) -> Correspondence:
    # nearest profile for each x, preferring uncovered targets on ties
    n, m = L.shape
    covered = [False] * m
    pairs = []
    for x in range(n):
        y = min(range(m), key=lambda y: (L[x, y], covered[y], y))
        covered[y] = True
        pairs.append((x, y))
    g = L.argmin(axis=0)
    pairs += [(int(g[y]), y) for y in range(m) if not covered[y]]
    return Correspondence(pairs)


def _block_union(X, Y) -> Optional[Correspondence]:
    """Union of per-block optimal correspondences for two matching bead spaces."""
    from .bead import BeadSpace

    if not (isinstance(X, BeadSpace) and isinstance(Y, BeadSpace)):
        return None
    if len(X.blocks) != len(Y.blocks):
        return None
    per_block = [gh_exact(bx, by).certificate for bx, by in zip(X.blocks, Y.blocks)]
    return union_of_blocks(X, Y, per_block)


def union_of_blocks(X, Y, per_block: Sequence[Correspondence]) -> Correspondence:
    """Lift per-block correspondences to a correspondence between two bead spaces."""
    xs = X.block_points()
    ys = Y.block_points()
    pairs = []
    for R, px, py in zip(per_block, xs, ys):
        pairs += [(px[i], py[j]) for i, j in R]
    return Correspondence(pairs)


def _candidates(X, Y, L) -> list[Correspondence]:
    cands = [Correspondence.full(X.n, Y.n), _greedy(L)]
    bead = _block_union(X, Y)
    if bead is not None:
        cands.append(bead)
    return cands


def gh_bounds(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> tuple[float, float]:
    """Cheap bounds ``lower <= d_GH(X, Y) <= upper``.

    The lower bound is the diameter bound ``|diam X - diam Y| / 2``; the upper
    bound is half the distortion of the best heuristic correspondence tried
    (which includes the full relation, so it never exceeds
    ``max(diam X, diam Y) / 2``).
    """
    lower = abs(diameter(X) - diameter(Y)) / 2
    L = profile_lower_bounds(X, Y)
    upper = min(distortion(X, Y, R) for R in _candidates(X, Y, L)) / 2
    return lower, upper


def _eccentricity_order(D: np.ndarray, idx: Iterable[int]) -> list[int]:
    ecc = D.max(axis=1)
    return sorted(idx, key=lambda i: (-ecc[i], i))


def gh_exact(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    budget: int = DEFAULT_BUDGET,
    *,
    profile_pruning: bool = True,
) -> GHResult:
    """Exact Gromov-Hausdorff distance by branch-and-bound.

    Points of ``X`` are assigned images in decreasing-eccentricity order,
    then any point of ``Y`` left uncovered is assigned a preimage. The
    partial distortion never decreases along a branch, so a branch is cut as
    soon as it reaches the incumbent. Candidate pairs ``(x, y)`` whose
    profile lower bound already reaches the incumbent are skipped.

    When both inputs are bead spaces with the same number of blocks, the
    union of blockwise optimal correspondences seeds the incumbent.

    If more than ``budget`` nodes are expanded the search stops and the
    result carries ``optimal=False``, the best correspondence found so far
    and a valid lower bound.

    ``profile_pruning=False`` drops the profile bounds (root and per pair),
    leaving the plain search; only useful for testing the search itself.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    n, m = X.n, Y.n
    L = profile_lower_bounds(X, Y)
    if not profile_pruning:
        L = np.zeros_like(L)
    root_lb = max(
        abs(diameter(X) - diameter(Y)),
        float(L.min(axis=1).max()),
        float(L.min(axis=0).max()),
    )
    found = [(distortion(X, Y, R), R) for R in _candidates(X, Y, L)]
    best = min(d for d, _ in found)
    if best <= root_lb:
        return _finish(found, 0, root_lb, "bounds-only", True)

    DX = X.dist.tolist()
    DY = Y.dist.tolist()
    Ll = L.tolist()
    xorder = _eccentricity_order(X.dist, range(n))
    yrank = {y: r for r, y in enumerate(_eccentricity_order(Y.dist, range(m)))}
    ycands = {x: sorted(range(m), key=lambda y: (Ll[x][y], y)) for x in range(n)}
    xcands = {y: sorted(range(n), key=lambda x: (Ll[x][y], x)) for y in range(m)}

    inc = best
    nodes = 0
    exhausted = False
    pairs: list[tuple[int, int]] = []
    cover = [0] * m

    def extend(x: int, y: int, cur: float) -> float:
        # partial distortion after adding (x, y); returns >= inc to signal a cut
        dx, dy = DX[x], DY[y]
        for a, b in pairs:
            v = dx[a] - dy[b]
            if v < 0:
                v = -v
            if v > cur:
                cur = v
                if cur >= inc:
                    break
        return cur

    def g_phase(todo: list[int], pos: int, cur: float) -> None:
        nonlocal inc, nodes, exhausted
        if pos == len(todo):
            inc = cur
            found.append((cur, Correspondence(pairs)))
            return
        y = todo[pos]
        for x in xcands[y]:
            if Ll[x][y] >= inc:
                break
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            d = extend(x, y, cur)
            if d < inc:
                pairs.append((x, y))
                g_phase(todo, pos + 1, d)
                pairs.pop()
            if exhausted:
                return

    def f_phase(pos: int, cur: float) -> None:
        nonlocal nodes, exhausted
        if pos == n:
            todo = sorted((y for y in range(m) if not cover[y]), key=yrank.__getitem__)
            g_phase(todo, 0, cur)
            return
        x = xorder[pos]
        for y in ycands[x]:
            if Ll[x][y] >= inc:
                break
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            d = extend(x, y, cur)
            if d < inc:
                pairs.append((x, y))
                cover[y] += 1
                f_phase(pos + 1, d)
                cover[y] -= 1
                pairs.pop()
            if exhausted:
                return

    f_phase(0, 0.0)
    return _finish(found, nodes, root_lb, "branch-and-bound", not exhausted)


def _finish(found, nodes, root_lb, method, optimal) -> GHResult:
    best = min(d for d, _ in found)
    cert = min(R for d, R in found if d == best)
    return GHResult(
        value=best / 2,
        certificate=cert,
        nodes_explored=nodes,
        lower_bound=min(root_lb, best) / 2,
        method=method,
        optimal=optimal,
    )
