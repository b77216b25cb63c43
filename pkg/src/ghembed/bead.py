"""Bead spaces: a chain of small blocks separated by large, fixed gaps.

Given radii ``r_1..r_N`` and blocks ``X_1..X_N`` with ``diam X_n <= r_n``,
the bead space strings the blocks together between three one-point
sentinels, indexed in the order

    0 < 1 < ... < N < omega < omega + 1

and encoded as the integers ``0..N+2``. Two points in blocks ``a < b`` are
``3 * sum(gap[a:b])`` apart, where

    gap[0]     = 2c             (c = r_1 + ... + r_N)
    gap[n]     = r_n + r_{n+1}  (1 <= n < N)
    gap[N]     = r_N            (r_{N+1} taken as 0)
    gap[omega] = 8c

so the diameter is always ``36c - 3 r_1``. The GH distance between two
bead spaces built from the same radii is the largest blockwise GH distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gh import Correspondence, distortion, union_of_blocks
from .metric import DEFAULT_TOL, FiniteMetricSpace, diameter, one_point, validate_metric

__all__ = [
    "GapSequence",
    "BeadSpace",
    "BlockTooLarge",
    "gap_sequence",
    "omega",
    "bead_gap",
    "build_bead",
    "block_union_distortion",
    "index_name",
]

# multiples of c at the two ends of the chain
HEAD_GAP = 2.0
TAIL_GAP = 8.0
BLOCK_TOL = 1e-9


class BlockTooLarge(ValueError):
    def __init__(self, n: int, diam: float, bound: float):
        self.n = n
        super().__init__(f"block {n} has diameter {diam:.12g} > r_{n} = {bound:.12g}")


@dataclass(frozen=True)
class GapSequence:
    """Radii ``r`` with total ``c`` and the gaps indexed ``0..N+1``."""

    r: tuple[float, ...]
    c: float
    rprime: tuple[float, ...]

    @property
    def N(self) -> int:
        return len(self.r)

    @property
    def omega(self) -> int:
        return self.N + 1

    @property
    def diameter(self) -> float:
        """``36c - 3 r_1``."""
        return 36 * self.c - 3 * self.r[0]


def gap_sequence(r: Sequence[float]) -> GapSequence:
    r = tuple(float(v) for v in r)
    if not r:
        raise ValueError("EmptySequence: need at least one radius")
    for n, v in enumerate(r, start=1):
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"NonpositiveTerm: r_{n} = {v} must be positive")
    c = math.fsum(r)
    tail = r[1:] + (0.0,)
    rprime = (HEAD_GAP * c,) + tuple(a + b for a, b in zip(r, tail)) + (TAIL_GAP * c,)
    return GapSequence(r, c, rprime)


def omega(N: int) -> int:
    return N + 1


def index_name(N: int, k: int) -> str:
    if k == N + 1:
        return "w"
    if k == N + 2:
        return "w+1"
    return str(k)


def bead_gap(G: GapSequence, alpha: int, beta: int) -> float:
    """Distance between any point of block ``alpha`` and any point of block ``beta``."""
    if not (0 <= alpha < beta <= G.N + 2):
        raise ValueError(f"BadOrder: need 0 <= alpha < beta <= {G.N + 2}, got ({alpha}, {beta})")
    return 3 * math.fsum(G.rprime[alpha:beta])


@dataclass(frozen=True, eq=False, repr=False)
class BeadSpace(FiniteMetricSpace):
    """A finite metric space assembled by :func:`build_bead`.

    ``blocks`` holds all ``N + 3`` blocks in index order (sentinels
    included) and ``block_of[i]`` is the block index of point ``i``.
    """

    gaps: GapSequence = None
    blocks: tuple[FiniteMetricSpace, ...] = ()
    block_of: tuple[int, ...] = ()

    def block_points(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.blocks]
        for i, k in enumerate(self.block_of):
            out[k].append(i)
        return out

    def sidecar(self) -> dict:
        return {"c": self.gaps.c, "diameter": diameter(self), "block_of": list(self.block_of)}


def build_bead(
    r: Sequence[float],
    blocks: Sequence[FiniteMetricSpace],
    tol: float = DEFAULT_TOL,
) -> BeadSpace:
    """Assemble the bead space for radii ``r`` and blocks ``X_1..X_N``."""
    G = gap_sequence(r)
    if len(blocks) != G.N:
        raise ValueError(f"arity mismatch: {len(blocks)} blocks for {G.N} radii")
    for n, (X, bound) in enumerate(zip(blocks, G.r), start=1):
        d = diameter(X)
        if d > bound + BLOCK_TOL:
            raise BlockTooLarge(n, d, bound)

    all_blocks = (one_point(),) + tuple(blocks) + (one_point(), one_point())
    block_of = tuple(k for k, B in enumerate(all_blocks) for _ in range(B.n))
    size = len(block_of)
    D = np.empty((size, size))
    starts = np.cumsum([0] + [B.n for B in all_blocks])
    for a, A in enumerate(all_blocks):
        sa = slice(starts[a], starts[a + 1])
        D[sa, sa] = A.dist
        for b in range(a + 1, len(all_blocks)):
            sb = slice(starts[b], starts[b + 1])
            D[sa, sb] = D[sb, sa] = bead_gap(G, a, b)
    labels = [
        f"{index_name(G.N, k)}:{lab}" for k, B in enumerate(all_blocks) for lab in B.labels
    ]
    base = validate_metric(D, labels, tol=tol)
    return BeadSpace(
        labels=base.labels,
        dist=base.dist,
        tol=tol,
        gaps=G,
        blocks=all_blocks,
        block_of=block_of,
    )


def block_union_distortion(
    r: Sequence[float],
    xblocks: Sequence[FiniteMetricSpace],
    yblocks: Sequence[FiniteMetricSpace],
    per_block: Sequence[Correspondence],
) -> tuple[Correspondence, float]:
    """Glue blockwise correspondences into one between the two bead spaces.

    Sentinels are matched to sentinels. Returns the glued correspondence and
    its exact distortion, which never exceeds the largest blockwise
    distortion: pairs from different blocks contribute nothing because the
    gap between two blocks depends only on their indices.
    """
    if len(per_block) != len(xblocks):
        raise ValueError("need one correspondence per block")
    BX = build_bead(r, xblocks)
    BY = build_bead(r, yblocks)
    for R, X, Y in zip(per_block, xblocks, yblocks):
        R.check(X.n, Y.n)
    point = Correspondence([(0, 0)])
    R = union_of_blocks(BX, BY, [point, *per_block, point, point])
    return R, distortion(BX, BY, R)
