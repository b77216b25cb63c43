"""Isometric embedding of the box ``prod [0, r_n]`` (sup distance) into bead spaces.

Coordinate ``x_n`` becomes the two-point block ``x_n * {-1, 1}`` (or a
single point when ``x_n = 0``). Since ``d_GH(s*2, t*2) = |s - t|`` the map is
an isometry coordinatewise. Those blocks have diameter ``2 x_n``, so the bead
is built over the doubled radii ``2 r_n``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bead import BeadSpace, build_bead
from .metric import one_point, two_point

__all__ = ["BoxPoint", "box_linf_distance", "embed_box_point"]


@dataclass(frozen=True)
class BoxPoint:
    """A point ``x`` of the box ``0 <= x_n <= r_n``."""

    x: tuple[float, ...]
    r: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "r", tuple(float(v) for v in self.r))
        if len(self.x) != len(self.r):
            raise ValueError(f"DimensionMismatch: {len(self.x)} coordinates for {len(self.r)} bounds")
        if not self.r:
            raise ValueError("box must have at least one coordinate")
        for n, (v, b) in enumerate(zip(self.x, self.r), start=1):
            if not b > 0:
                raise ValueError(f"bound r_{n} = {b} must be positive")
            if not 0 <= v <= b:
                raise ValueError(f"coordinate x_{n} = {v} outside [0, {b}]")


def box_linf_distance(x: BoxPoint, y: BoxPoint) -> float:
    if len(x.x) != len(y.x):
        raise ValueError(f"DimensionMismatch: {len(x.x)} vs {len(y.x)} coordinates")
    if x.r != y.r:
        raise ValueError("points live in different boxes")
    return max(abs(a - b) for a, b in zip(x.x, y.x))


def embed_box_point(x: BoxPoint) -> BeadSpace:
    blocks = [two_point(v) if v > 0 else one_point() for v in x.x]
    return build_bead([2 * b for b in x.r], blocks)

