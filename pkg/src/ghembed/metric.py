"""Validated finite metric spaces.

Points are identified by index; labels are display-only metadata.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "MAX_ISOMETRY_POINTS",
    "FiniteMetricSpace",
    "MetricError",
    "Violation",
    "SearchTooLarge",
    "validate_metric",
    "one_point",
    "two_point",
    "diameter",
    "scale",
    "find_isometry",
    "is_isometric",
    "space_to_dict",
    "space_from_dict",
    "dumps_space",
    "loads_space",
    "read_space",
    "write_space",
]

DEFAULT_TOL = 1e-9
MAX_ISOMETRY_POINTS = 8


@dataclass(frozen=True)
class Violation:
    """One failed metric axiom.

    ``kind`` is one of ``NotSquare``, ``NonFiniteEntry``, ``NegativeEntry``,
    ``AsymmetricEntry``, ``NonzeroDiagonal``, ``ZeroOffDiagonal`` or
    ``TriangleViolation``. For triangle violations ``indices`` is
    ``(i, k, j)``: the two endpoints followed by the intermediate point, and
    ``slack = dist[i][k] - dist[i][j] - dist[j][k]``.
    """

    kind: str
    indices: tuple[int, ...] = ()
    slack: float = 0.0

    def __str__(self) -> str:
        idx = ",".join(map(str, self.indices))
        if self.kind == "TriangleViolation":
            return f"{self.kind}({idx}, slack={self.slack:.12g})"
        return f"{self.kind}({idx})"


class MetricError(ValueError):
    """Raised when a matrix is not a valid finite metric.

    The full list of violations is kept on ``violations``.
    """

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f"; ... ({more} more)"
        super().__init__(f"invalid metric: {shown}")


class SearchTooLarge(ValueError):
    """Raised when an exhaustive search would exceed its size cap."""


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A finite metric space given by its distance matrix.

    Instances are immutable; ``dist`` is a read-only float64 array. Build
    them through :func:`validate_metric` rather than directly.
    """

    labels: tuple[str, ...]
    dist: np.ndarray
    tol: float = DEFAULT_TOL

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, diam={diameter(self):.12g})"


def _check(d: np.ndarray, tol: float) -> list[Violation]:
    out: list[Violation] = []
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        return [Violation("NotSquare")]
    n = d.shape[0]
    bad = ~np.isfinite(d)
    if bad.any():
        return [Violation("NonFiniteEntry", tuple(map(int, ij))) for ij in np.argwhere(bad)]
    for i, j in np.argwhere(d < 0):
        out.append(Violation("NegativeEntry", (int(i), int(j))))
    for i, j in np.argwhere(np.triu(np.abs(d - d.T) > tol, 1)):
        out.append(Violation("AsymmetricEntry", (int(i), int(j))))
    for i in np.flatnonzero(np.diag(d) != 0):
        out.append(Violation("NonzeroDiagonal", (int(i),)))
    off = ~np.eye(n, dtype=bool)
    for i, j in np.argwhere(np.triu((d <= 0) & off, 1)):
        out.append(Violation("ZeroOffDiagonal", (int(i), int(j))))
    if out:
        return out
    # slack[i, j, k] = d[i, k] - d[i, j] - d[j, k]
    slack = d[:, None, :] - d[:, :, None] - d[None, :, :]
    for i, j, k in np.argwhere(slack > tol):
        if i < k:
            out.append(Violation("TriangleViolation", (int(i), int(k), int(j)), float(slack[i, j, k])))
    return out


def validate_metric(
    matrix,
    labels: Optional[Sequence] = None,
    tol: float = DEFAULT_TOL,
) -> FiniteMetricSpace:
    """Check the metric axioms and wrap ``matrix`` as a :class:`FiniteMetricSpace`.

    ``tol`` is the slack allowed in the symmetry and triangle checks; use
    ``tol=0`` for hand-built exact inputs. Raises :class:`MetricError`
    listing every violated cell.
    """
    if tol < 0 or math.isnan(tol):
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    try:
        d = np.array(matrix, dtype=np.float64)
    except (TypeError, ValueError):
        raise MetricError([Violation("NotSquare")]) from None
    violations = _check(d, tol)
    if violations:
        raise MetricError(violations)
    n = d.shape[0]
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} points")
    # exact symmetry downstream; tolerated asymmetry is averaged out
    d = (d + d.T) / 2 if tol > 0 else d
    d.setflags(write=False)
    return FiniteMetricSpace(labels, d, tol)


def one_point(label: str = "p") -> FiniteMetricSpace:
    """The one-point space."""
    return validate_metric([[0.0]], [label], tol=0.0)


def two_point(s: float = 1.0) -> FiniteMetricSpace:
    """The space ``{-s, s}`` on the real line; its only distance is ``2s``."""
    if not s > 0:
        raise ValueError(f"two-point scale must be positive, got {s}")
    return validate_metric([[0.0, 2 * s], [2 * s, 0.0]], ["-", "+"], tol=0.0)


def diameter(X: FiniteMetricSpace) -> float:
    return float(X.dist.max())


def scale(X: FiniteMetricSpace, t: float) -> FiniteMetricSpace:
    """Multiply every distance of ``X`` by ``t > 0``."""
    if not t > 0 or not math.isfinite(t):
        raise ValueError(f"NonpositiveScale: scale factor must be positive, got {t}")
    return validate_metric(X.dist * t, X.labels, tol=X.tol * t)


def find_isometry(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    tol: float = DEFAULT_TOL,
    max_points: int = MAX_ISOMETRY_POINTS,
) -> Optional[tuple[int, ...]]:
    """Return a bijection ``perm`` with ``X.dist[i, j] ~ Y.dist[perm[i], perm[j]]``.

    Returns ``None`` when the spaces are not isometric (including when their
    sizes differ). Brute-force over permutations with partial pruning.
    """
    n = X.n
    if n != Y.n:
        return None
    if n > max_points:
        raise SearchTooLarge(f"isometry search on {n} points exceeds cap {max_points}")
    DX, DY = X.dist, Y.dist
    if abs(diameter(X) - diameter(Y)) > tol:
        return None
    # sorted distance profiles must agree for matched points
    px = np.sort(DX, axis=1)
    py = np.sort(DY, axis=1)
    ok = np.all(np.abs(px[:, None, :] - py[None, :, :]) <= tol, axis=2)

    perm: list[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or not ok[i, j]:
                continue
            if all(abs(DX[i, a] - DY[j, perm[a]]) <= tol for a in range(i)):
                used[j] = True
                perm.append(j)
                if extend(i + 1):
                    return True
                perm.pop()
                used[j] = False
        return False

    return tuple(perm) if extend(0) else None


def is_isometric(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    tol: float = DEFAULT_TOL,
    max_points: int = MAX_ISOMETRY_POINTS,
) -> bool:
    return find_isometry(X, Y, tol, max_points) is not None


# JSON document: {"labels": [...], "matrix": [[...], ...]}


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name!r} in JSON input")


def space_to_dict(X: FiniteMetricSpace) -> dict:
    return {"labels": list(X.labels), "matrix": X.dist.tolist()}


def space_from_dict(doc: dict, tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ValueError("metric document must be an object with a 'matrix' key")
    matrix = doc["matrix"]
    if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
        raise ValueError("'matrix' must be a fully materialized list of rows")
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise MetricError([Violation("NotSquare")])
    for row in matrix:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"matrix entries must be numbers, got {v!r}")
    return validate_metric(matrix, doc.get("labels"), tol=tol)


def dumps_space(X: FiniteMetricSpace, **kwargs) -> str:
    return json.dumps(space_to_dict(X), allow_nan=False, **kwargs)


def loads_space(text: str, tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    return space_from_dict(json.loads(text, parse_constant=_reject_constant), tol=tol)


def read_space(path, tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    return loads_space(Path(path).read_text(), tol=tol)


def write_space(X: FiniteMetricSpace, path) -> None:
    Path(path).write_text(dumps_space(X) + "\n")
