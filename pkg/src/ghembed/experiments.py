"""Seeded random instances and end-to-end verification runs.

All randomness flows from a single integer seed through numpy's
``SeedSequence`` into PCG64 generators, one independent stream per trial,
so a report depends only on the configuration and never on scheduling.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .bead import build_bead
from .gh import DEFAULT_BUDGET, gh_bruteforce, gh_exact
from .metric import (
    FiniteMetricSpace,
    diameter,
    is_isometric,
    one_point,
    scale,
    validate_metric,
)

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "TheoremReport",
    "AxiomReport",
    "make_rng",
    "gen_random_metric",
    "random_pool",
    "check_theorem",
    "check_axioms",
]


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """PCG64 stream for ``seed``, optionally a child stream addressed by ``key``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def gen_random_metric(n: int, diam_bound: float, rng: np.random.Generator) -> FiniteMetricSpace:
    """Random ``n``-point metric with diameter exactly ``diam_bound``.

    Edge weights are drawn uniformly from ``(0, 1]``, closed under shortest
    paths to restore the triangle inequality, then rescaled.
    """
    if n < 1:
        raise ValueError("need at least one point")
    if not diam_bound > 0:
        raise ValueError("diameter bound must be positive")
    if n == 1:
        return one_point()
    w = np.triu(1.0 - rng.random((n, n)), 1)
    w = w + w.T
    d = shortest_path(w, method="FW", directed=False)
    d = np.minimum(d, d.T)
    top = d.max()
    widest = d == top
    d = np.minimum(d * (diam_bound / top), diam_bound)
    d[widest] = diam_bound
    return validate_metric(d)


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for :func:`check_theorem` and :func:`check_axioms`.

    Radii are ``r`` when given, else the geometric sequence
    ``r1 * rho**(n-1)`` for ``n = 1..N``.
    """

    seed: int = 0
    trials: int = 25
    N: int = 2
    max_block_points: int = 2
    r: Optional[tuple[float, ...]] = None
    rho: float = 0.5
    r1: float = 1.0
    tolerance: float = 1e-9
    node_budget: int = DEFAULT_BUDGET
    workers: int = 1

    def __post_init__(self):
        if self.r is not None:
            object.__setattr__(self, "r", tuple(float(v) for v in self.r))
            object.__setattr__(self, "N", len(self.r))
        if self.trials < 1 or self.N < 1 or self.max_block_points < 1:
            raise ValueError("trials, N and max_block_points must all be >= 1")
        if self.r is None and not (0 < self.rho < 1 and self.r1 > 0):
            raise ValueError("geometric radii need 0 < rho < 1 and r1 > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def radii(self) -> tuple[float, ...]:
        if self.r is not None:
            return self.r
        return tuple(self.r1 * self.rho**k for k in range(self.N))


@dataclass
class TrialRecord:
    trial: int
    sizes_x: list[int]
    sizes_y: list[int]
    lhs: float
    rhs: float
    deviation: float
    nodes: int
    complete: bool
    wall_time: float = field(default=0.0, compare=False)


@dataclass
class TheoremReport:
    config: ExperimentConfig
    records: list[TrialRecord]

    @property
    def max_deviation(self) -> float:
        done = [rec.deviation for rec in self.records if rec.complete]
        return max(done, default=0.0)

    @property
    def failures(self) -> list[int]:
        tol = self.config.tolerance
        return [rec.trial for rec in self.records if rec.complete and rec.deviation > tol]

    @property
    def incomplete(self) -> list[int]:
        return [rec.trial for rec in self.records if not rec.complete]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, timings: bool = False) -> dict:
        cfg = asdict(self.config)
        cfg.pop("workers")
        cfg["radii"] = list(self.config.radii())
        records = []
        for rec in self.records:
            d = asdict(rec)
            if not timings:
                d.pop("wall_time")
            records.append(d)
        return {
            "config": cfg,
            "trials": records,
            "summary": {
                "max_deviation": self.max_deviation,
                "failures": self.failures,
                "incomplete": self.incomplete,
            },
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True, allow_nan=False)


def _random_blocks(rng, radii, max_points):
    blocks = []
    for bound in radii:
        k = int(rng.integers(1, max_points + 1))
        diam = bound * (1.0 - rng.random())
        blocks.append(gen_random_metric(k, diam, rng))
    return blocks


def _run_trial(cfg: ExperimentConfig, trial: int) -> TrialRecord:
    start = time.perf_counter()
    rng = make_rng(cfg.seed, trial)
    radii = cfg.radii()
    xs = _random_blocks(rng, radii, cfg.max_block_points)
    ys = _random_blocks(rng, radii, cfg.max_block_points)
    blockwise = [gh_exact(a, b, cfg.node_budget) for a, b in zip(xs, ys)]
    rhs = max(res.value for res in blockwise)
    lhs_res = gh_exact(build_bead(radii, xs), build_bead(radii, ys), cfg.node_budget)
    complete = lhs_res.optimal and all(res.optimal for res in blockwise)
    return TrialRecord(
        trial=trial,
        sizes_x=[b.n for b in xs],
        sizes_y=[b.n for b in ys],
        lhs=lhs_res.value,
        rhs=rhs,
        deviation=abs(lhs_res.value - rhs),
        nodes=lhs_res.nodes_explored,
        complete=complete,
        wall_time=time.perf_counter() - start,
    )


def check_theorem(cfg: ExperimentConfig) -> TheoremReport:
    """Compare the GH distance of two random bead spaces against the largest
    blockwise GH distance, once per trial."""
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_trial, itertools.repeat(cfg), range(cfg.trials)))
    else:
        records = [_run_trial(cfg, t) for t in range(cfg.trials)]
    return TheoremReport(cfg, records)


def random_pool(seed: int, size: int, max_points: int = 4) -> list[FiniteMetricSpace]:
    rng = make_rng(seed)
    pool = []
    for _ in range(size):
        n = int(rng.integers(1, max_points + 1))
        pool.append(gen_random_metric(n, 0.5 + 1.5 * (1.0 - rng.random()), rng))
    return pool


@dataclass
class AxiomReport:
    """Largest violation seen for each property (0 means never violated)."""

    violations: dict[str, float]
    checks: dict[str, int]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violations["symmetry"] == 0 and all(
            v <= self.tolerance for v in self.violations.values()
        )

    def to_dict(self) -> dict:
        return {
            "violations": self.violations,
            "checks": self.checks,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def check_axioms(
    cfg: ExperimentConfig,
    pool_size: int = 12,
    max_points: int = 4,
    scales: tuple[float, ...] = (0.5, 2.0, 3.0),
) -> AxiomReport:
    """Run the GH property battery over a seeded pool of small spaces.

    Covered: symmetry (exact), triangle inequality over every 3-subset,
    the one-point rule ``d(X, 1) = diam X / 2``, both scaling identities,
    the diameter Lipschitz bound, agreement with the brute-force oracle,
    and ``d = 0`` exactly for isometric spaces.
    """
    pool = random_pool(cfg.seed, pool_size, max_points)
    budget = cfg.node_budget
    k = len(pool)
    gh = {}
    viol = {
        name: 0.0
        for name in (
            "symmetry",
            "triangle",
            "one_point",
            "scaling",
            "scaling_same_space",
            "lipschitz_diameter",
            "oracle",
            "isometry",
        )
    }
    checks = dict.fromkeys(viol, 0)

    def bump(name, v):
        checks[name] += 1
        if v > viol[name]:
            viol[name] = v

    for i, j in itertools.product(range(k), repeat=2):
        gh[i, j] = gh_exact(pool[i], pool[j], budget).value
    for i, j in itertools.combinations(range(k), 2):
        X, Y = pool[i], pool[j]
        bump("symmetry", abs(gh[i, j] - gh[j, i]))
        bump("lipschitz_diameter", max(0.0, abs(diameter(X) - diameter(Y)) - 2 * gh[i, j]))
        if X.n * Y.n <= 20:
            bump("oracle", abs(gh[i, j] - gh_bruteforce(X, Y).value))
        for t in scales:
            bump("scaling", abs(gh_exact(scale(X, t), scale(Y, t), budget).value - t * gh[i, j]))
        if gh[i, j] == 0:
            bump("isometry", 0.0 if is_isometric(X, Y) else 1.0)
    for a, b, c in itertools.combinations(range(k), 3):
        for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
            bump("triangle", max(0.0, gh[x, y] - gh[x, z] - gh[z, y]))
    point = one_point()
    for i, X in enumerate(pool):
        bump("one_point", abs(gh_exact(X, point, budget).value - diameter(X) / 2))
        bump("isometry", gh[i, i])
        perm = make_rng(cfg.seed, 1, i).permutation(X.n)
        shuffled = validate_metric(X.dist[np.ix_(perm, perm)])
        bump("isometry", gh_exact(X, shuffled, budget).value)
        for t, s in itertools.combinations(scales, 2):
            got = gh_exact(scale(X, t), scale(X, s), budget).value
            bump("scaling_same_space", abs(got - abs(t - s) * diameter(X) / 2))
    return AxiomReport(viol, checks, cfg.tolerance)
