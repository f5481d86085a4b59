"""Numerical maximization of G_n/A_n over all completions of an instance.

The search never evaluates a closed-form bound; it only calls
:func:`~amgm_bounds.bounds.mean_ratio` on explicit completions.  The
closed form is looked up afterwards, purely for comparison.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .bounds import Completion, mean_ratio, tung_bound, xia_bound
from .instance import (
    FEASIBILITY_TOL,
    BoundsError,
    DegenerateError,
    KnownRatios,
    Mode,
    check,
)
from .sampling import project_free_block, random_completions

INIT_SPREAD = 3.0


@dataclass(frozen=True)
class OracleConfig:
    """Search budget.  ``parallelism=0`` uses one worker per CPU."""

    restarts: int = 16
    max_iterations: int = 10_000
    seed: int = 0
    step_tolerance: float = 1e-12
    parallelism: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.step_tolerance > 0:
            raise ValueError("step_tolerance must be > 0")
        if self.parallelism < 0:
            raise ValueError("parallelism must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class AscentResult:
    ratio: float
    log_free: np.ndarray
    trace: tuple[float, ...]
    iterations: int
    converged: bool


@dataclass(frozen=True)
class OracleResult:
    max_ratio: float
    argmax: Completion
    closed_form_bound: float
    iterations_used: int
    converged: bool
    restarts: tuple[AscentResult, ...] = field(default=(), repr=False)

    @property
    def gap(self) -> float:
        return self.closed_form_bound - self.max_ratio


class _Surface:
    """Coordinate moves that keep the free block on the constraint surface."""

    def __init__(self, instance: KnownRatios):
        self.instance = instance
        self.known = np.asarray(instance.ratios, dtype=float)
        self.k = instance.free
        if instance.mode is Mode.AM:
            self.total = math.fsum([instance.n, *(-r for r in instance.ratios)])
            self.log_total = math.log(self.total)

    def ratio(self, log_free: np.ndarray) -> float:
        return mean_ratio(np.concatenate([self.known, np.exp(log_free)]))

    def bounds(self, log_free: np.ndarray, j: int) -> tuple[float, float]:
        if self.instance.mode is Mode.AM:
            # a_j may not absorb the whole free total
            hi = self.log_total - log_free[j]
            return hi - 40.0, hi - 1e-12
        return -20.0, 20.0

    def move(self, log_free: np.ndarray, j: int, step: float) -> np.ndarray:
        """Shift log value ``j`` by ``step``; the rest of the block absorbs it uniformly."""
        out = log_free.copy()
        if self.instance.mode is Mode.AM:
            new_j = math.exp(log_free[j] + step)
            old_j = math.exp(log_free[j])
            out += math.log((self.total - new_j) / (self.total - old_j))
        else:
            out -= step / (self.k - 1)
        out[j] = log_free[j] + step
        return out


def ascend(instance: KnownRatios, log_free: np.ndarray, config: OracleConfig) -> AscentResult:
    """Projected coordinate ascent from one starting point.

    Each sweep line-searches every free coordinate in turn; a move is kept
    only if it raises the ratio, so ``trace`` is nondecreasing.
    """
    surface = _Surface(instance)
    x = np.asarray(log_free, dtype=float).copy()
    best = surface.ratio(x)
    trace = [best]
    if surface.k == 1:
        return AscentResult(best, x, tuple(trace), 0, True)

    for sweep in range(1, config.max_iterations + 1):
        start = best
        for j in range(surface.k):
            lo, hi = surface.bounds(x, j)
            res = minimize_scalar(
                lambda s: -surface.ratio(surface.move(x, j, s)),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-9},
            )
            if -res.fun > best:
                best = -res.fun
                x = surface.move(x, j, res.x)
        trace.append(best)
        if best - start <= config.step_tolerance * best:
            return AscentResult(best, x, tuple(trace), sweep, True)
    return AscentResult(best, x, tuple(trace), config.max_iterations, False)


def _starting_points(instance: KnownRatios, config: OracleConfig) -> list[np.ndarray]:
    k = instance.free
    # restart 0: every free value equal
    starts = [project_free_block(instance, np.zeros(k))]
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    for child in children[1:]:
        rng = np.random.default_rng(child)
        starts.append(project_free_block(instance, rng.uniform(-INIT_SPREAD, INIT_SPREAD, k)))
    return starts


def maximize_ratio(
    instance: KnownRatios,
    config: OracleConfig | None = None,
    tol: float = FEASIBILITY_TOL,
) -> OracleResult:
    """Largest G_n/A_n over completions of ``instance``, by multi-restart ascent.

    Deterministic for a given seed; the parallelism level does not change
    the result because every restart owns its seed and results are merged
    in restart order.
    """
    config = config or OracleConfig()
    verdict = check(instance, tol=tol)
    if instance.m == instance.n:
        raise DegenerateError("maximize_ratio needs m < n")
    if verdict.degenerate:
        raise DegenerateError("free numbers vanish; no positive completion exists")

    starts = _starting_points(instance, config)
    workers = config.parallelism or os.cpu_count() or 1
    if workers == 1:
        runs = [ascend(instance, s, config) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda s: ascend(instance, s, config), starts))

    best = max(range(len(runs)), key=lambda i: (runs[i].ratio, -i))
    winner = runs[best]
    argmax = Completion(np.concatenate([instance.ratios, np.exp(winner.log_free)]), instance)
    return OracleResult(
        max_ratio=winner.ratio,
        argmax=argmax,
        closed_form_bound=xia_bound(instance, tol).value,
        iterations_used=sum(r.iterations for r in runs),
        converged=winner.converged,
        restarts=tuple(runs),
    )


@dataclass(frozen=True)
class SoundnessReport:
    violations: int
    worst_ratio: float
    bound: float
    samples: int


def soundness_sweep(
    instance: KnownRatios,
    samples: int,
    seed: int = 0,
    margin: float = 1e-12,
    chunk: int = 1 << 20,
    tol: float = FEASIBILITY_TOL,
) -> SoundnessReport:
    """Count random completions whose ratio exceeds the closed form by more than ``margin``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    verdict = check(instance, tol=tol)
    if instance.m == instance.n or verdict.degenerate:
        raise DegenerateError("soundness_sweep needs free numbers")
    bound = xia_bound(instance, tol).value
    rng = np.random.default_rng(seed)
    rows = max(1, chunk // instance.n)
    violations, worst, done = 0, 0.0, 0
    while done < samples:
        size = min(rows, samples - done)
        ratios = mean_ratio(random_completions(instance, size, rng), axis=1)
        violations += int(np.count_nonzero(ratios > bound + margin))
        worst = max(worst, float(ratios.max()))
        done += size
    return SoundnessReport(violations, worst, bound, samples)


@dataclass(frozen=True)
class DominanceRecord:
    r2: float
    xia_bound: float
    tung_bound: float
    domain_ok: bool

    @property
    def margin(self) -> float:
        return self.tung_bound - self.xia_bound


def dominance_grid(
    n: int,
    mode: Mode | str,
    r1: float,
    r2_grid: Sequence[float],
    tol: float = FEASIBILITY_TOL,
) -> list[DominanceRecord]:
    """Sharp bound vs. Tung's bound at each ``r2``, with ``r1`` fixed.

    Points outside Tung's domain, or infeasible for the sharp bound, get
    ``domain_ok=False`` and NaN values instead of raising.
    """
    mode = Mode(mode)
    records = []
    for r2 in r2_grid:
        r2 = float(r2)
        try:
            tung = tung_bound(n, mode, r1, r2).value
            xia = xia_bound(KnownRatios(n, mode, (r1, r2)), tol).value
        except BoundsError:
            records.append(DominanceRecord(r2, math.nan, math.nan, False))
            continue
        records.append(DominanceRecord(r2, xia, tung, True))
    return records
