"""Closed-form upper bounds on G_n/A_n and the weighted family behind them.

Products and roots of the ratios are always formed from sums of logarithms,
so the formulas stay finite for very large ``n`` or extreme ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .instance import (
    FEASIBILITY_TOL,
    DegenerateError,
    DomainError,
    FeasibilityError,
    InvalidLambdaError,
    KnownRatios,
    Mode,
    Verdict,
    check,
)


class Formula(str, Enum):
    XIA1 = "xia1"
    XIA2 = "xia2"
    TUNG1 = "tung1"
    TUNG2 = "tung2"
    TUNG_GAP = "tung_gap"
    OBJECTIVE_F = "objective_f"
    OBJECTIVE_G = "objective_g"


@dataclass(frozen=True)
class BoundReport:
    """A bound value together with what produced it.

    For every formula except ``TUNG_GAP`` the value bounds G_n/A_n from
    above; ``TUNG_GAP`` bounds A_n - G_n from below.
    """

    value: float
    formula: Formula
    instance: KnownRatios | None = None
    lambdas_used: np.ndarray | None = field(default=None, compare=False)
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class Completion:
    """All ``n`` values of an instance, known block first."""

    values: np.ndarray
    source_instance: KnownRatios

    @property
    def free_block(self) -> np.ndarray:
        return self.values[self.source_instance.m:]

    @property
    def ratio(self) -> float:
        return mean_ratio(self.values)

    def is_consistent(self, rtol: float = 1e-9) -> bool:
        """True if the known block reproduces the instance's ratios."""
        a = np.asarray(self.values, dtype=float)
        inst = self.source_instance
        if a.shape != (inst.n,) or not np.all(a > 0):
            return False
        if inst.mode is Mode.AM:
            ref = np.mean(a)
        else:
            ref = math.exp(np.mean(np.log(a)))
        return bool(np.allclose(a[: inst.m] / ref, inst.ratios, rtol=rtol, atol=0))


def _sum_exp(logs: Sequence[float]) -> float:
    """``sum(exp(logs))`` without intermediate overflow."""
    top = max(logs)
    if math.isinf(top):
        return math.exp(top)
    return math.exp(top) * math.fsum(math.exp(x - top) for x in logs)


def _log_sum(values: Sequence[float]) -> float:
    s = math.fsum(values)
    if math.isfinite(s):
        return math.log(s)
    top = max(values)
    return math.log(top) + math.log(math.fsum(v / top for v in values))


def mean_ratio(values, axis: int = -1):
    """Return G_n/A_n of positive ``values``.

    Accepts a 1-D sequence (returns a float) or an array, in which case the
    ratio is taken along ``axis``.  Both means are computed after scaling by
    the largest value, so the result is scale-free and cannot overflow.
    """
    a = np.asarray(values, dtype=float)
    if a.size == 0 or a.shape[axis] == 0:
        raise DomainError("mean_ratio needs at least one value")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("mean_ratio needs positive finite values")
    top = np.max(a, axis=axis, keepdims=True)
    log_g = np.mean(np.log(a) - np.log(top), axis=axis)
    log_a = np.log(np.mean(a / top, axis=axis))
    out = np.exp(log_g - log_a)
    return float(out) if out.ndim == 0 else out


def _as_lambdas(instance: KnownRatios, lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (instance.m,):
        raise DomainError(f"expected {instance.m} weights, got shape {lam.shape}")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise DomainError("weights must be positive and finite")
    return lam


def _need_free(instance: KnownRatios, what: str) -> None:
    if instance.m == instance.n:
        raise DegenerateError(f"{what} needs m < n; with m = n no free numbers remain")


def _free_total(instance: KnownRatios) -> float:
    # n - sum(r) as one correctly rounded sum
    return math.fsum([instance.n, *(-r for r in instance.ratios)])


def xia_bound_am(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> BoundReport:
    """Sharp bound on G_n/A_n when ``a_k = A_n r_k`` for ``k <= m``.

    ``((n - S)/(n - m))**(1 - m/n) * (prod r)**(1/n)`` with ``S = sum r``;
    for ``m = n`` only the product factor remains.
    """
    verdict = check(instance, Mode.AM, tol)
    n, m = instance.n, instance.m
    log_prod = instance.log_ratio_sum()
    if m == n:
        value = math.exp(log_prod / n)
    else:
        rest = _free_total(instance)
        if rest <= 0:
            value = 0.0
        else:
            # log((n - S)/(n - m)) = log1p((m - S)/(n - m)), exact near S = m
            excess = math.fsum([m, *(-r for r in instance.ratios)])
            log_mean_free = math.log1p(excess / (n - m))
            value = math.exp((n - m) / n * log_mean_free + log_prod / n)
    lambdas = None
    if m < n and not verdict.degenerate:
        lambdas = optimal_lambdas_am(instance, tol)
    return BoundReport(value, Formula.XIA1, instance, lambdas, verdict.degenerate)


def xia_bound_gm(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> BoundReport:
    """Sharp bound on G_n/A_n when ``a_k = G_n r_k`` for ``k <= m``.

    ``1 / ((1 - m/n) * (prod r)**(-1/(n-m)) + S/n)``; ``n / S`` for ``m = n``.
    """
    check(instance, Mode.GM, tol)
    n, m = instance.n, instance.m
    if m == n:
        return BoundReport(n / instance.ratio_sum(), Formula.XIA2, instance)
    log_free = -instance.log_ratio_sum() / (n - m)
    log_sum = _log_sum(instance.ratios)
    if max(log_free, log_sum) < 700:
        # (n - m) * t + S is exactly n when every ratio is 1
        value = n / ((n - m) * math.exp(log_free) + instance.ratio_sum())
    else:
        log_first = math.log((n - m) / n) + log_free
        value = math.exp(-np.logaddexp(log_first, log_sum - math.log(n)))
    return BoundReport(value, Formula.XIA2, instance, optimal_lambdas_gm(instance, tol))


def objective_f(instance: KnownRatios, lambdas, tol: float = FEASIBILITY_TOL) -> float:
    """Weighted-family bound for AM mode.

    ``f = sum(lam**(n-m) * r)/n + (n - S)/(n * prod(lam))``.  Every positive
    ``lambdas`` gives an upper bound on G_n/A_n; the minimum over the family
    is :func:`xia_bound_am`.
    """
    check(instance, Mode.AM, tol)
    _need_free(instance, "objective_f")
    lam = _as_lambdas(instance, lambdas)
    n, m = instance.n, instance.m
    rest = _free_total(instance)
    log_lam = np.log(lam)
    logs = [(n - m) * ll + math.log(r) for ll, r in zip(log_lam, instance.ratios)]
    if rest > 0:
        logs.append(math.log(rest) - math.fsum(log_lam))
    return _sum_exp(logs) / n


def objective_g(instance: KnownRatios, lambdas, tol: float = FEASIBILITY_TOL) -> float:
    """Weighted-family bound for GM mode.

    ``g = 1 / (prod(lam) * (1 - sum(r * lam**(n-m))/n) + S/n)``.  Raises
    :class:`InvalidLambdaError` when the denominator is not positive.
    """
    check(instance, Mode.GM, tol)
    _need_free(instance, "objective_g")
    lam = _as_lambdas(instance, lambdas)
    n, m = instance.n, instance.m
    log_lam = np.log(lam)
    weighted = _sum_exp([(n - m) * ll + math.log(r) for ll, r in zip(log_lam, instance.ratios)]) / n
    inner = 1.0 - weighted
    if inner == 0:
        denom = instance.ratio_sum() / n
    else:
        denom = math.exp(math.fsum(log_lam)) * inner + instance.ratio_sum() / n
    if not (math.isfinite(denom) and denom > 0):
        raise InvalidLambdaError("λ outside the valid bound region (denominator of g is not positive)")
    return 1.0 / denom


def optimal_lambdas_am(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> np.ndarray:
    """Minimizer of :func:`objective_f`."""
    verdict = check(instance, Mode.AM, tol)
    _need_free(instance, "optimal_lambdas_am")
    if verdict.degenerate:
        raise DegenerateError("free numbers vanish; objective_f has no minimizer")
    n, m = instance.n, instance.m
    k = n - m
    excess = math.fsum([m, *(-r for r in instance.ratios)])
    common = (math.log1p(excess / k) + instance.log_ratio_sum() / k) / n
    return np.exp(common - np.log(instance.ratios) / k)


def optimal_lambdas_gm(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> np.ndarray:
    """Maximizer of :func:`objective_g`'s denominator: ``r_i**(-1/(n-m))``."""
    check(instance, Mode.GM, tol)
    _need_free(instance, "optimal_lambdas_gm")
    return np.exp(-np.log(instance.ratios) / instance.free)


def _tung_domain(n: int, r1: float, r2: float, am: bool) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FeasibilityError(Verdict(False, "n must be a positive integer"))
    if not (r2 > 0):
        raise FeasibilityError(Verdict(False, "violates 0 < r2"))
    if not (r2 <= 1):
        raise FeasibilityError(Verdict(False, "violates r2 ≤ 1"))
    if not (r1 >= 1):
        raise FeasibilityError(Verdict(False, "violates 1 ≤ r1"))
    if am and not (r1 <= n - r2):
        raise FeasibilityError(Verdict(False, "violates r1 ≤ n - r2"))


def tung_bound_am(n: int, r1: float, r2: float) -> BoundReport:
    """``1 - (sqrt(r1) - sqrt(r2))**2 / n`` with largest ``A_n r1``, smallest ``A_n r2``."""
    _tung_domain(n, r1, r2, am=True)
    value = 1.0 - (math.sqrt(r1) - math.sqrt(r2)) ** 2 / n
    return BoundReport(value, Formula.TUNG1, KnownRatios(n, Mode.AM, (r1, r2)))


def tung_bound_gm(n: int, r1: float, r2: float) -> BoundReport:
    """``1 / (1 + (sqrt(r1) - sqrt(r2))**2 / n)`` with largest ``G_n r1``, smallest ``G_n r2``."""
    _tung_domain(n, r1, r2, am=False)
    value = 1.0 / (1.0 + (math.sqrt(r1) - math.sqrt(r2)) ** 2 / n)
    return BoundReport(value, Formula.TUNG2, KnownRatios(n, Mode.GM, (r1, r2)))


def tung_gap(n: int, largest: float, smallest: float) -> BoundReport:
    """Lower bound ``(sqrt(largest) - sqrt(smallest))**2 / n`` on A_n - G_n."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError("n must be a positive integer")
    if not (0 < smallest <= largest and math.isfinite(largest)):
        raise DomainError("need 0 < smallest ≤ largest")
    value = (math.sqrt(largest) - math.sqrt(smallest)) ** 2 / n
    return BoundReport(value, Formula.TUNG_GAP)


def extremal_completion_am(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> Completion:
    """Completion with all free values equal, normalized to ``A_n = 1``.

    Its mean ratio equals :func:`xia_bound_am`.
    """
    verdict = check(instance, Mode.AM, tol)
    _need_free(instance, "extremal_completion_am")
    if verdict.degenerate:
        raise DegenerateError("free numbers vanish; no positive completion exists")
    t = _free_total(instance) / instance.free
    values = np.concatenate([instance.ratios, np.full(instance.free, t)])
    return Completion(values, instance)


def extremal_completion_gm(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> Completion:
    """Completion with all free values equal, normalized to ``G_n = 1``.

    Its mean ratio equals :func:`xia_bound_gm`.
    """
    check(instance, Mode.GM, tol)
    _need_free(instance, "extremal_completion_gm")
    t = math.exp(-instance.log_ratio_sum() / instance.free)
    values = np.concatenate([instance.ratios, np.full(instance.free, t)])
    return Completion(values, instance)


def xia_bound(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> BoundReport:
    """Dispatch to the sharp bound matching ``instance.mode``."""
    if instance.mode is Mode.AM:
        return xia_bound_am(instance, tol)
    return xia_bound_gm(instance, tol)


def extremal_completion(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> Completion:
    if instance.mode is Mode.AM:
        return extremal_completion_am(instance, tol)
    return extremal_completion_gm(instance, tol)


def tung_bound(n: int, mode: Mode | str, r1: float, r2: float) -> BoundReport:
    if Mode(mode) is Mode.AM:
        return tung_bound_am(n, r1, r2)
    return tung_bound_gm(n, r1, r2)
