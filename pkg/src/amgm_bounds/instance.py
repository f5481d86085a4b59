"""Problem instances: n numbers, m of them known relative to a mean.

A :class:`KnownRatios` instance says that ``a_k = M * r_k`` for the first
``m`` of ``n`` positive numbers, where ``M`` is either their arithmetic
mean (``Mode.AM``) or their geometric mean (``Mode.GM``).  Not every list
of ratios can be realized; :func:`validate` decides which can.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

#: Relative tolerance used when a feasibility constraint holds with equality.
FEASIBILITY_TOL = 1e-9


class BoundsError(ValueError):
    """Base class for errors raised by this package."""


class FeasibilityError(BoundsError):
    """The instance cannot be realized by positive numbers."""

    def __init__(self, verdict: "Verdict"):
        super().__init__(verdict.message)
        self.verdict = verdict


class ModeError(BoundsError):
    """An operation was called with an instance of the wrong mode."""


class DomainError(BoundsError):
    """An argument lies outside the domain of a formula."""


class DegenerateError(BoundsError):
    """The requested construction is vacuous (no free numbers remain)."""


class InvalidLambdaError(DomainError):
    """The weight vector lies outside the region where g is an upper bound."""


class Mode(str, Enum):
    """Which mean the known ratios are measured against."""

    AM = "am"
    GM = "gm"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    message: str = ""
    degenerate: bool = False

    def __bool__(self) -> bool:
        return self.ok


OK = Verdict(True)


@dataclass(frozen=True)
class KnownRatios:
    """``n`` positive numbers of which the first ``len(ratios)`` are known.

    Construction does not check feasibility; call :func:`validate`.
    """

    n: int
    mode: Mode
    ratios: tuple[float, ...]

    def __init__(self, n: int, mode: Mode | str, ratios: Sequence[float]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mode", Mode(mode))
        object.__setattr__(self, "ratios", tuple(float(r) for r in ratios))

    @property
    def m(self) -> int:
        return len(self.ratios)

    @property
    def free(self) -> int:
        """Number of unknown values, ``n - m``."""
        return self.n - self.m

    def ratio_sum(self) -> float:
        return math.fsum(self.ratios)

    def log_ratio_sum(self) -> float:
        """``log(prod r_k)`` without forming the product."""
        return math.fsum(math.log(r) for r in self.ratios)


def validate(instance: KnownRatios, tol: float = FEASIBILITY_TOL) -> Verdict:
    """Check that positive numbers with the stated ratios exist.

    Returns a falsy :class:`Verdict` naming the first violated condition.
    With ``m < n`` in AM mode, a ratio sum equal to ``n`` (within ``tol``
    relative) is accepted but flagged ``degenerate``: the free numbers are
    then forced to zero.
    """
    n, m = instance.n, instance.m
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        return Verdict(False, "n must be a positive integer")
    if m == 0:
        return Verdict(False, "at least one known ratio is required")
    if m > n:
        return Verdict(False, "more known ratios than numbers (m > n)")
    for k, r in enumerate(instance.ratios, start=1):
        if not (math.isfinite(r) and r > 0):
            return Verdict(False, f"ratio r_{k} = {r!r} is not a positive finite number")

    if instance.mode is Mode.AM:
        s = instance.ratio_sum()
        if m < n:
            if s < n * (1 - tol):
                return OK
            if abs(s - n) <= tol * n:
                return Verdict(True, "sum of ratios = n: free numbers vanish", degenerate=True)
            return Verdict(False, "sum of ratios ≥ n")
        if abs(s - n) > tol * n:
            return Verdict(False, "sum of ratios ≠ n with m = n")
        return OK

    if m == n and abs(instance.log_ratio_sum()) > tol:
        return Verdict(False, "product of ratios ≠ 1 with m = n")
    return OK


def check(instance: KnownRatios, mode: Mode | None = None, tol: float = FEASIBILITY_TOL) -> Verdict:
    """Like :func:`validate` but raises on failure."""
    if mode is not None and instance.mode is not Mode(mode):
        raise ModeError(f"expected a {Mode(mode).value.upper()}-mode instance, got {instance.mode.value.upper()}")
    verdict = validate(instance, tol)
    if not verdict:
        raise FeasibilityError(verdict)
    return verdict
