"""Random instances and random completions on an instance's constraint surface.

With the reference mean normalized to 1, the free block of an AM-mode
completion must sum to ``n - sum(r)``; in GM mode it must have product
``1 / prod(r)``.  Both are single (log-)linear conditions, so a positive
draw is projected exactly by one rescaling.
"""

from __future__ import annotations

import math

import numpy as np

from .instance import KnownRatios, Mode


def project_free_block(instance: KnownRatios, log_free: np.ndarray) -> np.ndarray:
    """Map log free values (last axis) onto the constraint surface.

    Returns the projected *logs*.  AM mode rescales the values to the
    required sum; GM mode shifts the logs to the required total.
    """
    log_free = np.asarray(log_free, dtype=float)
    k = instance.free
    if log_free.shape[-1] != k:
        raise ValueError(f"free block must have {k} entries")
    if instance.mode is Mode.AM:
        total = math.fsum([instance.n, *(-r for r in instance.ratios)])
        top = np.max(log_free, axis=-1, keepdims=True)
        log_sum = top + np.log(np.sum(np.exp(log_free - top), axis=-1, keepdims=True))
        return log_free - log_sum + math.log(total)
    target = -instance.log_ratio_sum()
    return log_free - (np.sum(log_free, axis=-1, keepdims=True) - target) / k


def random_completions(
    instance: KnownRatios,
    size: int,
    rng: np.random.Generator,
    spread: float = 3.0,
) -> np.ndarray:
    """Draw ``size`` feasible completions as a ``(size, n)`` array.

    Free values start log-uniform on ``[-spread, spread]`` before projection.
    """
    k = instance.free
    if k < 1:
        raise ValueError("instance has no free numbers")
    logs = project_free_block(instance, rng.uniform(-spread, spread, size=(size, k)))
    known = np.broadcast_to(np.asarray(instance.ratios), (size, instance.m))
    return np.concatenate([known, np.exp(logs)], axis=1)


def random_instance(
    rng: np.random.Generator,
    n: int,
    m: int,
    mode: Mode | str,
    spread: float = 2.0,
) -> KnownRatios:
    """Ratios log-uniform on ``[e**-spread, e**spread]``, made feasible.

    AM mode with ``m < n``: a sum at or above ``n`` is scaled down to a
    uniform fraction in ``[0.05, 0.95]`` of ``n``.  With ``m = n`` the
    ratios are scaled onto the sum (AM) or product (GM) constraint.
    """
    mode = Mode(mode)
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    r = np.exp(rng.uniform(-spread, spread, size=m))
    if mode is Mode.AM:
        s = r.sum()
        if m == n:
            r = r * (n / s)
        elif s >= 0.95 * n:
            r = r * (rng.uniform(0.05, 0.95) * n / s)
    elif m == n:
        r = np.exp(np.log(r) - np.log(r).mean())
    return KnownRatios(n, mode, r)
