"""Exact penalized segmentation: PELT and an exhaustive oracle.

Both solvers minimize

    sum of segment costs + beta * (number of segments)

over all segmentations of ``y[1..N]`` whose segments have at least
``min_size`` points. Breakpoints are 1-based indices of the last point of
each segment but the final one, so a breakpoint ``tau`` splits the series into
``y[1..tau]`` and ``y[tau+1..]``.

Ties (objectives equal up to floating point noise) are resolved toward fewer
breakpoints, then toward the lexicographically earliest breakpoint list. The
DP and the enumeration share this rule so their outputs agree exactly.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .costs import CostKind, CostModel, PrefixCost, segment_cost

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 16
_TIE_RTOL = 1e-10


class DegenerateSeriesError(ValueError):
    """Raised when asked to segment a series that carries no observations."""


@dataclass(frozen=True)
class Segmentation:
    breakpoints: tuple[int, ...]
    objective: float
    n: int
    beta: float
    model: CostModel = field(default_factory=CostModel)
    min_size: int = 1

    @property
    def n_changes(self) -> int:
        return len(self.breakpoints)

    def segments(self) -> list[tuple[int, int]]:
        """1-based inclusive ``(start, end)`` pairs covering ``1..n``."""
        edges = (0, *self.breakpoints, self.n)
        return [(a + 1, b) for a, b in zip(edges[:-1], edges[1:])]

    def recompute_objective(self, values) -> float:
        y = np.asarray(getattr(values, "values", values), dtype=float)
        return math.fsum(segment_cost(y, s, t, self.model) for s, t in self.segments()) \
            + self.beta * (self.n_changes + 1)


def default_beta(n: int) -> float:
    """BIC-style per-segment penalty ``2 log N``."""
    return 2.0 * math.log(n)


def noise_scale(values) -> float:
    """Robust noise level from the MAD of first differences.

    Differencing removes level shifts, and the MAD ignores the few large
    jumps they leave behind. Falls back to the standard deviation (then 1)
    for series where the MAD vanishes.
    """
    y = np.asarray(values, dtype=float)
    if len(y) >= 3:
        d = np.diff(y)
        mad = float(np.median(np.abs(d - np.median(d))))
        sigma = mad / (0.6744897501960817 * math.sqrt(2.0))
        if sigma > 0:
            return sigma
    sd = float(np.std(y))
    return sd if sd > 0 else 1.0


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _TIE_RTOL * max(1.0, abs(a), abs(b))


def _prefer(v1: float, bps1: tuple, v2: float, bps2: tuple) -> bool:
    """True when candidate 1 beats candidate 2 under the tie-break rule."""
    if not _close(v1, v2):
        return v1 < v2
    if len(bps1) != len(bps2):
        return len(bps1) < len(bps2)
    return bps1 < bps2


def _unpack(series, force: bool) -> np.ndarray:
    if getattr(series, "degenerate", False) and not force:
        label = getattr(series, "demographic_filter", "")
        raise DegenerateSeriesError(f"series {label!r} has no observations")
    y = np.asarray(getattr(series, "values", series), dtype=float)
    if y.ndim != 1 or len(y) < 1:
        raise ValueError("expected a nonempty 1-d series")
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    return y


def _check_args(n: int, beta: float, min_size: int) -> None:
    if not beta > 0:
        raise ValueError("beta must be positive")
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    if n < min_size:
        raise ValueError(f"series of length {n} is shorter than min_size={min_size}")


def pelt(series, model: CostModel = CostModel(), beta: float | None = None,
         min_size: int = 1, force: bool = False) -> Segmentation:
    """Optimal segmentation by dynamic programming with PELT pruning.

    Parameters
    ----------
    series : SentimentSeries or array_like
        The data. A ``SentimentSeries`` flagged degenerate is refused unless
        ``force`` is set.
    model : CostModel
        Segment cost.
    beta : float, optional
        Penalty per segment; defaults to ``2 log N``.
    min_size : int
        Minimum number of points per segment.

    Returns
    -------
    Segmentation
    """
    y = _unpack(series, force)
    n = len(y)
    if beta is None:
        beta = default_beta(n)
    _check_args(n, beta, min_size)
    cost = PrefixCost(y, model)

    best_f = [math.inf] * (n + 1)
    best_bps: list[tuple[int, ...]] = [()] * (n + 1)
    best_f[0] = 0.0
    candidates = [0]
    pruned_at: dict[int, int] = {}

    for t in range(1, n + 1):
        candidates = [s for s in candidates
                      if s not in pruned_at or t < pruned_at[s] + min_size]
        partial = {}
        f_t, bps_t = math.inf, ()
        for s in candidates:
            if t - s < min_size:
                continue
            p = best_f[s] + cost(s + 1, t)
            partial[s] = p
            bps = best_bps[s] + ((s,) if s > 0 else ())
            if f_t == math.inf or _prefer(p + beta, bps, f_t, bps_t):
                f_t, bps_t = p + beta, bps
        best_f[t], best_bps[t] = f_t, bps_t
        if f_t == math.inf:
            continue
        # s can never win again once F(s) + C(s+1, t) exceeds F(t); the split
        # at t only becomes admissible min_size steps later
        for s, p in partial.items():
            if s not in pruned_at and p > f_t and not _close(p, f_t):
                pruned_at[s] = t
        candidates.append(t)

    return Segmentation(breakpoints=best_bps[n], objective=best_f[n], n=n,
                        beta=float(beta), model=model, min_size=min_size)


_MASK_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _mask_bits(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _MASK_CACHE:
        masks = np.arange(2 ** (n - 1), dtype=np.int64)
        bits = np.zeros((n - 1, len(masks)), dtype=bool)
        for t in range(1, n):
            bits[t - 1] = (masks >> (t - 1)) & 1
        _MASK_CACHE[n] = (masks, bits)
    return _MASK_CACHE[n]


def brute_force(series, model: CostModel = CostModel(), beta: float | None = None,
                min_size: int = 1, limit: int = BRUTE_FORCE_LIMIT,
                force: bool = False) -> Segmentation:
    """Evaluate every one of the ``2**(N-1)`` segmentations.

    Segment costs come from :func:`segment_cost` (two-pass, no prefix sums),
    so this stays independent of the DP's arithmetic.
    """
    y = _unpack(series, force)
    n = len(y)
    if n > limit:
        raise ValueError(f"brute force refuses N={n} > limit={limit}")
    if beta is None:
        beta = default_beta(n)
    _check_args(n, beta, min_size)

    costs = np.zeros((n + 2, n + 1))
    for s in range(1, n + 1):
        for t in range(s, n + 1):
            costs[s, t] = segment_cost(y, s, t, model)

    masks, bits = _mask_bits(n)
    m = len(masks)
    total = np.zeros(m)
    start = np.ones(m, dtype=np.int64)
    valid = np.ones(m, dtype=bool)
    n_breaks = np.zeros(m, dtype=np.int64)
    for t in range(1, n + 1):
        ends = bits[t - 1] if t < n else np.ones(m, dtype=bool)
        total[ends] += costs[start[ends], t]
        valid[ends] &= (t - start[ends] + 1) >= min_size
        start[ends] = t + 1
        if t < n:
            n_breaks += ends
    objective = total + beta * (n_breaks + 1)

    idx = np.flatnonzero(valid)
    best_val = float(objective[idx].min())
    tol = _TIE_RTOL * max(1.0, abs(best_val))
    near = idx[objective[idx] <= best_val + tol]
    options = []
    for i in near:
        bps = tuple(t for t in range(1, n) if bits[t - 1][i])
        options.append((len(bps), bps, float(objective[i])))
    k, bps, val = min(options)
    return Segmentation(breakpoints=bps, objective=val, n=n, beta=float(beta),
                        model=model, min_size=min_size)


def scan(series_map, model: CostModel = CostModel(), beta: float | None = None,
         min_size: int = 1, standardize: bool = False) -> dict:
    """Segment every series in ``series_map``; keys come back sorted.

    Degenerate series map to ``None`` instead of raising. With
    ``standardize`` each series is divided by its :func:`noise_scale` first,
    which puts ``MeanShift`` costs in noise units so that one ``beta`` suits
    every demographic.
    """
    if not series_map:
        raise ValueError("scan needs at least one series")
    out = {}
    for key in sorted(series_map):
        series = series_map[key]
        if getattr(series, "degenerate", False):
            logger.info("skipping degenerate series %s", key)
            out[key] = None
            continue
        y = np.asarray(getattr(series, "values", series), dtype=float)
        if standardize:
            y = y / noise_scale(y)
        out[key] = pelt(y, model, beta, min_size=min_size)
    return out


__all__ = ["Segmentation", "DegenerateSeriesError", "pelt", "brute_force", "scan",
           "default_beta", "noise_scale", "CostKind", "CostModel"]
