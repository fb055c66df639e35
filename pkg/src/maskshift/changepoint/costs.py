"""Segment cost functions for penalized segmentation.

Three models are provided. ``MeanShift`` is the residual sum of squares
around the segment mean (a Gaussian with known unit variance, up to
constants). ``VarianceShift`` and ``NormalMeanVar`` are twice the negative
maximized Gaussian log-likelihood of the segment, with the mean fixed to the
series mean or free respectively. The variance estimate is constrained to
be at least ``variance_floor`` so that constant segments are well defined::

    cost = n * (log(2*pi) + log(max(v, floor)) + min(1, v / floor))

For ``v >= floor`` this is the familiar ``n * (log(2*pi) + log(v) + 1)``.
Keeping the exact constrained likelihood (rather than only clamping the log)
keeps every cost subadditive under splitting, which is what lets PELT prune
with a zero constant.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_LOG_2PI = math.log(2.0 * math.pi)


class CostKind(str, enum.Enum):
    MEAN_SHIFT = "MeanShift"
    VARIANCE_SHIFT = "VarianceShift"
    NORMAL_MEAN_VAR = "NormalMeanVar"


@dataclass(frozen=True)
class CostModel:
    kind: CostKind = CostKind.NORMAL_MEAN_VAR
    variance_floor: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "kind", CostKind(self.kind))
        if not self.variance_floor > 0:
            raise ValueError("variance_floor must be positive")


def _gauss_cost(n: int, var: float, floor: float) -> float:
    var = max(var, 0.0)
    return n * (_LOG_2PI + math.log(max(var, floor)) + min(1.0, var / floor))


def segment_cost(values, s: int, t: int, model: CostModel = CostModel()) -> float:
    """Cost of the segment ``values[s..t]`` (1-based, inclusive).

    This is the direct two-pass computation; it is the reference that the
    prefix-sum implementation used by PELT is checked against.
    """
    y = np.asarray(getattr(values, "values", values), dtype=float)
    n_total = len(y)
    if not (1 <= s <= t <= n_total):
        raise ValueError(f"invalid segment [{s}, {t}] for series of length {n_total}")
    seg = y[s - 1:t]
    n = t - s + 1
    if model.kind is CostKind.MEAN_SHIFT:
        return float(np.sum((seg - seg.mean()) ** 2))
    if model.kind is CostKind.VARIANCE_SHIFT:
        var = float(np.mean((seg - y.mean()) ** 2))
    else:
        var = float(np.mean((seg - seg.mean()) ** 2))
    return _gauss_cost(n, var, model.variance_floor)


class PrefixCost:
    """O(1) segment costs from cumulative sums, for use inside the DP."""

    def __init__(self, values, model: CostModel):
        y = np.asarray(values, dtype=float)
        self.model = model
        self.n = len(y)
        # VarianceShift needs deviations from the series mean; for the other
        # models the shift is harmless and limits cancellation in s2 - s1**2/n
        z = y - y.mean() if len(y) else y
        self._z = z
        self._s1 = np.concatenate(([0.0], np.cumsum(z)))
        self._s2 = np.concatenate(([0.0], np.cumsum(z * z)))

    def __call__(self, s: int, t: int) -> float:
        """Cost of the 1-based inclusive segment ``[s, t]``."""
        n = t - s + 1
        s1 = self._s1[t] - self._s1[s - 1]
        s2 = self._s2[t] - self._s2[s - 1]
        kind = self.model.kind
        if kind is CostKind.VARIANCE_SHIFT:
            return _gauss_cost(n, s2 / n, self.model.variance_floor)
        rss = s2 - s1 * s1 / n
        # residue at the round-off level of the running sums is zero; left
        # in, 1/variance_floor would amplify it into a visible cost difference
        if n == 1 or rss <= 1e-12 * self._s2[t]:
            rss = 0.0
        if kind is CostKind.MEAN_SHIFT:
            return rss
        floor = self.model.variance_floor
        if 0.0 < rss < 1e3 * floor * n:
            # near the floor the min(1, v/floor) term magnifies round-off
            seg = self._z[s - 1:t]
            rss = float(np.sum((seg - seg.mean()) ** 2))
        return _gauss_cost(n, rss / n, floor)
