"""Daily mean-sentiment series per demographic slice."""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass

import numpy as np

DEFAULT_EPOCH = dt.date(2020, 1, 27)


@dataclass
class SentimentSeries:
    """Daily means ``values[t-1]`` for day ``t`` = ``epoch + (t-1)`` days.

    Days without tweets are filled by linear interpolation between their
    nearest observed neighbours (nearest value at the ends) and flagged in
    ``interpolated``. A series with no observed day at all is ``degenerate``.
    """
    epoch: dt.date
    values: np.ndarray
    counts: np.ndarray
    interpolated: np.ndarray
    demographic_filter: str = "all"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        self.interpolated = np.asarray(self.interpolated, dtype=bool)
        if not (len(self.values) == len(self.counts) == len(self.interpolated)):
            raise ValueError("values, counts and interpolated must have equal length")

    def __len__(self):
        return len(self.values)

    @property
    def degenerate(self) -> bool:
        return not bool(np.any(self.counts > 0))

    def date_of(self, day: int) -> dt.date:
        """Calendar date of 1-based day ``day``."""
        return self.epoch + dt.timedelta(days=day - 1)

    def dates(self) -> list[dt.date]:
        return [self.date_of(t) for t in range(1, len(self) + 1)]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "value", "count", "interpolated_flag"])
            for d, v, c, f in zip(self.dates(), self.values, self.counts, self.interpolated):
                w.writerow([d.isoformat(), repr(float(v)), int(c), int(f)])

    @classmethod
    def from_csv(cls, path, demographic_filter: str = "all") -> "SentimentSeries":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ValueError(f"{path}: empty series file")
        dates = [dt.date.fromisoformat(r["date"]) for r in rows]
        for prev, cur in zip(dates, dates[1:]):
            if (cur - prev).days != 1:
                raise ValueError(f"{path}: dates are not consecutive at {cur}")
        return cls(epoch=dates[0],
                   values=[float(r["value"]) for r in rows],
                   counts=[int(r["count"]) for r in rows],
                   interpolated=[r["interpolated_flag"] in ("1", "true", "True") for r in rows],
                   demographic_filter=demographic_filter)


def _as_date(x) -> dt.date:
    if isinstance(x, dt.datetime):
        if x.tzinfo is not None:
            x = x.astimezone(dt.timezone.utc)
        return x.date()
    return x


def build_series(records, profiles=None, predicate=None, epoch: dt.date = DEFAULT_EPOCH,
                 end_date: dt.date | None = None, label: str = "all") -> SentimentSeries:
    """Aggregate scored tweets into a daily mean-compound series.

    ``records`` yields objects with ``author_id``, ``created_at`` and
    ``compound``. ``predicate`` is called with the author's profile (``None``
    when ``profiles`` has no entry) and decides membership. Records outside
    ``[epoch, end_date]`` are ignored.
    """
    records = list(records)
    if end_date is None:
        if not records:
            raise ValueError("end_date is required for an empty record set")
        end_date = max(_as_date(r.created_at) for r in records)
    n = (end_date - epoch).days + 1
    if n < 1:
        raise ValueError(f"empty date range {epoch} .. {end_date}")
    profiles = profiles or {}
    sums = np.zeros(n)
    counts = np.zeros(n, dtype=np.int64)
    for r in records:
        day = (_as_date(r.created_at) - epoch).days
        if not 0 <= day < n:
            continue
        if predicate is not None and not predicate(profiles.get(r.author_id)):
            continue
        sums[day] += r.compound
        counts[day] += 1
    observed = counts > 0
    values = np.zeros(n)
    values[observed] = sums[observed] / counts[observed]
    if observed.any() and not observed.all():
        idx = np.arange(n)
        values[~observed] = np.interp(idx[~observed], idx[observed], values[observed])
    return SentimentSeries(epoch=epoch, values=values, counts=counts,
                           interpolated=~observed if observed.any() else np.zeros(n, dtype=bool),
                           demographic_filter=label)
