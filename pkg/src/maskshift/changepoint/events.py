"""Pairing detected breakpoints with dated policy events."""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Event:
    date: dt.date
    label: str


@dataclass(frozen=True)
class EventMatch:
    event: Event
    offset_days: int  # event date minus breakpoint date


@dataclass(frozen=True)
class BreakpointEvents:
    index: int
    date: dt.date
    matches: tuple[EventMatch, ...] = field(default_factory=tuple)

    @property
    def matched(self) -> bool:
        return bool(self.matches)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "date": self.date.isoformat(),
            "matched": self.matched,
            "events": [{"date": m.event.date.isoformat(), "label": m.event.label,
                        "offset_days": m.offset_days} for m in self.matches],
        }


def load_events(path) -> list[Event]:
    """Read a ``date,label`` CSV."""
    events = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["date", "label"]:
            raise ValueError(f"{path}: expected header 'date,label'")
        for line_no, row in enumerate(reader, start=2):
            try:
                events.append(Event(dt.date.fromisoformat(row["date"].strip()), row["label"].strip()))
            except (ValueError, AttributeError) as exc:
                raise ValueError(f"{path}:{line_no}: bad event row: {exc}") from None
    return sorted(events, key=lambda e: (e.date, e.label))


def breakpoint_date(index: int, epoch: dt.date) -> dt.date:
    """First day of the regime that starts after breakpoint ``index``.

    Breakpoint ``tau`` ends the segment at day ``tau`` (dated
    ``epoch + tau - 1``), so the shifted regime begins ``tau`` days after the
    epoch.
    """
    return epoch + dt.timedelta(days=index)


def associate_events(breakpoints, epoch: dt.date, catalog, window_days: int = 3) -> list[BreakpointEvents]:
    """Attach every event within ``window_days`` (inclusive) of each breakpoint.

    ``breakpoints`` may be a ``Segmentation`` or a plain sequence of indices;
    ``epoch`` may be a date or a ``SentimentSeries``.
    """
    epoch = getattr(epoch, "epoch", epoch)
    indices = getattr(breakpoints, "breakpoints", breakpoints)
    out = []
    for idx in indices:
        when = breakpoint_date(idx, epoch)
        matches = tuple(EventMatch(ev, (ev.date - when).days) for ev in catalog
                        if abs((ev.date - when).days) <= window_days)
        out.append(BreakpointEvents(idx, when, matches))
    return out
