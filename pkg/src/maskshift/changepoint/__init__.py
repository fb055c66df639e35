from .costs import CostKind, CostModel, segment_cost
from .events import (BreakpointEvents, Event, EventMatch, associate_events,
                     breakpoint_date, load_events)
from .pelt import (DegenerateSeriesError, Segmentation, brute_force, default_beta,
                   noise_scale, pelt, scan)
from .series import DEFAULT_EPOCH, SentimentSeries, build_series

__all__ = [
    "CostKind", "CostModel", "segment_cost",
    "Event", "EventMatch", "BreakpointEvents", "associate_events", "breakpoint_date", "load_events",
    "Segmentation", "DegenerateSeriesError", "pelt", "brute_force", "scan", "default_beta",
    "noise_scale",
    "SentimentSeries", "build_series", "DEFAULT_EPOCH",
]
