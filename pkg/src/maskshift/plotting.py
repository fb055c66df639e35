"""Figures for the report stage, rendered straight to PNG with the Agg canvas.

Figures are built on ``matplotlib.figure.Figure`` rather than pyplot so that
no global state leaks between calls, and PNGs are written without the
software tag so reruns produce identical bytes.
"""
from __future__ import annotations

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "savefig.dpi": 110,
}
SEGMENT_COLORS = ("tab:blue", "tab:red")
POSITIVE_COLOR = "tab:blue"
NEGATIVE_COLOR = "tab:red"


def _figure(width=6.4, height=4.0):
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def save(fig: Figure, path) -> None:
    with matplotlib.rc_context(STYLE):
        fig.savefig(path, format="png", metadata={"Software": None})


def distributions(counts: dict, path) -> None:
    """Bar charts of user counts per label, one panel per profile field.

    ``counts`` maps field -> {label: n}.
    """
    with matplotlib.rc_context(STYLE):
        fields = list(counts)
        ncol = 4
        nrow = max(1, -(-len(fields) // ncol))
        fig = _figure(3.0 * ncol, 2.4 * nrow)
        for i, name in enumerate(fields):
            ax = fig.add_subplot(nrow, ncol, i + 1)
            labels = list(counts[name])
            ax.bar(range(len(labels)), [counts[name][k] for k in labels], color="0.45")
            ax.set_xticks(range(len(labels)))
            ax.set_xticklabels(labels, rotation=30, ha="right")
            ax.set_title(name)
        fig.tight_layout()
        save(fig, path)


def demographic_sentiment(rows, path) -> None:
    """Horizontal bars of mean compound per ``(field, label)`` row."""
    with matplotlib.rc_context(STYLE):
        rows = list(rows)
        fig = _figure(6.4, 0.22 * len(rows) + 1.2)
        ax = fig.add_subplot(1, 1, 1)
        names = [f"{r['field']}={r['value']}" for r in rows]
        means = [r["mean_compound"] for r in rows]
        colors = [POSITIVE_COLOR if m >= 0 else NEGATIVE_COLOR for m in means]
        ax.barh(range(len(rows)), means, color=colors)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels(names)
        ax.invert_yaxis()
        ax.axvline(0.0, color="k", lw=0.6)
        ax.set_xlabel("mean compound sentiment")
        fig.tight_layout()
        save(fig, path)


def timeseries(series, segments, events, path, title="") -> None:
    """Daily mean sentiment with detected segments shaded alternately blue and red.

    ``segments`` holds ``(start_day, end_day, mean)`` with 1-based inclusive
    days; ``events`` holds ``(day, label)`` pairs drawn as dotted lines.
    """
    with matplotlib.rc_context(STYLE):
        fig = _figure(7.2, 3.4)
        ax = fig.add_subplot(1, 1, 1)
        days = range(1, len(series.values) + 1)
        for i, (start, end, mean) in enumerate(segments):
            color = SEGMENT_COLORS[i % 2]
            ax.axvspan(start - 0.5, end + 0.5, color=color, alpha=0.12, lw=0)
            ax.hlines(mean, start - 0.5, end + 0.5, color=color, lw=1.5)
        ax.plot(days, series.values, color="k", lw=1.0, marker="o", ms=2.5)
        for day, label in events:
            if 1 <= day <= len(series.values):
                ax.axvline(day, color="0.3", ls=":", lw=0.8)
                ax.annotate(label, (day, 1.0), xycoords=("data", "axes fraction"),
                            rotation=90, va="top", ha="right", fontsize=6)
        ax.axhline(0.0, color="0.6", lw=0.5)
        ax.set_xlabel(f"day (1 = {series.epoch.isoformat()})")
        ax.set_ylabel("mean compound")
        ax.set_title(title)
        fig.tight_layout()
        save(fig, path)


def topic_keywords(topics, path) -> None:
    """Per topic, keyword counts as bars with their weights on a twin axis."""
    with matplotlib.rc_context(STYLE):
        topics = list(topics)
        ncol = min(2, max(1, len(topics)))
        nrow = -(-len(topics) // ncol)
        fig = _figure(5.0 * ncol, 3.0 * nrow)
        for i, t in enumerate(topics):
            ax = fig.add_subplot(nrow, ncol, i + 1)
            words = [k["token"] for k in t["keywords"]]
            ax.bar(range(len(words)), [k["count"] for k in t["keywords"]], color="0.6", label="count")
            ax.set_xticks(range(len(words)))
            ax.set_xticklabels(words, rotation=45, ha="right")
            ax.set_ylabel("word count")
            twin = ax.twinx()
            twin.plot(range(len(words)), [k["weight"] for k in t["keywords"]], color="tab:red",
                      marker="o", ms=3, label="weight")
            twin.set_ylabel("weight")
            ax.set_title(f"topic {t['topic'] + 1}")
        fig.tight_layout()
        save(fig, path)
