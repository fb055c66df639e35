"""Pipeline stages. Each reads upstream artifacts under the output directory
and writes its own subdirectory; a stage returns row counts for the manifest.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from collections import Counter
from dataclasses import fields
from pathlib import Path

from . import __version__, plotting
from .changepoint import (CostKind, CostModel, SentimentSeries, associate_events, build_series,
                          default_beta, load_events, noise_scale, pelt)
from .changepoint.series import DEFAULT_EPOCH
from .config import ConfigError, PipelineConfig
from .corpus import filter_corpus, load_org_scores, load_terms, read_corpus, write_corpus
from .demographics import (DemographicProfile, GeoTable, NameModel, PartyDirectory, build_profiles,
                           fit_college_model, ingest_annotations, load_attribute_phrases,
                           load_timelines, load_users, org_scores, parse_filter, rank_attributes,
                           read_profiles, reference_model, write_profiles)
from .demographics.attribution import flatten
from .sentiment import (RuleSet, ScoredTweet, default_lexicon, load_lexicon, mean_compound,
                        read_scores, score, write_scores)
from .topics import (load_custom_stopwords, load_pos_lexicon, load_stopwords, merge_ngrams,
                     preprocess, report, select_model)

logger = logging.getLogger(__name__)

STAGES = ("filter", "score", "demo", "topics", "series", "detect", "report")

ARTIFACTS = {
    "filter": ("filtered.jsonl", "stats.json"),
    "score": ("scores.csv",),
    "demo": ("profiles.csv", "college_attributes.csv"),
    "topics": ("topics.json", "model.json"),
    "series": ("index.json",),
    "detect": ("segmentation.json",),
    "report": ("summary.json",),
}


class DependencyError(ConfigError):
    """An upstream artifact is missing."""


def stage_dir(cfg: PipelineConfig, stage: str) -> Path:
    return cfg.out / stage


def upstream(cfg: PipelineConfig, stage: str, name: str) -> Path:
    p = stage_dir(cfg, stage) / name
    if not p.is_file():
        raise DependencyError(f"missing {p}; run `maskshift {stage}` first")
    return p


def _dump_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _fmt(x: float) -> str:
    return repr(float(x))


# -- filter ------------------------------------------------------------------------

def run_filter(cfg: PipelineConfig) -> dict:
    terms = load_terms(cfg.require("terms"))
    orgs = {}
    if cfg.path("org_scores"):
        orgs = load_org_scores(cfg.path("org_scores"))
    elif cfg.path("annotations"):
        orgs = org_scores(ingest_annotations(cfg.path("annotations")))
    kept, stats = filter_corpus(read_corpus(cfg.require("corpus")), terms,
                                lang=cfg.get("filter", "lang", "en"), org_scores=orgs,
                                org_threshold=cfg.get_float("filter", "org_threshold", 0.5))
    out = stage_dir(cfg, "filter")
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(kept, out / "filtered.jsonl")
    _dump_json({"schema_version": 1, **stats.to_dict()}, out / "stats.json")
    return {"inputs": {"tweets": stats.read}, "outputs": {"tweets": stats.kept}}


def _filtered(cfg):
    return list(read_corpus(upstream(cfg, "filter", "filtered.jsonl")))


# -- score -------------------------------------------------------------------------

def _lexicon(cfg):
    if cfg.path("lexicon"):
        return load_lexicon(cfg.path("lexicon"), cfg.path("emoji_lexicon"))
    return default_lexicon()


def run_score(cfg: PipelineConfig) -> dict:
    records = _filtered(cfg)
    try:
        rules = RuleSet.from_overrides(cfg.sections.get("sentiment"))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"[sentiment] {exc}") from None
    lex = _lexicon(cfg)
    rows = []
    for r in records:
        s = score(r.sentiment_text, lex, rules)
        rows.append(ScoredTweet(r.id, r.author_id, r.created_at, s.compound, s.pos, s.neu, s.neg))
    out = stage_dir(cfg, "score")
    out.mkdir(parents=True, exist_ok=True)
    n = write_scores(rows, out / "scores.csv")
    return {"inputs": {"tweets": len(records)}, "outputs": {"scores": n}}


# -- demographics ------------------------------------------------------------------

def _college_labels(path) -> dict[str, bool]:
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["author_id", "is_college"]:
            raise ValueError(f"{path}: header must be author_id,is_college")
        for row in reader:
            v = row["is_college"].strip().lower()
            if v not in ("true", "false", "1", "0"):
                raise ValueError(f"{path}:{reader.line_num}: is_college must be true/false")
            out[row["author_id"].strip()] = v in ("true", "1")
    return out


def run_demo(cfg: PipelineConfig) -> dict:
    authors = sorted({r.author_id for r in _filtered(cfg)})
    users = load_users(cfg.path("users")) if cfg.path("users") else {}
    annotations = ingest_annotations(cfg.path("annotations")) if cfg.path("annotations") else {}
    timelines = load_timelines(cfg.path("timelines")) if cfg.path("timelines") else {}
    out = stage_dir(cfg, "demo")
    out.mkdir(parents=True, exist_ok=True)

    sources = {}
    ranked = []
    if cfg.path("college_labels") and timelines:
        labels = _college_labels(cfg.path("college_labels"))
        pairs = [(flatten(timelines[a]), y) for a, y in sorted(labels.items()) if a in timelines]
        phrases = load_attribute_phrases(cfg.path("college_phrases"))
        forest = {"n_estimators": cfg.get_int("demographics", "n_estimators", 100)}
        depth = cfg.get_int("demographics", "max_depth", None)
        if depth is not None:
            forest["max_depth"] = depth
        model = fit_college_model(pairs, phrases, top_k=cfg.get_int("demographics", "top_k", None),
                                  forest_params=forest, seed=cfg.stage_seed("demo"))
        ranked = rank_attributes(pairs, phrases)
        sources["college_model"] = model
        sources["override_terms"] = frozenset(
            cfg.get_list("demographics", "override_terms", ["professor", "textbook"]))
        sources["override_min_count"] = cfg.get_int("demographics", "override_min_count", 5)
    if users:
        sources["name_model"] = (NameModel.load(cfg.path("name_model")) if cfg.path("name_model")
                                 else reference_model())
    geo_keys = ("cities", "incomes", "rucc")
    if all(cfg.path(k) for k in geo_keys):
        sources["geo"] = GeoTable.load(*(cfg.path(k) for k in geo_keys), cfg.path("regions"))
        sources["national_median"] = int(cfg.get_float("demographics", "national_median", 63179))
    if cfg.path("party_accounts") and cfg.path("political_keywords"):
        sources["party_directory"] = PartyDirectory.load(cfg.path("party_accounts"),
                                                         cfg.path("political_keywords"))

    profiles = build_profiles(authors, users=users, annotations=annotations, timelines=timelines,
                              **sources)
    write_profiles(profiles, out / "profiles.csv")
    with open(out / "college_attributes.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["phrase", "pmi"])
        for a in ranked:
            w.writerow([a.phrase, _fmt(a.pmi)])
    return {"inputs": {"authors": len(authors), "users": len(users), "annotations": len(annotations),
                       "timelines": len(timelines)},
            "outputs": {"profiles": len(profiles), "attributes": len(ranked)}}


# -- topics ------------------------------------------------------------------------

def run_topics(cfg: PipelineConfig) -> dict:
    records = _filtered(cfg)
    docs = preprocess(records, load_stopwords(cfg.path("stopwords")),
                      load_custom_stopwords(cfg.path("custom_stopwords")),
                      load_pos_lexicon(cfg.path("pos_lexicon")))
    docs = merge_ngrams(docs, cfg.get_int("topics", "ngram_min_count", 5),
                        cfg.get_float("topics", "ngram_threshold", 10.0))
    candidates = [int(k) for k in cfg.get_list("topics", "candidates", ["4"])]
    alpha = cfg.get_float("topics", "alpha", None)
    top_m = cfg.get_int("topics", "top_m", 10)
    model, table = select_model(candidates, docs, alpha=alpha,
                                beta=cfg.get_float("topics", "beta", 0.01),
                                iterations=cfg.get_int("topics", "iterations", 1000),
                                seed=cfg.stage_seed("topics"), top_m=top_m)
    texts = {r.id: r.raw_text for r in records}
    nonempty = [d for d in docs if d.lemmas]
    rep = report(model, nonempty, texts, cfg.get_int("topics", "top_keywords", 10),
                 cfg.get_int("topics", "top_examples", 3), top_m, selection=table)
    out = stage_dir(cfg, "topics")
    out.mkdir(parents=True, exist_ok=True)
    (out / "topics.json").write_text(rep.to_json(), encoding="utf-8")
    model.save(out / "model.json")
    return {"inputs": {"tweets": len(records)},
            "outputs": {"documents": len(nonempty), "K": model.K, "vocabulary": len(model.vocab)}}


# -- series ------------------------------------------------------------------------

def slug(label: str) -> str:
    return label.replace("=", "-").replace(",", "_").replace("≤", "le").replace("≥", "ge")


def series_filters(cfg: PipelineConfig):
    raw = cfg.get_list("series", "filters", ["all"], sep=";")
    try:
        return [parse_filter(f) for f in raw]
    except ValueError as exc:
        raise ConfigError(f"[series] filters: {exc}") from None


def run_series(cfg: PipelineConfig) -> dict:
    scores = read_scores(upstream(cfg, "score", "scores.csv"))
    profiles = read_profiles(upstream(cfg, "demo", "profiles.csv"))
    epoch = cfg.get_date("series", "epoch", DEFAULT_EPOCH)
    end = cfg.get_date("series", "end_date", None)
    out = stage_dir(cfg, "series")
    out.mkdir(parents=True, exist_ok=True)
    index = []
    for flt in series_filters(cfg):
        s = build_series(scores, profiles, flt, epoch=epoch, end_date=end, label=flt.label)
        name = f"series_{slug(flt.label)}.csv"
        s.to_csv(out / name)
        index.append({"filter": flt.label, "file": name, "days": len(s),
                      "tweets": int(s.counts.sum()), "degenerate": s.degenerate})
    _dump_json({"schema_version": 1, "epoch": epoch.isoformat(), "series": index}, out / "index.json")
    return {"inputs": {"scores": len(scores), "profiles": len(profiles)},
            "outputs": {"series": len(index)}}


def _load_series(cfg):
    idx = json.loads(upstream(cfg, "series", "index.json").read_text(encoding="utf-8"))
    out = []
    for entry in idx["series"]:
        path = upstream(cfg, "series", entry["file"])
        out.append(SentimentSeries.from_csv(path, entry["filter"]))
    return out


# -- detect ------------------------------------------------------------------------

def detect_series(series: SentimentSeries, model: CostModel, beta, min_size: int,
                  standardize: bool, catalog, window_days: int) -> dict:
    entry = {"filter": series.demographic_filter, "n": len(series), "degenerate": series.degenerate}
    if series.degenerate:
        entry.update(beta=None, objective=None, scale=None, breakpoints=[], segments=[])
        return entry
    y = series.values
    scale = noise_scale(y) if standardize else 1.0
    b = default_beta(len(y)) if beta is None else beta
    seg = pelt(y / scale, model, b, min_size=min_size)
    matches = associate_events(seg, series.epoch, catalog, window_days)
    segments = []
    for start, end in seg.segments():
        segments.append({"start_index": start, "end_index": end,
                         "start_date": series.date_of(start).isoformat(),
                         "end_date": series.date_of(end).isoformat(),
                         "mean": math.fsum(y[start - 1:end]) / (end - start + 1)})
    entry.update(beta=b, objective=seg.objective, scale=scale,
                 breakpoints=[m.to_dict() for m in matches], segments=segments)
    return entry


def run_detect(cfg: PipelineConfig) -> dict:
    series = _load_series(cfg)
    model = CostModel(CostKind(cfg.get("detect", "cost", CostKind.MEAN_SHIFT.value)))
    beta = cfg.get_float("detect", "beta", None)
    min_size = cfg.get_int("detect", "min_size", 1)
    standardize = cfg.get_bool("detect", "standardize", True)
    window = cfg.get_int("detect", "window_days", 3)
    catalog = load_events(cfg.path("events")) if cfg.path("events") else []
    results = [detect_series(s, model, beta, min_size, standardize, catalog, window) for s in series]
    out = stage_dir(cfg, "detect")
    out.mkdir(parents=True, exist_ok=True)
    _dump_json({"schema_version": 1, "cost": model.kind.value, "min_size": min_size,
                "standardize": standardize, "window_days": window, "series": results},
               out / "segmentation.json")
    return {"inputs": {"series": len(series), "events": len(catalog)},
            "outputs": {"breakpoints": sum(len(r["breakpoints"]) for r in results)}}


# -- report ------------------------------------------------------------------------

PROFILE_FIELDS = [f.name for f in fields(DemographicProfile)]


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def demographic_rows(scores, profiles) -> list[dict]:
    """Mean compound and polarity counts per profile field and label."""
    groups = {}
    unknown = DemographicProfile()
    for s in scores:
        p = profiles.get(s.author_id, unknown)
        for name in PROFILE_FIELDS:
            groups.setdefault((name, getattr(p, name)), []).append(s)
    rows = []
    for name in PROFILE_FIELDS:
        labels = sorted(v for f, v in groups if f == name)
        for v in labels:
            members = groups[(name, v)]
            pol = Counter(m.polarity.value for m in members)
            rows.append({"field": name, "value": v, "tweets": len(members),
                         "mean_compound": mean_compound(members),
                         "positive": pol["Positive"], "negative": pol["Negative"],
                         "neutral": pol["Neutral"]})
    return rows


def run_report(cfg: PipelineConfig) -> dict:
    scores = read_scores(upstream(cfg, "score", "scores.csv"))
    profiles = read_profiles(upstream(cfg, "demo", "profiles.csv"))
    series = _load_series(cfg)
    seg = json.loads(upstream(cfg, "detect", "segmentation.json").read_text(encoding="utf-8"))
    topics = json.loads(upstream(cfg, "topics", "topics.json").read_text(encoding="utf-8"))
    stats = json.loads(upstream(cfg, "filter", "stats.json").read_text(encoding="utf-8"))
    out = stage_dir(cfg, "report")
    figs = out / "figures"
    figs.mkdir(parents=True, exist_ok=True)

    # user-level label distributions over authors with at least one scored tweet
    authors = sorted({s.author_id for s in scores})
    unknown = DemographicProfile()
    dist = {name: Counter(getattr(profiles.get(a, unknown), name) for a in authors)
            for name in PROFILE_FIELDS}
    dist = {name: dict(sorted(c.items())) for name, c in dist.items()}
    _write_csv(out / "distributions.csv", ["field", "value", "users"],
               [[name, v, n] for name, c in dist.items() for v, n in c.items()])
    plotting.distributions(dist, figs / "distributions.png")

    demo_rows = demographic_rows(scores, profiles)
    _write_csv(out / "demographic_sentiment.csv",
               ["field", "value", "tweets", "mean_compound", "positive", "negative", "neutral"],
               [[r["field"], r["value"], r["tweets"], _fmt(r["mean_compound"]), r["positive"],
                 r["negative"], r["neutral"]] for r in demo_rows])
    plotting.demographic_sentiment([r for r in demo_rows if r["value"] != "unknown"],
                                   figs / "demographic_sentiment.png")

    by_filter = {e["filter"]: e for e in seg["series"]}
    ts_rows, seg_rows = [], []
    catalog = load_events(cfg.path("events")) if cfg.path("events") else []
    for s in series:
        for day, (d, v, c, f) in enumerate(zip(s.dates(), s.values, s.counts, s.interpolated), 1):
            ts_rows.append([s.demographic_filter, day, d.isoformat(), _fmt(v), int(c), int(f)])
        entry = by_filter.get(s.demographic_filter, {"segments": []})
        shading = []
        for i, g in enumerate(entry["segments"]):
            color = plotting.SEGMENT_COLORS[i % 2].split(":")[-1]
            seg_rows.append([s.demographic_filter, i + 1, g["start_index"], g["end_index"],
                             g["start_date"], g["end_date"], _fmt(g["mean"]), color])
            shading.append((g["start_index"], g["end_index"], g["mean"]))
        marks = [((e.date - s.epoch).days + 1, e.label) for e in catalog]
        plotting.timeseries(s, shading, marks, figs / f"timeseries_{slug(s.demographic_filter)}.png",
                            title=s.demographic_filter)
    _write_csv(out / "timeseries.csv",
               ["series", "day", "date", "value", "count", "interpolated_flag"], ts_rows)
    _write_csv(out / "segments.csv",
               ["series", "segment", "start_index", "end_index", "start_date", "end_date", "mean",
                "shade"], seg_rows)

    kw_rows = [[t["topic"] + 1, rank, k["token"], k["count"], _fmt(k["weight"])]
               for t in topics["topics"] for rank, k in enumerate(t["keywords"], 1)]
    _write_csv(out / "topic_keywords.csv", ["topic", "rank", "token", "count", "weight"], kw_rows)
    plotting.topic_keywords(topics["topics"], figs / "topic_keywords.png")

    overall = Counter(s.polarity.value for s in scores)
    summary = {
        "schema_version": 1,
        "tool_version": __version__,
        "corpus": {k: v for k, v in stats.items() if k != "schema_version"},
        "overall": {"tweets": len(scores),
                    "mean_compound": mean_compound(scores) if scores else None,
                    "polarity_counts": {k: overall[k] for k in ("Positive", "Negative", "Neutral")}},
        "demographics": [{"field": r["field"], "value": r["value"], "tweets": r["tweets"],
                          "mean_compound": r["mean_compound"],
                          "polarity_counts": {"Positive": r["positive"], "Negative": r["negative"],
                                              "Neutral": r["neutral"]}} for r in demo_rows],
        "change_points": [{"series": e["filter"], **bp} for e in seg["series"]
                          for bp in e["breakpoints"]],
        "topics": {"K": topics["K"], "coherence": topics["coherence"]},
    }
    _dump_json(summary, out / "summary.json")
    return {"inputs": {"scores": len(scores), "series": len(series)},
            "outputs": {"distribution_rows": sum(len(c) for c in dist.values()),
                        "demographic_rows": len(demo_rows), "timeseries_rows": len(ts_rows),
                        "segment_rows": len(seg_rows), "keyword_rows": len(kw_rows)}}


RUNNERS = {"filter": run_filter, "score": run_score, "demo": run_demo, "topics": run_topics,
           "series": run_series, "detect": run_detect, "report": run_report}
