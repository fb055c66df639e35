import csv
import datetime as dt
import filecmp
import json
import math
import shutil
from collections import defaultdict
from importlib import resources

import jsonschema
import pytest

from maskshift import synthetic
from maskshift.cli import main
from maskshift.config import ConfigError, load_config

from .conftest import E2E

SCHEMAS = resources.files("maskshift.schemas")


def schema(name):
    return json.loads(SCHEMAS.joinpath(f"{name}.v1.json").read_text("utf-8"))


def run(*args):
    return main([*args])


@pytest.fixture(scope="module")
def out(tmp_path_factory):
    d = tmp_path_factory.mktemp("run")
    assert run("--config", str(E2E / "config.ini"), "--out", str(d), "run") == 0
    return d


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_fixture_generator_reproduces_committed_files(tmp_path):
    synthetic.generate(tmp_path)
    for f in sorted(p.name for p in E2E.iterdir() if p.is_file()):
        assert (tmp_path / f).read_bytes() == (E2E / f).read_bytes(), f


def test_filter_stats_match_planted_counts(out):
    stats = json.loads((out / "filter" / "stats.json").read_text())
    expected = json.loads((E2E / "expected_filter_stats.json").read_text())
    assert {k: v for k, v in stats.items() if k != "schema_version"} == expected
    jsonschema.validate(stats, schema("filter_stats"))


def test_missing_corpus_fails_before_any_work(tmp_path):
    cfg = (E2E / "config.ini").read_text().replace("corpus = tweets.jsonl", "corpus = gone.jsonl")
    (tmp_path / "config.ini").write_text(cfg)
    for f in E2E.iterdir():
        if f.name != "config.ini" and f.is_file():
            shutil.copy(f, tmp_path / f.name)
    assert run("--config", str(tmp_path / "config.ini"), "--out", str(tmp_path / "o"), "filter") == 1
    assert not (tmp_path / "o").exists()


def test_missing_config_is_usage_error(tmp_path):
    assert run("--config", str(tmp_path / "none.ini"), "filter") == 1
    assert run("frobnicate") == 1


def test_missing_upstream_names_command(tmp_path, capsys):
    assert run("--config", str(E2E / "config.ini"), "--out", str(tmp_path), "detect") == 1
    assert "maskshift series" in capsys.readouterr().err


def test_malformed_corpus_is_data_error(tmp_path, capsys):
    for f in E2E.iterdir():
        if f.is_file():
            shutil.copy(f, tmp_path / f.name)
    with open(tmp_path / "tweets.jsonl", "a") as fh:
        fh.write("{broken\n")
    assert run("--config", str(tmp_path / "config.ini"), "--out", str(tmp_path / "o"), "filter") == 2
    assert "line 1001" in capsys.readouterr().err


def test_rerun_is_byte_identical(out, tmp_path):
    assert run("--config", str(E2E / "config.ini"), "--out", str(tmp_path), "run") == 0
    cmp = filecmp.dircmp(out, tmp_path, ignore=["manifest.json"])

    def same(c):
        assert not c.diff_files and not c.left_only and not c.right_only, c.report()
        _, mismatch, errors = filecmp.cmpfiles(c.left, c.right, c.common_files, shallow=False)
        assert not mismatch and not errors
        for sub in c.subdirs.values():
            same(sub)

    same(cmp)


def test_stage_isolation(out, tmp_path):
    shutil.copytree(out, tmp_path / "o")
    shutil.rmtree(tmp_path / "o" / "series")
    assert run("--config", str(E2E / "config.ini"), "--out", str(tmp_path / "o"), "series") == 0
    for f in (out / "series").iterdir():
        assert (tmp_path / "o" / "series" / f.name).read_bytes() == f.read_bytes()


def test_detect_finds_planted_day_20(out):
    seg = json.loads((out / "detect" / "segmentation.json").read_text())
    jsonschema.validate(seg, schema("segmentation"))
    by = {s["filter"]: s for s in seg["series"]}
    assert [b["index"] for b in by["all"]["breakpoints"]] == [20]
    assert [b["index"] for b in by["party=Republican"]["breakpoints"]] == [20]
    assert by["party=Democrat"]["breakpoints"] == []
    (bp,) = by["all"]["breakpoints"]
    assert bp["date"] == "2020-02-16"
    assert bp["events"] == [{"date": "2020-02-17", "label": "Fixture: state mask guidance reversed",
                             "offset_days": 1}]


def test_republican_series_equals_independent_aggregation(out):
    party = {r["author_id"]: r["party"] for r in read_csv(out / "demo" / "profiles.csv")}
    sums, counts = defaultdict(float), defaultdict(int)
    for r in read_csv(out / "score" / "scores.csv"):
        if party.get(r["author_id"]) == "Republican":
            day = r["created_at"][:10]
            sums[day] += float(r["compound"])
            counts[day] += 1
    rows = read_csv(out / "series" / "series_party-Republican.csv")
    assert rows[0]["date"] == "2020-01-27" and rows[-1]["date"] == "2020-03-06"
    for row in rows:
        n = counts.get(row["date"], 0)
        assert int(row["count"]) == n
        if n:
            assert float(row["value"]) == pytest.approx(sums[row["date"]] / n, abs=1e-12)
            assert row["interpolated_flag"] == "0"
        else:
            assert row["interpolated_flag"] == "1"


def test_topics_report_valid_and_reproducible(out, tmp_path):
    rep = json.loads((out / "topics" / "topics.json").read_text())
    jsonschema.validate(rep, schema("topic_report"))
    assert set(rep["selection"]) == {"2", "3", "4"}
    assert rep["K"] == int(max(rep["selection"], key=lambda k: (rep["selection"][k], -int(k))))
    shutil.copytree(out / "filter", tmp_path / "filter")
    assert run("--config", str(E2E / "config.ini"), "--out", str(tmp_path), "topics") == 0
    assert (tmp_path / "topics" / "topics.json").read_bytes() == (out / "topics" / "topics.json").read_bytes()


def test_demographic_means_match_recomputation(out):
    profiles = {r["author_id"]: r for r in read_csv(out / "demo" / "profiles.csv")}
    groups = defaultdict(list)
    for s in read_csv(out / "score" / "scores.csv"):
        p = profiles[s["author_id"]]
        for field in ("age_bucket", "gender", "party", "region"):
            groups[(field, p[field])].append(float(s["compound"]))
    rows = {(r["field"], r["value"]): r for r in read_csv(out / "report" / "demographic_sentiment.csv")}
    for key, values in groups.items():
        assert float(rows[key]["mean_compound"]) == pytest.approx(math.fsum(values) / len(values), abs=1e-12)
        assert int(rows[key]["tweets"]) == len(values)


def test_summary_validates_against_schema(out):
    summary = json.loads((out / "report" / "summary.json").read_text())
    jsonschema.validate(summary, schema("summary"))
    assert {"series": "all", "index": 20} .items() <= summary["change_points"][0].items()


def test_segments_csv_one_row_per_segment(out):
    seg = json.loads((out / "detect" / "segmentation.json").read_text())
    rows = read_csv(out / "report" / "segments.csv")
    assert len(rows) == sum(len(s["segments"]) for s in seg["series"])
    all_rows = [r for r in rows if r["series"] == "all"]
    assert [(r["start_date"], r["end_date"], r["shade"]) for r in all_rows] == [
        ("2020-01-27", "2020-02-15", "blue"), ("2020-02-16", "2020-03-06", "red")]


def test_report_figures_written(out):
    figs = sorted(p.name for p in (out / "report" / "figures").iterdir())
    assert "timeseries_all.png" in figs and "topic_keywords.png" in figs
    assert all((out / "report" / "figures" / f).read_bytes()[:4] == b"\x89PNG" for f in figs)


def test_manifest_lists_each_stage_once(out):
    manifest = json.loads((out / "manifest.json").read_text())
    jsonschema.validate(manifest, schema("manifest"))
    assert list(manifest["stages"]) == sorted(manifest["stages"])
    assert set(manifest["stages"]) == {"filter", "score", "demo", "topics", "series", "detect", "report"}
    assert manifest["stages"]["filter"]["outputs"]["tweets"] == 885


def test_config_overrides_and_validation(tmp_path):
    cfg = load_config(E2E / "config.ini", out=str(tmp_path), seed=99)
    assert cfg.seed == 99 and cfg.out == tmp_path.resolve()
    assert cfg.paths["corpus"] == (E2E / "tweets.jsonl").resolve()
    assert cfg.stage_seed("topics") != cfg.stage_seed("demo")
    assert load_config(E2E / "config.ini").digest() == load_config(E2E / "config.ini").digest()
    bad = tmp_path / "bad.ini"
    bad.write_text((E2E / "config.ini").read_text().replace("cost = MeanShift", "cost = Wiggle"))
    for f in E2E.iterdir():
        if f.is_file() and f.suffix != ".ini":
            shutil.copy(f, tmp_path / f.name)
    with pytest.raises(ConfigError):
        load_config(bad)
    bad.write_text("[paths]\ncorpus = tweets.jsonl\nterms = terms.txt\n")
    with pytest.raises(ConfigError, match="seed"):
        load_config(bad)


def test_events_outside_window_are_not_matched(out):
    seg = json.loads((out / "detect" / "segmentation.json").read_text())
    for s in seg["series"]:
        for bp in s["breakpoints"]:
            when = dt.date.fromisoformat(bp["date"])
            for e in bp["events"]:
                assert abs((dt.date.fromisoformat(e["date"]) - when).days) <= 3
