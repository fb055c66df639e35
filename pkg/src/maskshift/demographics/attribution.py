"""Assemble per-user profiles from whichever evidence sources are available."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, fields

from .annotations import Annotation
from .college import CollegeModel, predict_college
from .geo import NATIONAL_MEDIAN_INCOME, GeoTable, locate
from .names import classify_ethnicity, group_ethnicity, parse_name
from .party import PartyDirectory, infer_party
from .profile import UNKNOWN, DemographicProfile


@dataclass(frozen=True)
class UserInfo:
    author_id: str
    name: str = ""
    location: str = ""
    following: tuple = ()


def load_users(path) -> dict[str, UserInfo]:
    """JSONL with ``author_id`` and optional ``name``, ``location``, ``following``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                uid = str(obj["author_id"])
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{line_no}: bad user row ({exc})") from None
            out[uid] = UserInfo(uid, obj.get("name") or "", obj.get("location") or "",
                                tuple(str(x) for x in obj.get("following") or ()))
    return out


def load_timelines(path) -> dict[str, list[list[str]]]:
    """JSONL ``{"author_id": ..., "tweets": [[token, ...], ...]}``; one line per user."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                out[str(obj["author_id"])] = [[str(t) for t in tw] for tw in obj["tweets"]]
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{line_no}: bad timeline row ({exc})") from None
    return out


def flatten(tweets) -> list[str]:
    return [t for tw in tweets for t in tw]


def build_profile(author_id: str, *, user: UserInfo | None = None,
                  annotation: Annotation | None = None, timeline=None,
                  college_model: CollegeModel | None = None, override_terms=None,
                  override_min_count: int = 5, name_model=None, geo: GeoTable | None = None,
                  national_median: int = NATIONAL_MEDIAN_INCOME,
                  party_directory: PartyDirectory | None = None) -> DemographicProfile:
    labels = {}
    if annotation is not None:
        labels["age_bucket"] = annotation.age_bucket
        labels["gender"] = annotation.gender
    if college_model is not None and timeline is not None:
        kw = {} if override_terms is None else {"override_terms": override_terms}
        labels["is_college"] = predict_college(college_model, flatten(timeline),
                                               override_min_count=override_min_count, **kw)
    if user is not None and name_model is not None:
        parsed = parse_name(user.name)
        if parsed is not None:
            labels["ethnicity_group"] = group_ethnicity(classify_ethnicity(*parsed, name_model))
    if user is not None and geo is not None:
        where = locate(user.location, geo, national_median)
        if where is not None:
            labels.update(where._asdict())
    if user is not None and party_directory is not None and timeline is not None:
        labels["party"] = infer_party(timeline, user.following, party_directory)
    return DemographicProfile(**labels)


def build_profiles(author_ids, *, users=None, annotations=None, timelines=None, **sources):
    """Profile every author; sources not given leave their fields unknown."""
    users, annotations, timelines = users or {}, annotations or {}, timelines or {}
    return {a: build_profile(a, user=users.get(a), annotation=annotations.get(a),
                             timeline=timelines.get(a), **sources)
            for a in sorted(set(author_ids))}


PROFILE_COLUMNS = ["author_id"] + [f.name for f in fields(DemographicProfile)]


def write_profiles(profiles: dict, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PROFILE_COLUMNS)
        for a in sorted(profiles):
            d = profiles[a].to_dict()
            w.writerow([a] + [d[c] for c in PROFILE_COLUMNS[1:]])


def read_profiles(path) -> dict[str, DemographicProfile]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != PROFILE_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return {row.pop("author_id"): DemographicProfile.from_dict(row) for row in reader}


__all__ = ["UserInfo", "load_users", "load_timelines", "build_profile", "build_profiles",
           "write_profiles", "read_profiles", "PROFILE_COLUMNS", "UNKNOWN"]
