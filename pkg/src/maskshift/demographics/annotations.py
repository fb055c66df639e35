"""Ingest externally computed age, gender and organization scores."""
from __future__ import annotations

import csv
import logging
import math
from typing import NamedTuple

from .profile import FIELD_VALUES, normalize_age

logger = logging.getLogger(__name__)

ANNOTATION_HEADER = ["author_id", "age_bucket", "gender", "org_probability"]


class FormatError(ValueError):
    pass


class Annotation(NamedTuple):
    age_bucket: str
    gender: str
    org_probability: float


def _parse_row(row):
    if len(row) != 4:
        raise ValueError(f"expected 4 columns, got {len(row)}")
    author, age_raw, gender_raw, org_raw = (c.strip() for c in row)
    if not author:
        raise ValueError("empty author_id")
    age = normalize_age(age_raw)
    if age is None:
        raise ValueError(f"age_bucket {age_raw!r} is not a bucket")
    gender = gender_raw.lower()
    if gender not in FIELD_VALUES["gender"]:
        raise ValueError(f"gender {gender_raw!r} is not male/female")
    try:
        org = float(org_raw)
    except ValueError:
        raise ValueError(f"org_probability {org_raw!r} is not a number") from None
    if not (math.isfinite(org) and 0.0 <= org <= 1.0):
        raise ValueError(f"org_probability {org_raw!r} outside [0, 1]")
    return author, Annotation(age, gender, org)


def ingest_annotations(path, errors: list | None = None) -> dict[str, Annotation]:
    """Read ``author_id,age_bucket,gender,org_probability`` rows.

    Invalid rows are logged with their line number and skipped; pass a list
    as ``errors`` to collect ``(line_no, message)`` pairs as well.
    """
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ANNOTATION_HEADER:
            raise FormatError(f"{path}: header must be {','.join(ANNOTATION_HEADER)}, got {header}")
        for row in reader:
            if not row or not any(c.strip() for c in row):
                continue
            try:
                author, ann = _parse_row(row)
            except ValueError as exc:
                logger.warning("%s:%d: skipped annotation row: %s", path, reader.line_num, exc)
                if errors is not None:
                    errors.append((reader.line_num, str(exc)))
                continue
            out[author] = ann
    return out


def org_scores(annotations: dict[str, Annotation]) -> dict[str, float]:
    return {a: ann.org_probability for a, ann in annotations.items()}
