"""Resolve free-text profile locations to region, metro class and income bracket."""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

from .profile import UNKNOWN, IncomeBracket, MetroClass

NATIONAL_MEDIAN_INCOME = 63179
METRO_CODES = frozenset({1, 2, 3})

_COUNTRY_SUFFIXES = {"usa", "us", "u.s.", "u.s.a.", "united states", "united states of america"}


def _norm(text: str) -> str:
    return " ".join(text.lower().replace(".", " ").split())


def _read_rows(path, required):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(required) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return list(reader)


def _bundled_rows(name):
    text = resources.files("maskshift.data").joinpath(name).read_text("utf-8")
    return list(csv.DictReader(text.splitlines()))


class LocationResult(NamedTuple):
    region: str
    metro_class: str
    income_bracket: str


@dataclass(frozen=True)
class GeoTable:
    """Lookup tables keyed on normalized ``(city, state)`` pairs."""

    cities: dict                     # (city, ST) -> (zip, county_fips or None)
    incomes: dict                    # zip -> median household income (int USD)
    rucc: dict                       # county_fips -> rucc code 1..9
    regions: dict                    # ST -> region
    state_names: dict = field(default_factory=dict)   # lowercase name -> ST

    def __post_init__(self):
        for fips, code in self.rucc.items():
            if code not in range(1, 10):
                raise ValueError(f"county {fips}: rucc code {code} outside 1..9")
        for z, inc in self.incomes.items():
            if inc <= 0:
                raise ValueError(f"zip {z}: income {inc} is not positive")

    @classmethod
    def load(cls, cities_path, incomes_path, rucc_path, regions_path=None) -> "GeoTable":
        cities = {}
        for row in _read_rows(cities_path, ("city", "state", "zip")):
            key = (_norm(row["city"]), row["state"].strip().upper())
            cities[key] = (row["zip"].strip(), (row.get("county_fips") or "").strip() or None)
        incomes = {r["zip"].strip(): int(float(r["median_income"]))
                   for r in _read_rows(incomes_path, ("zip", "median_income"))}
        rucc = {r["county_fips"].strip(): int(r["rucc_code"])
                for r in _read_rows(rucc_path, ("county_fips", "state", "rucc_code"))}
        region_rows = _read_rows(regions_path, ("state", "region")) if regions_path else _bundled_rows("regions.csv")
        regions = {r["state"].strip().upper(): r["region"].strip() for r in region_rows}
        names = {r["name"]: r["state"] for r in _bundled_rows("state_names.csv")}
        return cls(cities, incomes, rucc, regions, names)

    def state_code(self, text: str) -> str | None:
        t = _norm(text)
        if t.upper() in self.regions:
            return t.upper()
        return self.state_names.get(t)


def income_bracket(median: int, national_median: int = NATIONAL_MEDIAN_INCOME) -> str:
    if median > national_median:
        return IncomeBracket.ABOVE.value
    if median == national_median:
        return IncomeBracket.EQUAL.value
    return IncomeBracket.BELOW.value


def metro_class(rucc_code: int) -> str:
    if rucc_code not in range(1, 10):
        raise ValueError(f"rucc code {rucc_code} outside 1..9")
    return (MetroClass.METRO if rucc_code in METRO_CODES else MetroClass.NON_METRO).value


def _split_location(text: str):
    parts = [p.strip() for p in re.split(r"[,/|]", text) if p.strip()]
    while parts and _norm(parts[-1]) in _COUNTRY_SUFFIXES:
        parts.pop()
    if len(parts) >= 2:
        return parts[-2], parts[-1]
    return None


def locate(location: str, geo: GeoTable,
           national_median: int = NATIONAL_MEDIAN_INCOME) -> LocationResult | None:
    """Match ``"City, ST"`` (or a full state name) against the geo tables.

    Returns ``None`` when the city is not listed; fields whose table lacks
    an entry are ``"unknown"``.
    """
    if national_median <= 0:
        raise ValueError("national_median must be positive")
    split = _split_location(location or "")
    if split is None:
        return None
    city, state_text = split
    state = geo.state_code(state_text)
    if state is None:
        return None
    hit = geo.cities.get((_norm(city), state))
    if hit is None:
        return None
    zip_code, county = hit
    region = geo.regions.get(state, UNKNOWN)
    code = geo.rucc.get(county) if county else None
    metro = metro_class(code) if code is not None else UNKNOWN
    median = geo.incomes.get(zip_code)
    bracket = income_bracket(median, national_median) if median is not None else UNKNOWN
    return LocationResult(region, metro, bracket)
