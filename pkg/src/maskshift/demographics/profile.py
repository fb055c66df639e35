"""Per-user demographic labels and filters over them."""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, fields, replace

UNKNOWN = "unknown"


class AgeBucket(str, enum.Enum):
    UNDER_19 = "≤18"
    AGE_19_29 = "19-29"
    AGE_30_39 = "30-39"
    OVER_39 = "≥40"


class Gender(str, enum.Enum):
    MALE = "male"
    FEMALE = "female"


class EthnicityGroup(str, enum.Enum):
    EUROPEAN = "European"
    HISPANIC = "Hispanic"
    AFRICAN = "African"
    EAST_ASIAN = "EastAsian"
    INDIAN = "Indian"


class Region(str, enum.Enum):
    NORTHEAST = "Northeast"
    MIDWEST = "Midwest"
    SOUTH = "South"
    WEST = "West"


class MetroClass(str, enum.Enum):
    METRO = "Metro"
    NON_METRO = "NonMetro"


class IncomeBracket(str, enum.Enum):
    ABOVE = "Above"
    EQUAL = "Equal"
    BELOW = "Below"


class Party(str, enum.Enum):
    DEMOCRAT = "Democrat"
    REPUBLICAN = "Republican"


# legal values per field; the college flag is spelled "true"/"false"
FIELD_VALUES = {
    "age_bucket": tuple(e.value for e in AgeBucket),
    "gender": tuple(e.value for e in Gender),
    "is_college": ("true", "false"),
    "ethnicity_group": tuple(e.value for e in EthnicityGroup),
    "region": tuple(e.value for e in Region),
    "metro_class": tuple(e.value for e in MetroClass),
    "income_bracket": tuple(e.value for e in IncomeBracket),
    "party": tuple(e.value for e in Party),
}

_AGE_ALIASES = {"<=18": "≤18", ">=40": "≥40", "40+": "≥40"}


def normalize_age(raw: str) -> str | None:
    v = raw.strip()
    v = _AGE_ALIASES.get(v, v)
    return v if v in FIELD_VALUES["age_bucket"] else None


def _value(v) -> str:
    if v is None:
        return UNKNOWN
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, enum.Enum):
        return v.value
    return str(v)


@dataclass(frozen=True)
class DemographicProfile:
    """Every field holds a legal label or ``"unknown"``; never ``None``."""

    age_bucket: str = UNKNOWN
    gender: str = UNKNOWN
    is_college: str = UNKNOWN
    ethnicity_group: str = UNKNOWN
    region: str = UNKNOWN
    metro_class: str = UNKNOWN
    income_bracket: str = UNKNOWN
    party: str = UNKNOWN

    def __post_init__(self):
        for f in fields(self):
            v = _value(getattr(self, f.name))
            if f.name == "age_bucket" and v != UNKNOWN:
                v = normalize_age(v) or v
            if v != UNKNOWN and v not in FIELD_VALUES[f.name]:
                raise ValueError(f"{f.name}={v!r} is not one of {FIELD_VALUES[f.name]}")
            object.__setattr__(self, f.name, v)

    def with_(self, **changes) -> "DemographicProfile":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DemographicProfile":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


@dataclass(frozen=True)
class ProfileFilter:
    """Conjunction of ``field=value`` constraints; empty means everyone."""

    constraints: tuple = ()

    @property
    def label(self) -> str:
        if not self.constraints:
            return "all"
        return ",".join(f"{k}={v}" for k, v in self.constraints)

    def __call__(self, profile: DemographicProfile | None) -> bool:
        if not self.constraints:
            return True
        if profile is None:
            return False
        return all(getattr(profile, k) == v for k, v in self.constraints)


def parse_filter(text: str) -> ProfileFilter:
    """Parse ``"party=Republican,region=South"`` or ``"all"``.

    Values are matched case-insensitively against the legal labels.
    """
    text = text.strip()
    if text in ("", "all"):
        return ProfileFilter()
    out = []
    for part in text.split(","):
        key, sep, raw = part.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or key not in FIELD_VALUES:
            raise ValueError(f"bad filter term {part!r}; fields are {sorted(FIELD_VALUES)}")
        legal = FIELD_VALUES[key] + (UNKNOWN,)
        if key == "age_bucket":
            raw = _AGE_ALIASES.get(raw, raw)
        match = next((v for v in legal if v.lower() == raw.lower()), None)
        if match is None:
            raise ValueError(f"{key}={raw!r} is not one of {legal}")
        out.append((key, match))
    return ProfileFilter(tuple(out))
