"""Valence-aware, rule-based sentiment scoring for tweets.

A lexicon supplies the mean valence of each word (and emoji). Valences are
adjusted by a few local rules (intensifying adverbs, negation, shouting in
capitals, exclamation marks), summed, and squashed into ``(-1, 1)`` by
``s / sqrt(s**2 + alpha)``.
"""
from __future__ import annotations

import csv
import datetime as dt
import enum
import math
import string
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from typing import NamedTuple

from .corpus import default_emoji_re

_PUNCT = string.punctuation

B_INCR = 0.293
B_DECR = -0.293

DEFAULT_BOOSTERS = {
    **dict.fromkeys([
        "absolutely", "amazingly", "awfully", "completely", "considerably", "decidedly",
        "deeply", "effing", "enormously", "entirely", "especially", "exceptionally",
        "extremely", "fabulously", "flipping", "flippin", "fricking", "frickin", "frigging",
        "friggin", "fully", "fucking", "greatly", "hella", "highly", "hugely", "incredibly",
        "intensely", "majorly", "more", "most", "particularly", "purely", "quite", "really",
        "remarkably", "so", "substantially", "thoroughly", "totally", "tremendously",
        "uber", "unbelievably", "unusually", "utterly", "very",
    ], B_INCR),
    **dict.fromkeys([
        "almost", "barely", "hardly", "kinda", "kindof", "less", "little", "marginally",
        "occasionally", "partly", "scarcely", "slightly", "somewhat", "sorta", "sortof",
    ], B_DECR),
}

DEFAULT_NEGATORS = frozenset([
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't",
    "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt",
    "havent", "isnt", "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't",
    "isn't", "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope", "nor",
    "not", "nothing", "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without", "wont",
    "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite",
])


class RowError(ValueError):
    def __init__(self, path, line_no, message):
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


@dataclass(frozen=True)
class Lexicon:
    entries: dict = field(default_factory=dict)
    emoji_entries: dict = field(default_factory=dict)


def _read_valences(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) < 2 or not cols[0].strip():
                raise RowError(path, line_no, "expected 'token<TAB>valence'")
            try:
                val = float(cols[1])
            except ValueError:
                raise RowError(path, line_no, f"valence {cols[1]!r} is not a number") from None
            if not math.isfinite(val):
                raise RowError(path, line_no, f"valence {cols[1]!r} is not finite")
            out[cols[0].strip()] = val
    return out


def load_lexicon(path, emoji_path=None) -> Lexicon:
    """Load word valences (and optionally emoji valences) from TSV files.

    Columns after the second are ignored; a repeated token keeps its last row.
    """
    words = {k.lower(): v for k, v in _read_valences(path).items()}
    emojis = _read_valences(emoji_path) if emoji_path else {}
    return Lexicon(words, emojis)


def default_lexicon() -> Lexicon:
    data = resources.files("maskshift.data")
    with resources.as_file(data / "vader_lexicon.tsv") as words, \
            resources.as_file(data / "emoji_lexicon.tsv") as emojis:
        return load_lexicon(words, emojis)


@dataclass(frozen=True)
class RuleSet:
    boosters: dict = field(default_factory=lambda: dict(DEFAULT_BOOSTERS))
    negators: frozenset = DEFAULT_NEGATORS
    negation_window: int = 3
    caps_boost: float = 0.733
    exclamation_increment: float = 0.292
    negation_factor: float = -0.74
    alpha: float = 15.0

    def __post_init__(self):
        if self.negation_window < 1:
            raise ValueError("negation_window must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not -1.0 < self.negation_factor < 0.0:
            raise ValueError("negation_factor must lie in (-1, 0)")

    @classmethod
    def from_overrides(cls, overrides: dict | None = None) -> "RuleSet":
        """Build from ``key=value`` strings (e.g. a config section).

        ``booster_increment`` rescales the default boosters, keeping signs.
        """
        rules = cls()
        if not overrides:
            return rules
        scalar = {f.name: f.type for f in fields(cls) if f.name not in ("boosters", "negators")}
        changes = {}
        for key, raw in overrides.items():
            if key in scalar:
                changes[key] = int(raw) if key == "negation_window" else float(raw)
            elif key == "booster_increment":
                inc = abs(float(raw))
                changes["boosters"] = {w: math.copysign(inc, v) for w, v in DEFAULT_BOOSTERS.items()}
            else:
                raise KeyError(f"unknown sentiment rule {key!r}")
        return replace(rules, **changes)


@dataclass(frozen=True)
class SentimentScore:
    compound: float
    pos: float
    neu: float
    neg: float


class Polarity(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"


def _words(text: str, emoji_re) -> list[str]:
    spaced = emoji_re.sub(lambda m: f" {m.group(0)} ", text)
    out = []
    for tok in spaced.split():
        if emoji_re.fullmatch(tok):
            out.append(tok)
            continue
        stripped = tok.strip(_PUNCT)
        # keep emoticons such as ":)" intact
        word = tok if len(stripped) <= 2 else stripped
        if len(word) > 1:
            out.append(word)
    return out


def _sign(x: float) -> float:
    return math.copysign(1.0, x) if x else 0.0


def _is_negator(word: str, rules: RuleSet) -> bool:
    w = word.lower()
    return w in rules.negators or w.endswith("n't")


def score(text: str, lex: Lexicon, rules: RuleSet = RuleSet(), emoji_re=None) -> SentimentScore:
    """Score a tweet's sentiment text (emojis and hashtags retained)."""
    emoji_re = emoji_re or default_emoji_re()
    words = _words(text, emoji_re)
    if not words:
        return SentimentScore(0.0, 0.0, 1.0, 0.0)
    alpha_words = [w for w in words if any(c.isalpha() for c in w)]
    n_caps = sum(1 for w in alpha_words if w.isupper())
    caps_differ = 0 < n_caps < len(alpha_words)

    valences = []
    for i, word in enumerate(words):
        lower = word.lower()
        if lower in rules.boosters:
            valences.append(0.0)
            continue
        v = lex.emoji_entries.get(word)
        if v is None:
            v = lex.entries.get(lower)
        if v is None and lower.startswith("#"):
            v = lex.entries.get(lower.lstrip("#"))
        if not v:
            valences.append(0.0)
            continue
        if caps_differ and word.isupper():
            v += math.copysign(rules.caps_boost, v)
        window = words[max(0, i - rules.negation_window):i]
        for prev in window:
            inc = rules.boosters.get(prev.lower())
            if inc:
                v += inc * _sign(v)
        for prev in window:
            if _is_negator(prev, rules):
                v *= rules.negation_factor
        valences.append(v)

    total = math.fsum(valences)
    emphasis = min(text.count("!"), 3) * rules.exclamation_increment
    if total:
        total += math.copysign(emphasis, total)
    compound = total / math.sqrt(total * total + rules.alpha)

    pos = math.fsum(v + 1 for v in valences if v > 0)
    neg = math.fsum(v - 1 for v in valences if v < 0)
    neu = float(sum(1 for v in valences if v == 0))
    if pos > abs(neg):
        pos += emphasis
    elif pos < abs(neg):
        neg -= emphasis
    denom = pos + abs(neg) + neu
    return SentimentScore(compound, pos / denom, neu / denom, abs(neg) / denom)


def polarity(compound: float) -> Polarity:
    """Positive above zero, negative below, neutral only at exactly zero."""
    if not -1.0 <= compound <= 1.0:
        raise ValueError(f"compound {compound!r} outside [-1, 1]")
    if compound > 0:
        return Polarity.POSITIVE
    if compound < 0:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


class EmptyAggregateError(ValueError):
    """Mean of an empty set of scores was requested."""


def mean_compound(scores) -> float:
    values = [getattr(s, "compound", s) for s in scores]
    if not values:
        raise EmptyAggregateError("mean of zero sentiment scores is undefined")
    return math.fsum(values) / len(values)


# -- scored tweets on disk ---------------------------------------------------

class ScoredTweet(NamedTuple):
    id: str
    author_id: str
    created_at: dt.datetime
    compound: float
    pos: float
    neu: float
    neg: float

    @property
    def polarity(self) -> Polarity:
        return polarity(self.compound)


SCORE_COLUMNS = ["id", "author_id", "created_at", "compound", "pos", "neu", "neg", "polarity"]


def write_scores(rows, path) -> int:
    n = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCORE_COLUMNS)
        for r in rows:
            w.writerow([r.id, r.author_id, r.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
                        repr(r.compound), repr(r.pos), repr(r.neu), repr(r.neg), r.polarity.value])
            n += 1
    return n


def read_scores(path) -> list[ScoredTweet]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SCORE_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            when = dt.datetime.strptime(row["created_at"], "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=dt.timezone.utc)
            out.append(ScoredTweet(row["id"], row["author_id"], when, float(row["compound"]),
                                   float(row["pos"]), float(row["neu"]), float(row["neg"])))
    return out
