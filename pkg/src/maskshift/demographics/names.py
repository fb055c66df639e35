"""Display-name parsing and name-based ethnicity profiling.

The classifier is pluggable: anything with a ``profiles`` tuple and a
``predict_proba(first, last)`` method returning one probability per profile
can be passed to :func:`classify_ethnicity`. :class:`NameModel` is the
bundled reference, a multinomial naive Bayes over character n-grams.
"""
from __future__ import annotations

import csv
import json
import math
import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

from .profile import UNKNOWN

DEFAULT_TITLES = frozenset({
    "mr", "mrs", "ms", "miss", "mx", "dr", "prof", "professor", "sir", "dame", "lord", "lady",
    "rev", "fr", "sr", "jr", "ii", "iii", "iv", "phd", "md", "esq", "hon", "sen", "rep", "gov",
})
MAX_TOKENS = 4
MAX_TOKEN_LEN = 20

MODEL_FORMAT = "maskshift-name-nb"
MODEL_VERSION = 1


class ConfigurationError(RuntimeError):
    pass


def _fold(token: str) -> str:
    # strip accents so "José" and "Jose" share n-grams
    decomposed = unicodedata.normalize("NFKD", token)
    return "".join(c for c in decomposed if not unicodedata.combining(c)).lower()


def parse_name(display_name: str, titles=DEFAULT_TITLES, max_tokens: int = MAX_TOKENS,
               max_len: int = MAX_TOKEN_LEN) -> tuple[str, str] | None:
    """Return ``(first, last)`` in lowercase, or ``None`` if the name is rejected.

    Titles and suffixes are dropped, as are tokens with no letters (emoji,
    digits). Middle tokens are ignored.
    """
    words = []
    for raw in display_name.replace(",", " ").split():
        word = _fold(raw).strip(".'-")
        if not any(c.isalpha() for c in word):
            continue
        if word.replace(".", "") in titles:
            continue
        words.append(word)
    if len(words) < 2 or len(words) > max_tokens:
        return None
    if any(len(w) > max_len for w in words):
        return None
    if not all(c.isalpha() or c in ".'-" for w in words for c in w):
        return None
    return words[0], words[-1]


def load_profile_groups(path=None) -> dict[str, str]:
    """Ordered ``profile -> group`` mapping from a ``profile,group`` CSV."""
    if path is None:
        text = resources.files("maskshift.data").joinpath("ethnicity_groups.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return {row["profile"]: row["group"] for row in csv.DictReader(text.splitlines())}


PROFILES = tuple(load_profile_groups())


class NameClassifier(Protocol):
    profiles: tuple

    def predict_proba(self, first: str, last: str) -> list[float]: ...


def name_features(first: str, last: str, orders=(2, 3, 4)) -> Counter:
    feats = Counter()
    for tag, part in (("f", first), ("l", last)):
        padded = f"^{_fold(part)}$"
        for n in orders:
            for i in range(len(padded) - n + 1):
                feats[f"{tag}:{padded[i:i + n]}"] += 1
    return feats


@dataclass
class NameModel:
    profiles: tuple
    log_prior: dict
    log_likelihood: dict      # profile -> {feature: log p}
    log_unseen: dict          # profile -> log p for a vocabulary feature absent in that class
    vocabulary: frozenset
    orders: tuple = (2, 3, 4)

    @classmethod
    def fit(cls, examples, profiles=PROFILES, alpha: float = 1.0, orders=(2, 3, 4)) -> "NameModel":
        """Fit from ``(first, last, profile)`` triples with Laplace smoothing."""
        counts = {p: Counter() for p in profiles}
        docs = Counter()
        for first, last, profile in examples:
            if profile not in counts:
                raise ValueError(f"unknown profile {profile!r}")
            counts[profile].update(name_features(first, last, orders))
            docs[profile] += 1
        if not sum(docs.values()):
            raise ValueError("no training names")
        vocab = frozenset(f for c in counts.values() for f in c)
        total_docs = sum(docs.values())
        log_prior, log_lik, log_unseen = {}, {}, {}
        for p in profiles:
            denom = sum(counts[p].values()) + alpha * len(vocab)
            log_prior[p] = math.log((docs[p] + alpha) / (total_docs + alpha * len(profiles)))
            log_lik[p] = {f: math.log((c + alpha) / denom) for f, c in counts[p].items()}
            log_unseen[p] = math.log(alpha / denom)
        return cls(tuple(profiles), log_prior, log_lik, log_unseen, vocab, tuple(orders))

    def predict_proba(self, first: str, last: str) -> list[float]:
        feats = name_features(first, last, self.orders)
        scores = []
        for p in self.profiles:
            lik, unseen = self.log_likelihood[p], self.log_unseen[p]
            s = self.log_prior[p]
            for f, k in feats.items():
                if f in self.vocabulary:
                    s += k * lik.get(f, unseen)
            scores.append(s)
        top = max(scores)
        weights = [math.exp(s - top) for s in scores]
        z = math.fsum(weights)
        return [w / z for w in weights]

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT, "version": MODEL_VERSION, "orders": list(self.orders),
            "profiles": list(self.profiles), "log_prior": self.log_prior,
            "log_likelihood": {p: dict(sorted(v.items())) for p, v in self.log_likelihood.items()},
            "log_unseen": self.log_unseen, "vocabulary": sorted(self.vocabulary),
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, ensure_ascii=False)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "NameModel":
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
        if d.get("format") != MODEL_FORMAT or d.get("version") != MODEL_VERSION:
            raise ConfigurationError(
                f"{path}: expected {MODEL_FORMAT} v{MODEL_VERSION}, got {d.get('format')} v{d.get('version')}")
        return cls(tuple(d["profiles"]), d["log_prior"], d["log_likelihood"], d["log_unseen"],
                   frozenset(d["vocabulary"]), tuple(d["orders"]))


def read_labeled_names(path=None) -> list[tuple[str, str, str]]:
    """``(first, last, profile)`` triples from a ``full_name,profile`` CSV."""
    if path is None:
        text = resources.files("maskshift.data").joinpath("labeled_names.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    out = []
    for row in csv.DictReader(text.splitlines()):
        parsed = parse_name(row["full_name"])
        if parsed is not None:
            out.append((*parsed, row["profile"]))
    return out


def reference_model() -> NameModel:
    return NameModel.fit(read_labeled_names())


def classify_ethnicity(first: str, last: str, model: NameClassifier | None) -> dict[str, float]:
    if model is None:
        raise ConfigurationError("no name-ethnicity model configured")
    probs = [float(p) for p in model.predict_proba(first, last)]
    if len(probs) != len(model.profiles):
        raise ConfigurationError("model returned a distribution of the wrong length")
    z = math.fsum(probs)
    return {p: v / z for p, v in zip(model.profiles, probs)}


def group_ethnicity(distribution: dict[str, float], groups: dict[str, str] | None = None) -> str:
    """Sum profile mass per group and return the heaviest group; ties give unknown."""
    groups = groups or load_profile_groups()
    mass = {}
    for profile, p in distribution.items():
        if profile not in groups:
            raise ValueError(f"profile {profile!r} has no group")
        mass.setdefault(groups[profile], []).append(p)
    totals = {g: math.fsum(v) for g, v in mass.items()}
    best = max(totals.values())
    leaders = [g for g, v in totals.items() if math.isclose(v, best, rel_tol=1e-12, abs_tol=0.0)]
    return leaders[0] if len(leaders) == 1 else UNKNOWN
