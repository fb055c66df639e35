"""Party affiliation from following lists of known politicians."""
from __future__ import annotations

import csv
from dataclasses import dataclass

from .profile import UNKNOWN, Party


@dataclass(frozen=True)
class PartyDirectory:
    democrat_ids: frozenset
    republican_ids: frozenset
    political_keywords: frozenset

    def __post_init__(self):
        both = self.democrat_ids & self.republican_ids
        if both:
            raise ValueError(f"accounts listed under both parties: {sorted(both)[:5]}")
        object.__setattr__(self, "political_keywords",
                           frozenset(k.lower() for k in self.political_keywords))

    @classmethod
    def load(cls, accounts_path, keywords_path) -> "PartyDirectory":
        dem, rep = set(), set()
        with open(accounts_path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != ["account_id", "party"]:
                raise ValueError(f"{accounts_path}: header must be account_id,party")
            for row in reader:
                party = row["party"].strip()
                if party == Party.DEMOCRAT.value:
                    dem.add(row["account_id"].strip())
                elif party == Party.REPUBLICAN.value:
                    rep.add(row["account_id"].strip())
                else:
                    raise ValueError(f"{accounts_path}:{reader.line_num}: unknown party {party!r}")
        with open(keywords_path, encoding="utf-8") as fh:
            words = {ln.strip().lower() for ln in fh if ln.strip() and not ln.startswith("# ")}
        return cls(frozenset(dem), frozenset(rep), frozenset(words))


def _has_keyword(tweets, keywords) -> bool:
    singles = {k for k in keywords if " " not in k}
    phrases = [k.split() for k in keywords if " " in k]
    for tokens in tweets:
        toks = [t.lower() for t in tokens]
        if singles.intersection(toks):
            return True
        for ph in phrases:
            k = len(ph)
            if any(toks[i:i + k] == ph for i in range(len(toks) - k + 1)):
                return True
    return False


def infer_party(user_tweets, following, directory: PartyDirectory) -> str:
    """Party of the only side the user follows, gated on political vocabulary."""
    if not _has_keyword(user_tweets, directory.political_keywords):
        return UNKNOWN
    follows = set(following)
    dem = bool(follows & directory.democrat_ids)
    rep = bool(follows & directory.republican_ids)
    if dem and not rep:
        return Party.DEMOCRAT.value
    if rep and not dem:
        return Party.REPUBLICAN.value
    return UNKNOWN
