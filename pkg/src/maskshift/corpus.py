"""Tweet ingestion: parsing, cleaning, topic filtering and hydration."""
from __future__ import annotations

import csv
import datetime as dt
import functools
import json
import logging
import os
import re
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import asdict, dataclass, field
from importlib import resources

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("id", "created_at", "author_id", "full_text", "lang")

URL_RE = re.compile(r"https?://\S+|www\.\S+", re.IGNORECASE)
MENTION_RE = re.compile(r"(?<![\w@])@\w+")
HASHTAG_RE = re.compile(r"(?<![\w#])#\w+")
_WS_RE = re.compile(r"\s+")
_TOKEN_SPLIT_RE = re.compile(r"[^\w']+|_+")


class ParseError(ValueError):
    def __init__(self, message, line_no=None):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)


class FieldError(ParseError):
    def __init__(self, field_name, line_no=None, message=None):
        self.field = field_name
        super().__init__(message or f"missing required field {field_name!r}", line_no)


# -- emoji table ---------------------------------------------------------------

def load_emoji_ranges(path=None) -> list[tuple[int, int]]:
    """Inclusive codepoint ranges from a ``start_hex,end_hex`` CSV."""
    if path is None:
        text = resources.files("maskshift.data").joinpath("emoji_ranges.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    ranges = []
    for row in csv.DictReader(text.splitlines()):
        lo, hi = int(row["start_hex"], 16), int(row["end_hex"], 16)
        if lo > hi:
            raise ValueError(f"bad emoji range {row['start_hex']}-{row['end_hex']}")
        ranges.append((lo, hi))
    return ranges


def emoji_pattern(ranges) -> re.Pattern:
    parts = "".join(f"{chr(lo)}-{chr(hi)}" if lo != hi else re.escape(chr(lo)) for lo, hi in ranges)
    return re.compile(f"[{parts}]")


@functools.lru_cache(maxsize=1)
def default_emoji_re() -> re.Pattern:
    return emoji_pattern(load_emoji_ranges())


# -- records ---------------------------------------------------------------------

@dataclass(frozen=True)
class TweetRecord:
    id: str
    created_at: dt.datetime
    author_id: str
    raw_text: str
    clean_text: str
    sentiment_text: str
    tokens: tuple[str, ...]
    lang: str

    def to_json(self) -> str:
        """Serialize back to the input JSONL schema."""
        return json.dumps({
            "id": self.id,
            "created_at": self.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "author_id": self.author_id,
            "full_text": self.raw_text,
            "lang": self.lang,
        }, ensure_ascii=False, sort_keys=True)


def _sub_to_fixpoint(pattern, text):
    # removing one match can expose another ("#a#b" -> " #b")
    while True:
        new = pattern.sub(" ", text)
        if new == text:
            return text
        text = new


def _squash(text):
    return _WS_RE.sub(" ", text).strip()


def tokenize(text: str) -> list[str]:
    """Lowercase runs of letters, digits and inner apostrophes."""
    out = []
    for tok in _TOKEN_SPLIT_RE.split(text.lower()):
        tok = tok.strip("'")
        if tok:
            out.append(tok)
    return out


def clean(raw_text: str, emoji_re: re.Pattern | None = None) -> tuple[str, str, list[str]]:
    """Return ``(clean_text, sentiment_text, tokens)`` for one tweet.

    ``clean_text`` drops URLs, @-mentions, hashtags and emojis;
    ``sentiment_text`` drops only URLs and mentions. Whitespace is collapsed
    in both.
    """
    emoji_re = emoji_re or default_emoji_re()
    text = raw_text
    while True:
        before = text
        text = _sub_to_fixpoint(URL_RE, text)
        text = _sub_to_fixpoint(MENTION_RE, text)
        if text == before:
            break
    sentiment_text = _squash(text)
    while True:
        before = text
        for pat in (emoji_re, URL_RE, MENTION_RE, HASHTAG_RE):
            text = _sub_to_fixpoint(pat, text)
        if text == before:
            break
    clean_text = _squash(text)
    return clean_text, sentiment_text, tokenize(clean_text)


def _parse_time(value: str) -> dt.datetime:
    try:
        ts = dt.datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        # legacy v1.1 payloads: "Wed Oct 10 20:19:24 +0000 2018"
        ts = dt.datetime.strptime(value, "%a %b %d %H:%M:%S %z %Y")
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=dt.timezone.utc)
    return ts.astimezone(dt.timezone.utc)


def record_from_dict(obj: dict, line_no=None, emoji_re=None) -> TweetRecord:
    if not isinstance(obj, dict):
        raise ParseError("record is not a JSON object", line_no)
    for name in REQUIRED_FIELDS:
        if name not in obj or obj[name] is None:
            raise FieldError(name, line_no)
        if not isinstance(obj[name], (str, int)) or isinstance(obj[name], bool):
            raise FieldError(name, line_no, f"field {name!r} must be a string")
    try:
        created = _parse_time(str(obj["created_at"]))
    except ValueError:
        raise FieldError("created_at", line_no, f"unparseable created_at {obj['created_at']!r}") from None
    raw = str(obj["full_text"])
    clean_text, sentiment_text, tokens = clean(raw, emoji_re)
    return TweetRecord(id=str(obj["id"]), created_at=created, author_id=str(obj["author_id"]),
                       raw_text=raw, clean_text=clean_text, sentiment_text=sentiment_text,
                       tokens=tuple(tokens), lang=str(obj["lang"]))


def parse_record(line: bytes | str, line_no: int | None = None, emoji_re=None) -> TweetRecord:
    """Parse one JSONL line into a :class:`TweetRecord`."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8: {exc}", line_no) from None
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line_no) from None
    return record_from_dict(obj, line_no, emoji_re)


def read_corpus(path, emoji_re=None):
    """Yield records from a JSONL file, skipping blank lines."""
    with open(path, "rb") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.strip():
                yield parse_record(line, line_no, emoji_re)


def write_corpus(records, path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
            n += 1
    return n


# -- topic filter -----------------------------------------------------------------

@dataclass(frozen=True)
class TermDictionary:
    terms: frozenset = frozenset()
    hashtags: frozenset = frozenset()

    def __post_init__(self):
        terms = frozenset(_squash(t.lower()) for t in self.terms)
        tags = frozenset(t.strip().lower() for t in self.hashtags)
        if "" in terms or "" in tags or "#" in tags:
            raise ValueError("empty dictionary entry")
        if any(not t.startswith("#") for t in tags):
            raise ValueError("hashtags must start with '#'")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "hashtags", tags)

    def __len__(self):
        return len(self.terms) + len(self.hashtags)

    @functools.cached_property
    def pattern(self) -> re.Pattern:
        alts = []
        # longest first so "face mask" wins over "mask" inside the alternation
        for term in sorted(self.terms, key=lambda t: (-len(t), t)):
            body = r"\s+".join(re.escape(w) for w in term.split(" "))
            alts.append(rf"(?<!\w){body}(?:e?s)?(?!\w)")
        for tag in sorted(self.hashtags, key=lambda t: (-len(t), t)):
            alts.append(rf"(?<![\w#]){re.escape(tag)}(?!\w)")
        return re.compile("|".join(alts) if alts else r"(?!x)x")


def load_terms(path) -> TermDictionary:
    """One term or ``#hashtag`` per line; ``# `` starts a comment line."""
    terms, tags = set(), set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("# ") or line == "#":
                continue
            (tags if line.startswith("#") else terms).add(line.lower())
    return TermDictionary(frozenset(terms), frozenset(tags))


def matches_topic(record: TweetRecord | str, terms: TermDictionary) -> bool:
    text = record if isinstance(record, str) else record.raw_text
    return terms.pattern.search(text.lower()) is not None


@dataclass
class CorpusStats:
    read: int = 0
    kept: int = 0
    dropped_language: int = 0
    dropped_no_match: int = 0
    dropped_deleted: int = 0
    dropped_org: int = 0

    def dropped(self) -> int:
        return self.dropped_language + self.dropped_no_match + self.dropped_deleted + self.dropped_org

    def to_dict(self) -> dict:
        return asdict(self)


def load_org_scores(path) -> dict[str, float]:
    """``author_id,org_probability`` CSV."""
    scores = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["author_id", "org_probability"]:
            raise ValueError(f"{path}: expected header 'author_id,org_probability'")
        for line_no, row in enumerate(reader, start=2):
            p = float(row["org_probability"])
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{path}:{line_no}: org_probability {p} outside [0, 1]")
            scores[row["author_id"]] = p
    return scores


def filter_corpus(records, terms: TermDictionary, lang: str = "en",
                  org_scores: dict | None = None, org_threshold: float = 0.5):
    """Keep English, on-topic tweets from accounts unlikely to be organizations.

    ``records`` may contain ``None`` for tweets that hydration could not
    recover; those are counted as deleted. Returns ``(kept, stats)`` with the
    input order preserved.
    """
    org_scores = org_scores or {}
    stats = CorpusStats()
    kept = []
    for r in records:
        stats.read += 1
        if r is None:
            stats.dropped_deleted += 1
        elif r.lang != lang:
            stats.dropped_language += 1
        elif not matches_topic(r, terms):
            stats.dropped_no_match += 1
        elif r.author_id in org_scores and org_scores[r.author_id] >= org_threshold:
            stats.dropped_org += 1
        else:
            kept.append(r)
            stats.kept += 1
    return kept, stats


# -- hydration ----------------------------------------------------------------

class HydrationError(RuntimeError):
    pass


class TransportError(HydrationError):
    """Network or server failure; worth retrying."""


class CredentialError(HydrationError):
    """The backend rejected our credentials; retrying will not help."""


class RateLimiter:
    """Minimum spacing between requests, shared by every client holding it."""

    def __init__(self, min_interval: float = 1.0, clock=time.monotonic, sleep=time.sleep):
        self.min_interval = min_interval
        self._clock, self._sleep = clock, sleep
        self._next = 0.0
        self._lock = threading.Lock()

    def acquire(self):
        with self._lock:
            now = self._clock()
            if now < self._next:
                self._sleep(self._next - now)
                now = self._next
            self._next = now + self.min_interval


class FixtureBackend:
    """Hydration backend over a local JSONL file of full tweet objects."""

    def __init__(self, path):
        self._store = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    obj = json.loads(line)
                    self._store[str(obj["id"])] = obj

    def lookup(self, ids):
        return {i: self._store[i] for i in ids if i in self._store}


class HttpBackend:
    """Batch lookup over HTTP: ``GET {endpoint}?ids=a,b,c`` with a bearer token.

    The response body is ``{"data": [tweet, ...]}``; ids missing from
    ``data`` are treated as deleted.
    """

    ENDPOINT_VAR = "MASKSHIFT_HYDRATE_ENDPOINT"
    TOKEN_VAR = "MASKSHIFT_HYDRATE_TOKEN"

    def __init__(self, endpoint: str, token: str, limiter: RateLimiter | None = None,
                 timeout: float = 30.0):
        self.endpoint, self.token, self.timeout = endpoint, token, timeout
        self.limiter = limiter or RateLimiter()

    @classmethod
    def from_env(cls, limiter=None):
        endpoint, token = os.environ.get(cls.ENDPOINT_VAR), os.environ.get(cls.TOKEN_VAR)
        if not endpoint or not token:
            raise CredentialError(f"set {cls.ENDPOINT_VAR} and {cls.TOKEN_VAR}")
        return cls(endpoint, token, limiter)

    def lookup(self, ids):
        self.limiter.acquire()
        url = f"{self.endpoint}?{urllib.parse.urlencode({'ids': ','.join(ids)})}"
        req = urllib.request.Request(url, headers={"Authorization": f"Bearer {self.token}"})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.load(resp)
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise CredentialError(f"hydration endpoint refused credentials ({exc.code})") from None
            raise TransportError(f"HTTP {exc.code}") from None
        except (urllib.error.URLError, TimeoutError, ConnectionError) as exc:
            raise TransportError(str(exc)) from None
        return {str(t["id"]): t for t in payload.get("data", [])}


@dataclass
class RetryPolicy:
    attempts: int = 3
    initial_backoff: float = 1.0
    sleep: object = field(default=time.sleep, repr=False)


def hydrate(ids, client, batch_size: int = 100, retry: RetryPolicy | None = None) -> dict:
    """Look up tweet ids; every id maps to a raw object or ``None`` (deleted).

    Transport failures are retried with exponential backoff; credential
    failures propagate immediately.
    """
    retry = retry or RetryPolicy()
    ids = [str(i) for i in ids]
    out = {}
    for start in range(0, len(ids), batch_size):
        batch = ids[start:start + batch_size]
        delay = retry.initial_backoff
        for attempt in range(1, retry.attempts + 1):
            try:
                found = client.lookup(batch)
                break
            except TransportError as exc:
                if attempt == retry.attempts:
                    raise
                logger.warning("hydration attempt %d failed (%s); retrying in %.1fs", attempt, exc, delay)
                retry.sleep(delay)
                delay *= 2
        for i in batch:
            out[i] = found.get(i)
    return out
