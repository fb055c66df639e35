import json
import re

import pytest
from hypothesis import given, settings, strategies as st

from maskshift import corpus
from maskshift.corpus import (CorpusStats, CredentialError, FieldError, FixtureBackend, ParseError,
                              RateLimiter, RetryPolicy, TermDictionary, TransportError, clean,
                              filter_corpus, hydrate, load_org_scores, load_terms, matches_topic,
                              parse_record, read_corpus)

from .conftest import E2E

MASK_TERMS = TermDictionary(frozenset({"face mask", "mask", "n95"}), frozenset({"#facemask"}))


def line(**overrides):
    obj = {"id": "1", "created_at": "2020-04-03T10:00:00Z", "author_id": "u1",
           "full_text": "Wear a mask! https://t.co/x", "lang": "en"}
    obj.update(overrides)
    return json.dumps(obj).encode()


# -- parsing -------------------------------------------------------------------

def test_parse_record_derives_clean_text():
    r = parse_record(line())
    assert r.clean_text == "Wear a mask!"
    assert r.raw_text == "Wear a mask! https://t.co/x"
    assert r.tokens == ("wear", "a", "mask")
    assert r.created_at.isoformat() == "2020-04-03T10:00:00+00:00"


def test_missing_id_names_the_field():
    obj = json.loads(line())
    del obj["id"]
    with pytest.raises(FieldError) as err:
        parse_record(json.dumps(obj), line_no=7)
    assert err.value.field == "id"
    assert err.value.line_no == 7


def test_malformed_line_carries_line_number():
    with pytest.raises(ParseError) as err:
        parse_record(b"{not json", line_no=42)
    assert err.value.line_no == 42
    assert "42" in str(err.value)


def test_legacy_timestamp_accepted():
    r = parse_record(line(created_at="Fri Apr 03 10:00:00 +0000 2020"))
    assert r.created_at.isoformat() == "2020-04-03T10:00:00+00:00"


def test_unknown_keys_ignored_and_round_trip():
    r = parse_record(line(extra={"nested": True}, id=99))
    assert r.id == "99"
    assert parse_record(r.to_json()) == r


def test_bundled_fixture_parses_in_order():
    records = list(read_corpus(E2E / "tweets.jsonl"))
    ids = [json.loads(x)["id"] for x in (E2E / "tweets.jsonl").read_text(encoding="utf-8").splitlines()]
    assert len(records) == 1000
    assert [r.id for r in records] == ids


# -- cleaning ------------------------------------------------------------------

def test_clean_keeps_emoji_and_hashtag_for_sentiment():
    clean_text, sentiment_text, tokens = clean("STOP BUYING MASKS! #covid 😷")
    assert clean_text == "STOP BUYING MASKS!"
    assert sentiment_text == "STOP BUYING MASKS! #covid 😷"
    assert tokens == ["stop", "buying", "masks"]


def test_clean_empty():
    assert clean("") == ("", "", [])


def test_clean_strips_mentions_and_urls():
    clean_text, sentiment_text, tokens = clean("@cdc masks work https://a.b")
    assert clean_text == "masks work"
    assert sentiment_text == "masks work"
    assert tokens == ["masks", "work"]


def test_tokens_keep_inner_apostrophes():
    assert clean("Don't   'touch' your_face!!")[2] == ["don't", "touch", "your", "face"]


def test_emoji_modifiers_and_joiners_are_removed():
    assert clean("ok 👍🏽 fine 👩‍⚕️ done")[0] == "ok fine done"


tweet_text = st.lists(st.sampled_from(list("ab #@:/.'!_ \n") + ["http://x.y/", "😷", "👍🏽", "é"]),
                      max_size=40).map("".join)


@settings(max_examples=300, deadline=None)
@given(tweet_text)
def test_clean_invariants(raw):
    clean_text, sentiment_text, tokens = clean(raw)
    for pat in (corpus.URL_RE, corpus.MENTION_RE, corpus.HASHTAG_RE, corpus.default_emoji_re()):
        assert not pat.search(clean_text)
    assert all(tokens)
    assert tokens == corpus.tokenize(clean_text)
    # only URLs and mentions differ between raw and sentiment text
    assert sentiment_text == " ".join(_strip_all(raw).split())
    # idempotence
    assert clean(clean_text) == (clean_text, clean_text, tokens)


def _strip_all(raw):
    text = raw
    while True:
        before = text
        text = corpus.MENTION_RE.sub(" ", corpus.URL_RE.sub(" ", text))
        if text == before:
            return text


# -- topic matching --------------------------------------------------------------

def test_plural_of_phrase_matches():
    assert matches_topic("I hate face masks", MASK_TERMS)


def test_word_boundary_excludes_bitmask():
    only_mask = TermDictionary(frozenset({"mask"}))
    assert not matches_topic("bitmask operations in code", only_mask)
    assert not matches_topic("unmasked", only_mask)
    assert matches_topic("MASKES? masks! mask.", only_mask)


def test_hashtag_match_is_case_folded():
    tags = TermDictionary(hashtags=frozenset({"#facemask"}))
    assert matches_topic("#FaceMask required", tags)
    assert not matches_topic("#FaceMasks4All", tags)
    assert not matches_topic("facemask", tags)


def test_load_terms(tmp_path):
    p = tmp_path / "terms.txt"
    p.write_text("# comment line\nFace Mask\nmask\n\n#FaceMask\n")
    d = load_terms(p)
    assert d.terms == {"face mask", "mask"}
    assert d.hashtags == {"#facemask"}


def test_term_dictionary_rejects_empty():
    with pytest.raises(ValueError):
        TermDictionary(frozenset({"  "}))


# -- filtering ---------------------------------------------------------------------

def make(i, text, author="u", lang="en"):
    return parse_record(line(id=str(i), full_text=text, author_id=author, lang=lang))


def test_filter_enumerated_fixture():
    texts = ["mask up", "nothing here", "n95 shortage", "face masks work", "lunch",
             "weather", "sports", "#facemask", "music", "movies"]
    records = [make(i, t, author="org" if i == 3 else f"u{i}") for i, t in enumerate(texts)]
    kept, stats = filter_corpus(records, MASK_TERMS, org_scores={"org": 0.9, "u0": 0.1},
                                org_threshold=0.5)
    assert [r.id for r in kept] == ["0", "2", "7"]
    assert stats == CorpusStats(read=10, kept=3, dropped_no_match=6, dropped_org=1)


def test_filter_empty_stream():
    kept, stats = filter_corpus([], MASK_TERMS)
    assert kept == [] and stats == CorpusStats()


def test_no_org_scores_means_no_org_drops():
    records = [make(i, "mask", author=f"u{i}") for i in range(5)]
    kept, stats = filter_corpus(records, MASK_TERMS, org_scores={}, org_threshold=0.0)
    assert stats.dropped_org == 0 and len(kept) == 5


def test_filter_language_and_deleted():
    records = [make(1, "mask", lang="es"), None, make(2, "mask")]
    kept, stats = filter_corpus(records, MASK_TERMS)
    assert [r.id for r in kept] == ["2"]
    assert stats.dropped_language == 1 and stats.dropped_deleted == 1
    assert stats.read == stats.kept + stats.dropped()


def test_filter_output_always_on_topic_and_deterministic():
    records = list(read_corpus(E2E / "tweets.jsonl"))
    terms = load_terms(E2E / "terms.txt")
    kept, stats = filter_corpus(records, terms, org_scores=load_org_scores(E2E / "org_scores.csv"))
    assert all(matches_topic(r, terms) for r in kept)
    assert stats.read == stats.kept + stats.dropped()
    again, stats2 = filter_corpus(records, terms, org_scores=load_org_scores(E2E / "org_scores.csv"))
    assert again == kept and stats2 == stats


def test_org_scores_file(tmp_path):
    p = tmp_path / "org.csv"
    p.write_text("author_id,org_probability\na,0.2\nb,1.0\n")
    assert load_org_scores(p) == {"a": 0.2, "b": 1.0}
    p.write_text("author_id,org_probability\na,1.2\n")
    with pytest.raises(ValueError):
        load_org_scores(p)


# -- hydration ---------------------------------------------------------------------

def test_fixture_backend_marks_absent(tmp_path):
    store = tmp_path / "store.jsonl"
    store.write_text(line(id="a").decode() + "\n" + line(id="b").decode() + "\n")
    out = hydrate(["a", "b", "zz"], FixtureBackend(store))
    assert out["a"]["id"] == "a" and out["b"]["id"] == "b"
    assert out["zz"] is None


def test_hydrate_empty():
    assert hydrate([], FixtureBackend.__new__(FixtureBackend)) == {}


class Flaky:
    def __init__(self, failures, exc=TransportError):
        self.failures, self.exc, self.calls = failures, exc, 0

    def lookup(self, ids):
        self.calls += 1
        if self.calls <= self.failures:
            raise self.exc("boom")
        return {i: {"id": i} for i in ids if i != "gone"}


def test_transport_errors_retried_with_backoff():
    waits = []
    client = Flaky(2)
    out = hydrate(["x", "gone"], client, retry=RetryPolicy(sleep=waits.append))
    assert out == {"x": {"id": "x"}, "gone": None}
    assert client.calls == 3
    assert waits == [1.0, 2.0]


def test_transport_error_after_three_attempts_propagates():
    client = Flaky(3)
    with pytest.raises(TransportError):
        hydrate(["x"], client, retry=RetryPolicy(sleep=lambda s: None))
    assert client.calls == 3


def test_credential_error_is_not_retried():
    client = Flaky(1, CredentialError)
    with pytest.raises(CredentialError):
        hydrate(["x"], client, retry=RetryPolicy(sleep=lambda s: None))
    assert client.calls == 1


def test_batches_respect_batch_size():
    seen = []

    class Recorder:
        def lookup(self, ids):
            seen.append(list(ids))
            return {}

    hydrate([str(i) for i in range(250)], Recorder(), batch_size=100)
    assert [len(b) for b in seen] == [100, 100, 50]


def test_http_backend_from_env_requires_credentials(monkeypatch):
    monkeypatch.delenv("MASKSHIFT_HYDRATE_ENDPOINT", raising=False)
    monkeypatch.delenv("MASKSHIFT_HYDRATE_TOKEN", raising=False)
    with pytest.raises(CredentialError):
        corpus.HttpBackend.from_env()


def test_http_backend_against_local_server():
    import http.server
    import threading

    class Handler(http.server.BaseHTTPRequestHandler):
        def do_GET(self):
            if self.headers.get("Authorization") != "Bearer good":
                self.send_response(401)
                self.end_headers()
                return
            from urllib.parse import parse_qs, urlparse
            ids = parse_qs(urlparse(self.path).query)["ids"][0].split(",")
            body = json.dumps({"data": [{"id": i} for i in ids if i != "deleted"]}).encode()
            self.send_response(200)
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    server = http.server.HTTPServer(("127.0.0.1", 0), Handler)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    try:
        url = f"http://127.0.0.1:{server.server_port}/lookup"
        limiter = RateLimiter(0.0)
        out = hydrate(["1", "deleted"], corpus.HttpBackend(url, "good", limiter))
        assert out == {"1": {"id": "1"}, "deleted": None}
        with pytest.raises(CredentialError):
            hydrate(["1"], corpus.HttpBackend(url, "bad", limiter))
    finally:
        server.shutdown()


def test_rate_limiter_spaces_requests():
    now = [0.0]
    slept = []

    def sleep(dt_):
        slept.append(dt_)
        now[0] += dt_

    limiter = RateLimiter(1.0, clock=lambda: now[0], sleep=sleep)
    for _ in range(3):
        limiter.acquire()
    assert slept == [1.0, 1.0]
