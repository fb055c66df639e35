"""Content-word lemmas for topic modeling, plus collocation merging."""
from __future__ import annotations

import csv
import os
from collections import Counter
from dataclasses import dataclass
from importlib import resources

CONTENT_POS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})
DEFAULT_POS = "NOUN"


class ConfigurationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Document:
    source_id: str
    lemmas: tuple


def _data_text(name):
    return resources.files("maskshift.data").joinpath(name).read_text("utf-8")


def _read(path, bundled):
    if path is None:
        return _data_text(bundled)
    if not os.path.exists(path):
        raise ConfigurationError(f"lexicon not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_stopwords(path=None) -> frozenset:
    """One token per line; the bundled default is the standard English list."""
    text = _read(path, "stopwords_en.txt")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def load_custom_stopwords(path=None) -> frozenset:
    text = _read(path, "stopwords_custom.txt")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def load_pos_lexicon(path=None) -> dict[str, tuple[str, str]]:
    """``word -> (lemma, POS)`` from a ``word<TAB>lemma<TAB>pos`` file with header."""
    text = _read(path, "pos_lexicon.tsv")
    rows = csv.reader(text.splitlines(), delimiter="\t")
    header = next(rows, None)
    if header != ["word", "lemma", "pos"]:
        raise ConfigurationError(f"POS lexicon header must be word/lemma/pos, got {header}")
    return {r[0]: (r[1], r[2]) for r in rows if len(r) == 3}


def lemmatize(tokens, stopwords, pos_lexicon) -> list[str]:
    out = []
    for tok in tokens:
        tok = tok.lower()
        if tok in stopwords or not any(c.isalpha() for c in tok):
            continue
        lemma, pos = pos_lexicon.get(tok, (tok, DEFAULT_POS))
        if pos in CONTENT_POS and lemma not in stopwords:
            out.append(lemma)
    return out


def preprocess(records, stopwords=None, custom_stopwords=None, pos_lexicon=None) -> list[Document]:
    """Lemmatize each record's tokens and keep content words that are not stopwords.

    ``records`` may hold objects with ``id`` and ``tokens`` or plain
    ``(id, tokens)`` pairs. Unknown words count as nouns.
    """
    if pos_lexicon is None:
        raise ConfigurationError("a POS lexicon is required")
    stop = frozenset(stopwords or ()) | frozenset(custom_stopwords or ())
    docs = []
    for rec in records:
        sid, tokens = (rec.id, rec.tokens) if hasattr(rec, "tokens") else rec
        docs.append(Document(str(sid), tuple(lemmatize(tokens, stop, pos_lexicon))))
    return docs


def pair_scores(docs, min_count: int = 5, delimiter: str = "_") -> dict:
    """Collocation score ``(c(a,b) - min_count) * V / (c(a) * c(b))`` per adjacent pair.

    ``V`` is the number of distinct tokens.
    """
    unigrams, pairs = Counter(), Counter()
    for d in docs:
        lem = d.lemmas if isinstance(d, Document) else d
        unigrams.update(lem)
        pairs.update(zip(lem, lem[1:]))
    vocab = len(unigrams)
    return {p: (c - min_count) * vocab / (unigrams[p[0]] * unigrams[p[1]])
            for p, c in pairs.items() if c >= min_count}


def _merge_pass(docs, min_count, threshold, delimiter):
    keep = {p for p, s in pair_scores(docs, min_count).items() if s >= threshold}
    out = []
    for d in docs:
        lem, merged, i = d.lemmas, [], 0
        while i < len(lem):
            if i + 1 < len(lem) and (lem[i], lem[i + 1]) in keep:
                merged.append(lem[i] + delimiter + lem[i + 1])
                i += 2
            else:
                merged.append(lem[i])
                i += 1
        out.append(Document(d.source_id, tuple(merged)))
    return out


def merge_ngrams(docs, min_count: int = 5, threshold: float = 10.0, passes: int = 2,
                 delimiter: str = "_") -> list[Document]:
    """Join high-scoring adjacent pairs left to right; a second pass forms trigrams."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    for _ in range(passes):
        docs = _merge_pass(docs, min_count, threshold, delimiter)
    return docs
