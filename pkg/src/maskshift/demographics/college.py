"""College-student classifier: PMI-ranked possessive phrases, TF-IDF, forest."""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from sklearn.ensemble import RandomForestClassifier

DEFAULT_OVERRIDE_TERMS = frozenset({"professor", "textbook"})
DEFAULT_OVERRIDE_MIN_COUNT = 5
FOREST_DEFAULTS = {"n_estimators": 100, "max_features": "sqrt", "criterion": "gini",
                   "max_depth": None}


class DegenerateDataError(ValueError):
    """Training data holds a single class."""


@dataclass(frozen=True)
class AttributePattern:
    phrase: str
    pmi: float

    def __post_init__(self):
        if not self.phrase or self.phrase != self.phrase.lower():
            raise ValueError(f"phrase must be nonempty lowercase, got {self.phrase!r}")


def load_attribute_phrases(path=None) -> list[str]:
    if path is None:
        text = resources.files("maskshift.data").joinpath("college_attributes.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    out = []
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            out.append(" ".join(line.split()))
    return out


def phrase_count(tokens, phrase: str) -> int:
    """Occurrences of a (possibly multi-word) phrase as a contiguous token run."""
    parts = phrase.split()
    k = len(parts)
    if k == 1:
        return sum(1 for t in tokens if t == parts[0])
    return sum(1 for i in range(len(tokens) - k + 1) if list(tokens[i:i + k]) == parts)


def _check_two_classes(labels):
    if len({bool(x) for x in labels}) < 2:
        raise DegenerateDataError("need both college and non-college examples")


def rank_attributes(labeled_timelines, candidate_phrases) -> list[AttributePattern]:
    """Rank phrases by ``log2(p(phrase | college) / p(phrase))``.

    Probabilities are document-presence rates with add-one smoothing,
    ``(n + 1) / (N + 2)``. Ties keep the candidate order.
    """
    pairs = [(list(tokens), bool(label)) for tokens, label in labeled_timelines]
    _check_two_classes(label for _, label in pairs)
    n_docs = len(pairs)
    n_college = sum(1 for _, label in pairs if label)
    ranked = []
    for phrase in dict.fromkeys(" ".join(p.lower().split()) for p in candidate_phrases):
        present = [label for tokens, label in pairs if phrase_count(tokens, phrase)]
        p_given = (sum(present) + 1) / (n_college + 2)
        p_any = (len(present) + 1) / (n_docs + 2)
        ranked.append(AttributePattern(phrase, math.log2(p_given / p_any)))
    ranked.sort(key=lambda a: -a.pmi)
    return ranked


def idf_weights(timelines, vocabulary) -> np.ndarray:
    """Smoothed inverse document frequency ``ln((1+N)/(1+df)) + 1``."""
    docs = [list(t) for t in timelines]
    n = len(docs)
    df = np.array([sum(1 for d in docs if phrase_count(d, term)) for term in vocabulary], dtype=float)
    return np.log((1.0 + n) / (1.0 + df)) + 1.0


def tfidf(timelines, vocabulary, idf: np.ndarray | None = None) -> np.ndarray:
    """User x term matrix of raw counts times idf, rows scaled to unit L2 norm.

    ``idf`` defaults to the weights of ``timelines`` themselves; pass the
    training weights to featurize unseen users. Empty rows stay zero.
    """
    vocabulary = list(vocabulary)
    if not vocabulary:
        raise ValueError("vocabulary is empty")
    docs = [list(t) for t in timelines]
    if idf is None:
        idf = idf_weights(docs, vocabulary)
    tf = np.array([[phrase_count(d, term) for term in vocabulary] for d in docs], dtype=float)
    tf = tf.reshape(len(docs), len(vocabulary))
    x = tf * idf
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    np.divide(x, norms, out=x, where=norms > 0)
    return x


def train_college(features, labels, forest_params: dict | None = None, seed: int = 0):
    labels = np.asarray([bool(x) for x in labels])
    _check_two_classes(labels)
    params = {**FOREST_DEFAULTS, **(forest_params or {})}
    forest = RandomForestClassifier(**params, random_state=seed, n_jobs=1)
    forest.fit(np.asarray(features, dtype=float), labels)
    return forest


@dataclass(frozen=True)
class CollegeModel:
    vocabulary: tuple
    idf: np.ndarray
    forest: RandomForestClassifier

    def features(self, timelines) -> np.ndarray:
        return tfidf(timelines, self.vocabulary, self.idf)


def fit_college_model(labeled_timelines, candidate_phrases=None, top_k: int | None = None,
                      forest_params: dict | None = None, seed: int = 0) -> CollegeModel:
    """Rank phrases, keep those with positive PMI (or the top ``top_k``), fit the forest."""
    pairs = [(list(t), bool(y)) for t, y in labeled_timelines]
    candidates = candidate_phrases if candidate_phrases is not None else load_attribute_phrases()
    ranked = rank_attributes(pairs, candidates)
    chosen = ranked[:top_k] if top_k else [a for a in ranked if a.pmi > 0] or ranked
    vocab = tuple(a.phrase for a in chosen)
    docs = [t for t, _ in pairs]
    idf = idf_weights(docs, vocab)
    forest = train_college(tfidf(docs, vocab, idf), [y for _, y in pairs], forest_params, seed)
    return CollegeModel(vocab, idf, forest)


def predict_college(model: CollegeModel, timeline, override_terms=DEFAULT_OVERRIDE_TERMS,
                    override_min_count: int = DEFAULT_OVERRIDE_MIN_COUNT) -> bool:
    tokens = list(timeline)
    for term in override_terms:
        if phrase_count(tokens, term) >= override_min_count:
            return True
    return bool(model.forest.predict(model.features([tokens]))[0])
