"""Topic coherence, model selection and topic reports."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lda import LdaModel, derive_seed, fit


def top_words(model: LdaModel, k: int, m: int) -> list[int]:
    """Word ids of topic k by descending count; equal counts keep vocabulary order."""
    counts = model.topic_word_counts[k]
    return sorted(range(len(model.vocab)), key=lambda w: (-counts[w], w))[:m]


def _doc_sets(docs):
    out = []
    for d in docs:
        toks = d.lemmas if hasattr(d, "lemmas") else d
        out.append(frozenset(toks))
    return out


def topic_coherence(model: LdaModel, docs, top_m: int = 10) -> list[float]:
    """UMass coherence per topic.

    For top words ranked w_1..w_M, sums ``log((D(w_m, w_l) + 1) / D(w_l))``
    over l < m, where D counts documents containing the words.
    """
    sets = _doc_sets(docs)
    scores = []
    for k in range(model.K):
        ws = [model.vocab[w] for w in top_words(model, k, top_m)]
        total = 0.0
        for m in range(1, len(ws)):
            for l in range(m):
                d_l = sum(1 for s in sets if ws[l] in s)
                if d_l == 0:
                    raise ValueError(f"word {ws[l]!r} occurs in no document")
                d_ml = sum(1 for s in sets if ws[l] in s and ws[m] in s)
                total += math.log((d_ml + 1) / d_l)
        scores.append(total)
    return scores


def coherence(model: LdaModel, docs, top_m: int = 10) -> float:
    return math.fsum(topic_coherence(model, docs, top_m)) / model.K


def select_model(candidates, docs, alpha=None, beta: float = 0.01, iterations: int = 1000,
                 seed: int = 0, top_m: int = 10):
    """Fit one model per K (seed derived from K) and keep the most coherent.

    Returns ``(best_model, {K: coherence})``; equal scores favour the smaller K.
    """
    ks = sorted(set(int(k) for k in candidates))
    if not ks:
        raise ValueError("no candidate topic counts")
    docs = list(docs)
    table, best, best_score = {}, None, -math.inf
    for k in ks:
        model = fit(docs, k, alpha, beta, iterations, derive_seed(seed, f"K={k}"))
        table[k] = coherence(model, docs, top_m)
        if table[k] > best_score:
            best, best_score = model, table[k]
    return best, table


@dataclass
class TopicSummary:
    topic: int
    keywords: list = field(default_factory=list)     # {"token", "count", "weight"}
    examples: list = field(default_factory=list)     # {"id", "proportion", "text"}
    coherence: float = 0.0


@dataclass
class TopicReport:
    K: int
    coherence: float
    topics: list
    selection: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema_version": 1, "K": self.K, "coherence": self.coherence,
                "selection": {str(k): v for k, v in sorted(self.selection.items())},
                "topics": [asdict(t) for t in self.topics]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report(model: LdaModel, docs, texts: dict | None = None, top_keywords: int = 10,
           top_examples: int = 3, top_m: int = 10, selection: dict | None = None) -> TopicReport:
    """Keywords by weight and the documents with the highest share of each topic.

    ``texts`` maps source ids to tweet text for the examples.
    """
    texts = texts or {}
    phi = model.topic_word()
    theta = model.doc_topic()
    per_topic = topic_coherence(model, docs, top_m)
    topics = []
    for k in range(model.K):
        order = sorted(range(len(model.vocab)), key=lambda w: (-phi[k, w], model.vocab[w]))
        keywords = [{"token": model.vocab[w], "count": int(model.topic_word_counts[k, w]),
                     "weight": float(phi[k, w])} for w in order[:top_keywords]]
        ranked = sorted(range(len(model.doc_ids)), key=lambda d: (-theta[d, k], d))
        examples = [{"id": model.doc_ids[d], "proportion": float(theta[d, k]),
                     "text": texts.get(model.doc_ids[d], "")} for d in ranked[:top_examples]]
        topics.append(TopicSummary(k, keywords, examples, per_topic[k]))
    return TopicReport(model.K, math.fsum(per_topic) / model.K, topics, dict(selection or {}))


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def match_topics(learned, planted) -> list[tuple[int, int, float]]:
    """Greedy one-to-one matching of learned to planted distributions by TV distance."""
    pairs = sorted((total_variation(learned[i], planted[j]), i, j)
                   for i in range(len(learned)) for j in range(len(planted)))
    used_i, used_j, out = set(), set(), []
    for tv, i, j in pairs:
        if i not in used_i and j not in used_j:
            used_i.add(i)
            used_j.add(j)
            out.append((i, j, tv))
    return sorted(out, key=lambda x: x[1])
