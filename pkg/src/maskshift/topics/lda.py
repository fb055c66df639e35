"""Latent Dirichlet allocation by collapsed Gibbs sampling."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np
from numba import njit

MODEL_FORMAT = "maskshift-lda"
MODEL_VERSION = 1


class DegenerateDataError(ValueError):
    pass


@njit(cache=True)
def _sweep(words, docs, z, nkw, ndk, nk, u, alpha, beta, vbeta):
    n_topics = nk.shape[0]
    cum = np.empty(n_topics)
    for i in range(words.shape[0]):
        w, d, k = words[i], docs[i], z[i]
        nkw[k, w] -= 1
        ndk[d, k] -= 1
        nk[k] -= 1
        total = 0.0
        for t in range(n_topics):
            total += (ndk[d, t] + alpha) * (nkw[t, w] + beta) / (nk[t] + vbeta)
            cum[t] = total
        r = u[i] * total
        k = 0
        while k < n_topics - 1 and cum[k] <= r:
            k += 1
        z[i] = k
        nkw[k, w] += 1
        ndk[d, k] += 1
        nk[k] += 1


@dataclass
class LdaModel:
    K: int
    alpha: float
    beta: float
    vocab: tuple
    doc_ids: tuple
    words: np.ndarray          # flat word ids, documents concatenated
    offsets: np.ndarray        # document d spans words[offsets[d]:offsets[d+1]]
    z: np.ndarray              # flat topic assignments
    topic_word_counts: np.ndarray
    doc_topic_counts: np.ndarray
    seed: int
    iterations: int = 0

    @property
    def topic_totals(self) -> np.ndarray:
        return self.topic_word_counts.sum(axis=1)

    @property
    def assignments(self) -> list[np.ndarray]:
        return [self.z[a:b] for a, b in zip(self.offsets[:-1], self.offsets[1:])]

    def topic_word(self) -> np.ndarray:
        """Per-topic word distributions ``(n_kw + beta) / (n_k + V beta)``."""
        v = len(self.vocab)
        return (self.topic_word_counts + self.beta) / (self.topic_totals[:, None] + v * self.beta)

    def doc_topic(self) -> np.ndarray:
        lengths = np.diff(self.offsets)
        return (self.doc_topic_counts + self.alpha) / (lengths[:, None] + self.K * self.alpha)

    def check_counts(self) -> None:
        """Raise AssertionError unless the count tables match the assignments."""
        kw = np.zeros_like(self.topic_word_counts)
        np.add.at(kw, (self.z, self.words), 1)
        doc_index = np.repeat(np.arange(len(self.doc_ids)), np.diff(self.offsets))
        dk = np.zeros_like(self.doc_topic_counts)
        np.add.at(dk, (doc_index, self.z), 1)
        assert (self.topic_word_counts >= 0).all() and (self.doc_topic_counts >= 0).all()
        assert np.array_equal(kw, self.topic_word_counts)
        assert np.array_equal(dk, self.doc_topic_counts)
        assert np.array_equal(self.doc_topic_counts.sum(axis=1), np.diff(self.offsets))

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT, "version": MODEL_VERSION, "K": self.K, "alpha": self.alpha,
            "beta": self.beta, "seed": self.seed, "iterations": self.iterations,
            "vocab": list(self.vocab), "doc_ids": list(self.doc_ids),
            "documents": [self.words[a:b].tolist() for a, b in zip(self.offsets[:-1], self.offsets[1:])],
            "assignments": [a.tolist() for a in self.assignments],
            "topic_word_counts": self.topic_word_counts.tolist(),
            "doc_topic_counts": self.doc_topic_counts.tolist(),
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, separators=(",", ":"), ensure_ascii=False)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "LdaModel":
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
        if d.get("format") != MODEL_FORMAT or d.get("version") != MODEL_VERSION:
            raise ValueError(f"{path}: not a {MODEL_FORMAT} v{MODEL_VERSION} file")
        lengths = [len(x) for x in d["documents"]]
        model = cls(
            d["K"], d["alpha"], d["beta"], tuple(d["vocab"]), tuple(d["doc_ids"]),
            np.array([w for doc in d["documents"] for w in doc], dtype=np.int64),
            np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64),
            np.array([k for a in d["assignments"] for k in a], dtype=np.int64),
            np.array(d["topic_word_counts"], dtype=np.int64).reshape(d["K"], len(d["vocab"])),
            np.array(d["doc_topic_counts"], dtype=np.int64).reshape(len(lengths), d["K"]),
            d["seed"], d["iterations"])
        model.check_counts()
        return model


def _as_pairs(docs):
    for i, d in enumerate(docs):
        if hasattr(d, "lemmas"):
            yield d.source_id, list(d.lemmas)
        else:
            yield str(i), list(d)


def fit(docs, K: int, alpha: float | None = None, beta: float = 0.01, iterations: int = 1000,
        seed: int = 0, callback=None) -> LdaModel:
    """Fit K topics; empty documents are skipped.

    ``callback(sweep, model)`` runs after every sweep with the live model.
    Uniform draws for a sweep are taken in one block from a numpy Generator
    seeded with ``seed``, so the result is reproducible bit for bit.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    alpha = 50.0 / K if alpha is None else float(alpha)
    if alpha <= 0 or beta <= 0:
        raise ValueError("priors must be positive")
    pairs = [(sid, toks) for sid, toks in _as_pairs(docs) if toks]
    if len(pairs) < K:
        raise DegenerateDataError(f"{len(pairs)} nonempty documents for {K} topics")
    vocab = tuple(sorted({t for _, toks in pairs for t in toks}))
    index = {t: i for i, t in enumerate(vocab)}
    words = np.array([index[t] for _, toks in pairs for t in toks], dtype=np.int64)
    lengths = np.array([len(toks) for _, toks in pairs], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    doc_of = np.repeat(np.arange(len(pairs), dtype=np.int64), lengths)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=words.shape[0], dtype=np.int64)
    nkw = np.zeros((K, len(vocab)), dtype=np.int64)
    ndk = np.zeros((len(pairs), K), dtype=np.int64)
    np.add.at(nkw, (z, words), 1)
    np.add.at(ndk, (doc_of, z), 1)
    nk = nkw.sum(axis=1)

    model = LdaModel(K, alpha, float(beta), vocab, tuple(s for s, _ in pairs), words, offsets, z,
                     nkw, ndk, seed, 0)
    vbeta = len(vocab) * float(beta)
    for sweep in range(iterations):
        _sweep(words, doc_of, z, nkw, ndk, nk, rng.random(words.shape[0]), alpha, float(beta), vbeta)
        model.iterations = sweep + 1
        if callback is not None:
            callback(sweep, model)
    return model


def derive_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:4], "big")
