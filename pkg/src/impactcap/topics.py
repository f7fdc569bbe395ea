"""Topic modeling over danmaku corpora with collapsed Gibbs LDA.

A model is fitted offline per video and held fixed while streaming; windows
only fold new text into the fixed topic-word counts. Everything here is a
deterministic function of (inputs, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ingest import DanmakuMessage, tokenize

DEFAULT_K = 10
DEFAULT_BETA = 0.01
DEFAULT_FIT_ITERATIONS = 200
DEFAULT_FOLD_IN_ITERATIONS = 30

MODEL_FORMAT = "impactcap-lda-v1"


class TopicsError(Exception):
    pass


class EmptyCorpus(TopicsError):
    pass


class BadHyperparameter(TopicsError):
    pass


class BadTopicIndex(TopicsError):
    pass


@dataclass(frozen=True)
class Corpus:
    """Tokenized documents over a shared vocabulary."""

    documents: tuple[tuple[int, ...], ...]
    vocabulary: tuple[str, ...]
    doc_ids: tuple[str, ...]

    def __post_init__(self):
        if len(self.documents) != len(self.doc_ids):
            raise ValueError("documents and doc_ids must be parallel")
        if len(set(self.vocabulary)) != len(self.vocabulary):
            raise ValueError("vocabulary has duplicates")
        v = len(self.vocabulary)
        for doc in self.documents:
            for w in doc:
                if not 0 <= w < v:
                    raise ValueError(f"token id out of range: {w}")


def build_corpus(docs: Iterable[tuple[str, Sequence[str]]]) -> Corpus:
    """Assemble a Corpus from (doc_id, token surfaces) pairs.

    Vocabulary ids follow first-appearance order. Empty documents are
    dropped here so fitting sees only real ones.
    """
    vocab: dict[str, int] = {}
    documents = []
    doc_ids = []
    for doc_id, surfaces in docs:
        ids = []
        for s in surfaces:
            if s not in vocab:
                vocab[s] = len(vocab)
            ids.append(vocab[s])
        if ids:
            documents.append(tuple(ids))
            doc_ids.append(doc_id)
    return Corpus(
        documents=tuple(documents),
        vocabulary=tuple(vocab),
        doc_ids=tuple(doc_ids),
    )


def corpus_from_messages(messages: Iterable[DanmakuMessage]) -> Corpus:
    return build_corpus(
        (m.id, [t.surface for t in tokenize(m.text)]) for m in messages
    )


@dataclass(frozen=True, eq=False)
class LdaModel:
    """Fitted topic-word counts plus the hyperparameters that produced them."""

    k: int
    alpha: float
    beta: float
    topic_word_counts: np.ndarray
    topic_totals: np.ndarray
    vocabulary: tuple[str, ...]
    seed: int
    iterations: int

    def __post_init__(self):
        if self.topic_word_counts.shape != (self.k, len(self.vocabulary)):
            raise ValueError("topic_word_counts shape mismatch")
        if self.topic_totals.shape != (self.k,):
            raise ValueError("topic_totals shape mismatch")
        if (self.topic_word_counts < 0).any():
            raise ValueError("negative topic-word count")
        if not (self.topic_word_counts.sum(axis=1) == self.topic_totals).all():
            raise ValueError("topic_totals disagree with topic_word_counts")
        self.topic_word_counts.flags.writeable = False
        self.topic_totals.flags.writeable = False

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "k": self.k,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
            "iterations": self.iterations,
            "vocabulary": list(self.vocabulary),
            "topic_word_counts": self.topic_word_counts.tolist(),
            "topic_totals": self.topic_totals.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LdaModel":
        if doc.get("format") != MODEL_FORMAT:
            raise ValueError(f"unknown model format: {doc.get('format')!r}")
        return cls(
            k=int(doc["k"]),
            alpha=float(doc["alpha"]),
            beta=float(doc["beta"]),
            topic_word_counts=np.array(doc["topic_word_counts"], dtype=np.int64),
            topic_totals=np.array(doc["topic_totals"], dtype=np.int64),
            vocabulary=tuple(doc["vocabulary"]),
            seed=int(doc["seed"]),
            iterations=int(doc["iterations"]),
        )


@dataclass(frozen=True)
class TopicMixture:
    weights: tuple[float, ...]

    def __post_init__(self):
        total = 0.0
        for w in self.weights:
            if w < 0.0:
                raise ValueError("negative mixture weight")
            total += w
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total}, not 1")


@dataclass(frozen=True)
class Theme:
    topic: int
    top_words: tuple[str, ...]
    support: int


def _check_hyper(k, alpha, beta, iterations):
    if k < 1:
        raise BadHyperparameter(f"K must be >= 1, got {k}")
    if alpha <= 0:
        raise BadHyperparameter(f"alpha must be > 0, got {alpha}")
    if beta <= 0:
        raise BadHyperparameter(f"beta must be > 0, got {beta}")
    if iterations < 1:
        raise BadHyperparameter(f"iterations must be >= 1, got {iterations}")


def _sweep(docs, z, n_dk, n_kw, n_k, k, v, alpha, beta, rng, update_kw):
    """One Gibbs pass over every token, resampling in place.

    The full conditional is (n_kw + beta) / (n_k + V*beta) * (n_dk + alpha),
    accumulated left to right so the float stream is reproducible. When
    update_kw is false the topic-word counts stay fixed (fold-in).
    """
    vbeta = v * beta
    cum = [0.0] * k
    pos = 0
    for d, doc in enumerate(docs):
        row = n_dk[d]
        for w in doc:
            old = z[pos]
            row[old] -= 1
            if update_kw:
                n_kw[old][w] -= 1
                n_k[old] -= 1
            total = 0.0
            for kk in range(k):
                total += (n_kw[kk][w] + beta) / (n_k[kk] + vbeta) * (row[kk] + alpha)
                cum[kk] = total
            u = rng.random() * total
            new = 0
            while new < k - 1 and cum[new] <= u:
                new += 1
            row[new] += 1
            if update_kw:
                n_kw[new][w] += 1
                n_k[new] += 1
            z[pos] = new
            pos += 1


def fit_lda(corpus: Corpus, k: int = DEFAULT_K, alpha: float | None = None,
            beta: float = DEFAULT_BETA, iterations: int = DEFAULT_FIT_ITERATIONS,
            seed: int = 0) -> LdaModel:
    """Fit by collapsed Gibbs sampling. Same inputs and seed, same bits out."""
    if k < 1:
        raise BadHyperparameter(f"K must be >= 1, got {k}")
    if alpha is None:
        alpha = 50.0 / k
    _check_hyper(k, alpha, beta, iterations)
    docs = [doc for doc in corpus.documents if doc]
    n_tokens = sum(len(doc) for doc in docs)
    if n_tokens == 0:
        raise EmptyCorpus("corpus has no tokens")
    v = len(corpus.vocabulary)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, k, size=n_tokens).tolist()

    # Plain lists: the sampler is scalar-indexing bound, not vector math.
    n_kw = [[0] * v for _ in range(k)]
    n_k = [0] * k
    n_dk = [[0] * k for _ in docs]
    pos = 0
    for d, doc in enumerate(docs):
        for w in doc:
            kk = z[pos]
            n_kw[kk][w] += 1
            n_k[kk] += 1
            n_dk[d][kk] += 1
            pos += 1

    for _ in range(iterations):
        _sweep(docs, z, n_dk, n_kw, n_k, k, v, alpha, beta, rng, update_kw=True)

    return LdaModel(
        k=k,
        alpha=alpha,
        beta=beta,
        topic_word_counts=np.array(n_kw, dtype=np.int64),
        topic_totals=np.array(n_k, dtype=np.int64),
        vocabulary=corpus.vocabulary,
        seed=seed,
        iterations=iterations,
    )


def infer_mixture(model: LdaModel, tokens: Sequence[str],
                  iterations: int = DEFAULT_FOLD_IN_ITERATIONS,
                  seed: int = 0) -> TopicMixture:
    """Fold a document into the fitted model, keeping word counts fixed.

    Tokens outside the model vocabulary are dropped. With nothing left the
    mixture is the pure prior, i.e. uniform.
    """
    _check_hyper(model.k, model.alpha, model.beta, iterations)
    index = {s: i for i, s in enumerate(model.vocabulary)}
    doc = [index[t] for t in tokens if t in index]
    k = model.k
    if not doc:
        return TopicMixture(weights=(1.0 / k,) * k)

    v = len(model.vocabulary)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, k, size=len(doc)).tolist()
    n_dk = [0] * k
    for kk in z:
        n_dk[kk] += 1
    n_kw = model.topic_word_counts.tolist()
    n_k = model.topic_totals.tolist()

    for _ in range(iterations):
        _sweep([doc], z, [n_dk], n_kw, n_k, k, v, model.alpha, model.beta,
               rng, update_kw=False)

    denom = len(doc) + k * model.alpha
    raw = [(n_dk[kk] + model.alpha) / denom for kk in range(k)]
    total = 0.0
    for x in raw:
        total += x
    return TopicMixture(weights=tuple(x / total for x in raw))


def top_words(model: LdaModel, topic: int, k: int = 5) -> list[str]:
    """The k highest-count words for a topic; ties favor the lower word id."""
    if not 0 <= topic < model.k:
        raise BadTopicIndex(f"topic {topic} out of range for K={model.k}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    counts = model.topic_word_counts[topic]
    nonzero = [(int(-counts[w]), w) for w in range(len(counts)) if counts[w] > 0]
    nonzero.sort()
    return [model.vocabulary[w] for _, w in nonzero[:k]]


def extract_theme(model: LdaModel, window_messages: Sequence[DanmakuMessage],
                  k: int = 5, iterations: int = DEFAULT_FOLD_IN_ITERATIONS,
                  seed: int = 0) -> Theme:
    """Theme of one window: fold all its text in as a single document."""
    if not window_messages:
        return Theme(topic=0, top_words=(), support=0)
    surfaces = []
    for m in window_messages:
        surfaces.extend(t.surface for t in tokenize(m.text))
    mixture = infer_mixture(model, surfaces, iterations=iterations, seed=seed)
    best = 0
    for kk in range(1, model.k):
        if mixture.weights[kk] > mixture.weights[best]:
            best = kk
    return Theme(
        topic=best,
        top_words=tuple(top_words(model, best, k)),
        support=len(window_messages),
    )


def save_model(model: LdaModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh, ensure_ascii=False)
        fh.write("\n")


def load_model(path) -> LdaModel:
    with open(path, encoding="utf-8") as fh:
        return LdaModel.from_dict(json.load(fh))
