"""28-label emotion scoring of danmaku text and window-level aggregation.

The bundled backend is a deterministic bilingual lexicon; an HTTP classifier
endpoint can replace it and falls back to the lexicon on any failure.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import httpx

from .ingest import tokenize

#: Canonical label order. Index positions are part of every wire format.
LABELS = (
    "admiration",
    "amusement",
    "anger",
    "annoyance",
    "approval",
    "caring",
    "confusion",
    "curiosity",
    "desire",
    "disappointment",
    "disapproval",
    "disgust",
    "embarrassment",
    "excitement",
    "fear",
    "gratitude",
    "grief",
    "joy",
    "love",
    "nervousness",
    "optimism",
    "pride",
    "realization",
    "relief",
    "remorse",
    "sadness",
    "surprise",
    "neutral",
)
N_LABELS = len(LABELS)
LABEL_INDEX = {name: i for i, name in enumerate(LABELS)}
NEUTRAL_INDEX = LABEL_INDEX["neutral"]


class PolarityClass(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    AMBIGUOUS = "ambiguous"
    NEUTRAL = "neutral"


# Published sentiment grouping of the taxonomy; partitions all 28 labels.
_POSITIVE = {
    "admiration",
    "amusement",
    "approval",
    "caring",
    "desire",
    "excitement",
    "gratitude",
    "joy",
    "love",
    "optimism",
    "pride",
    "relief",
}
_NEGATIVE = {
    "anger",
    "annoyance",
    "disappointment",
    "disapproval",
    "disgust",
    "embarrassment",
    "fear",
    "grief",
    "nervousness",
    "remorse",
    "sadness",
}
_AMBIGUOUS = {"confusion", "curiosity", "realization", "surprise"}

POLARITY_TABLE = tuple(
    PolarityClass.POSITIVE
    if name in _POSITIVE
    else PolarityClass.NEGATIVE
    if name in _NEGATIVE
    else PolarityClass.AMBIGUOUS
    if name in _AMBIGUOUS
    else PolarityClass.NEUTRAL
    for name in LABELS
)


@dataclass(frozen=True)
class EmotionVector:
    """28 non-negative finite scores in canonical label order."""

    scores: tuple[float, ...]

    def __post_init__(self):
        if len(self.scores) != N_LABELS:
            raise ValueError(f"expected {N_LABELS} scores, got {len(self.scores)}")
        for s in self.scores:
            if not (s >= 0.0 and math.isfinite(s)):
                raise ValueError(f"scores must be finite and >= 0, got {s}")

    @classmethod
    def zero(cls) -> "EmotionVector":
        return cls(scores=(0.0,) * N_LABELS)

    @classmethod
    def neutral_one_hot(cls) -> "EmotionVector":
        scores = [0.0] * N_LABELS
        scores[NEUTRAL_INDEX] = 1.0
        return cls(scores=tuple(scores))

    @classmethod
    def from_map(cls, weights: dict[str, float]) -> "EmotionVector":
        scores = [0.0] * N_LABELS
        for name, w in weights.items():
            scores[LABEL_INDEX[name]] = float(w)
        return cls(scores=tuple(scores))


@dataclass(frozen=True)
class EmotionLexicon:
    """token surface -> sparse per-label weights, all non-negative."""

    entries: dict[str, dict[int, float]]
    version: str = "0"

    def __post_init__(self):
        covered = set()
        for surface, contrib in self.entries.items():
            for idx, w in contrib.items():
                if w < 0:
                    raise ValueError(f"negative weight for {surface!r}")
            if contrib:
                top = min(contrib, key=lambda i: (-contrib[i], i))
                covered.add(POLARITY_TABLE[top])
        missing = set(PolarityClass) - covered
        if missing:
            raise ValueError(
                "lexicon must cover every polarity class, missing: "
                + ", ".join(sorted(c.value for c in missing))
            )


def load_lexicon(path=None) -> EmotionLexicon:
    """Load a lexicon JSON file; with no path, the bundled bilingual one."""
    if path is None:
        raw = resources.files("impactcap").joinpath("data/lexicon.json").read_text("utf-8")
        doc = json.loads(raw)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    entries = {
        surface: {LABEL_INDEX[name]: float(w) for name, w in contrib.items()}
        for surface, contrib in doc["entries"].items()
    }
    return EmotionLexicon(entries=entries, version=str(doc.get("version", "0")))


def classify(text: str, lexicon: EmotionLexicon) -> EmotionVector:
    """Sum lexicon contributions over the text's tokens.

    Texts with no matching token score as a neutral one-hot. Summation order
    is token order then label order, so results are bit-deterministic.
    """
    scores = [0.0] * N_LABELS
    matched = False
    for token in tokenize(text):
        contrib = lexicon.entries.get(token.surface)
        if contrib is None:
            continue
        matched = True
        for idx in sorted(contrib):
            scores[idx] += contrib[idx]
    if not matched:
        return EmotionVector.neutral_one_hot()
    return EmotionVector(scores=tuple(scores))


def sum_vectors(vectors: Sequence[EmotionVector]) -> EmotionVector:
    """Elementwise sum in input order; empty input gives the zero vector."""
    acc = [0.0] * N_LABELS
    for v in vectors:
        for i in range(N_LABELS):
            acc[i] += v.scores[i]
    return EmotionVector(scores=tuple(acc))


def dominant_emotion(v: EmotionVector) -> int:
    """Argmax label index; ties go to the lower index, all-zero is neutral."""
    best = 0
    best_score = v.scores[0]
    for i in range(1, N_LABELS):
        if v.scores[i] > best_score:
            best = i
            best_score = v.scores[i]
    if best_score == 0.0:
        return NEUTRAL_INDEX
    return best


def polarity(label_index: int) -> PolarityClass:
    if not 0 <= label_index < N_LABELS:
        raise IndexError(f"label index out of range: {label_index}")
    return POLARITY_TABLE[label_index]


def emotional_weight(v: EmotionVector) -> float:
    """Share of non-neutral mass in the vector, in [0, 1]."""
    total = 0.0
    for s in v.scores:
        total += s
    if total == 0.0:
        return 0.0
    return (total - v.scores[NEUTRAL_INDEX]) / total


class LexiconClassifier:
    """Deterministic offline classifier backend."""

    def __init__(self, lexicon: EmotionLexicon | None = None):
        self.lexicon = lexicon if lexicon is not None else load_lexicon()

    def classify_batch(self, texts: Sequence[str]) -> list[EmotionVector]:
        return [classify(t, self.lexicon) for t in texts]


class HttpClassifier:
    """External classifier endpoint; falls back to the lexicon on failure.

    Contract: POST {"texts": [...]} -> {"vectors": [[28 floats], ...]}.
    """

    def __init__(self, url: str, fallback: LexiconClassifier | None = None,
                 timeout: float = 2.0, transport=None):
        self.url = url
        self.fallback = fallback if fallback is not None else LexiconClassifier()
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def classify_batch(self, texts: Sequence[str]) -> list[EmotionVector]:
        try:
            resp = self._client.post(self.url, json={"texts": list(texts)})
            resp.raise_for_status()
            vectors = resp.json()["vectors"]
            out = [EmotionVector(scores=tuple(float(x) for x in vec)) for vec in vectors]
            if len(out) != len(texts):
                raise ValueError("classifier returned wrong batch size")
            return out
        except Exception:
            return self.fallback.classify_batch(texts)
