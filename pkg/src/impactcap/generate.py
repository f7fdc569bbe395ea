"""Caption text production: prompts, endpoint client, fallback, validation.

Captions come from an external chat-completion endpoint when configured and
from a bundled phrase table otherwise. Every failure path lands on the
phrase table, so callers always get a constraint-satisfying caption.
"""

from __future__ import annotations

import enum
import json
import random
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import httpx

from .emotion import LABELS
from .topics import Theme


class ResponseStyle(str, enum.Enum):
    TSUKKOMI = "tsukkomi"
    EXPOSITORY = "expository"
    HUMOROUS_PRAISE = "humorous_praise"


class Pov(str, enum.Enum):
    FIRST = "first"
    THIRD = "third"


class CaptionSource(str, enum.Enum):
    LLM = "llm"
    TEMPLATE = "template"


class MissingTemplate(Exception):
    pass


#: Failure counters: endpoint_error, validation_failure, fallback_used.
metrics: Counter = Counter()


@dataclass(frozen=True)
class GenerationConstraints:
    max_chars: int = 30
    language: str = "zh"
    banned_terms: tuple[str, ...] = ()
    require_theme_word: bool = False
    theme_words: tuple[str, ...] = ()

    def __post_init__(self):
        if self.max_chars < 4:
            raise ValueError(f"max_chars must be >= 4, got {self.max_chars}")

    @classmethod
    def for_style(cls, style: ResponseStyle, theme: Theme | None = None,
                  max_chars: int = 30,
                  banned_terms: Sequence[str] = ()) -> "GenerationConstraints":
        # Only expository captions must anchor on a theme word.
        return cls(
            max_chars=max_chars,
            banned_terms=tuple(banned_terms),
            require_theme_word=style is ResponseStyle.EXPOSITORY,
            theme_words=tuple(theme.top_words) if theme is not None else (),
        )


@dataclass(frozen=True)
class CaptionText:
    text: str
    style: ResponseStyle
    pov: Pov
    source: CaptionSource


@dataclass(frozen=True)
class CaptionRequest:
    style: ResponseStyle
    pov: Pov
    theme: Theme | None
    dominant_label: int
    exemplars: tuple[str, ...] = ()
    seed: int = 0


@dataclass(frozen=True)
class PromptTemplate:
    style: ResponseStyle
    pov: Pov
    system_text: str
    user_text: str


_STYLE_BRIEF = {
    ResponseStyle.TSUKKOMI: (
        "你是视频弹幕区的吐槽役。用犀利又不失幽默的语气回应弹幕里的槽点，"
        "先点出漏洞或关键词，再加一句反讽。"
    ),
    ResponseStyle.EXPOSITORY: (
        "你是视频弹幕区的引导助手。生成一条科普引导式字幕，"
        "把观众的注意力拉回视频内容本身。"
    ),
    ResponseStyle.HUMOROUS_PRAISE: (
        "你是视频弹幕区的气氛组。用夸张幽默的赞美呼应并放大弹幕中的正面情绪。"
    ),
}

_POV_BRIEF = {
    Pov.FIRST: "用第一人称复数口吻，句中要包含“我们”，营造一起观看的氛围。",
    Pov.THIRD: "用旁观者的第三人称口吻，不要使用“我们”或“你”。",
}

_CONSTRAINT_BRIEF = (
    "只输出一行中文字幕文本，不要解释，不要引号，"
    "长度不超过{max_chars}个字符。禁止出现这些词：{banned_terms}。"
)

_USER_TEXT = (
    "当前片段主题词：{theme_words}。主导情绪：{dominant_emotion}。"
    "代表性弹幕：{exemplar_danmaku}。请直接给出字幕。"
)

TEMPLATES: dict[tuple[ResponseStyle, Pov], PromptTemplate] = {
    (style, pov): PromptTemplate(
        style=style,
        pov=pov,
        system_text=_STYLE_BRIEF[style] + _POV_BRIEF[pov] + _CONSTRAINT_BRIEF,
        user_text=_USER_TEXT,
    )
    for style in ResponseStyle
    for pov in Pov
}


def _fold(text: str) -> str:
    return unicodedata.normalize("NFKC", text).casefold()


def build_prompt(style: ResponseStyle, pov: Pov, theme: Theme | None,
                 dominant_label: int, exemplars: Sequence[str],
                 constraints: GenerationConstraints) -> tuple[str, str]:
    """Resolve the (style, pov) template into a (system, user) pair."""
    template = TEMPLATES.get((style, pov))
    if template is None:
        raise MissingTemplate(f"no template for ({style}, {pov})")
    theme_words = "、".join(theme.top_words) if theme and theme.top_words else "（无）"
    exemplar_text = " / ".join(exemplars[:3]) if exemplars else "（无）"
    banned = "、".join(constraints.banned_terms) if constraints.banned_terms else "（无）"
    subst = {
        "theme_words": theme_words,
        "dominant_emotion": LABELS[dominant_label],
        "exemplar_danmaku": exemplar_text,
        "max_chars": constraints.max_chars,
        "banned_terms": banned,
    }
    return (
        template.system_text.format(**subst),
        template.user_text.format(**subst),
    )


def validate_caption(text: str, constraints: GenerationConstraints) -> list[str]:
    """Return violation codes; an empty list means the text is acceptable.

    The theme-word requirement only binds when some theme word could fit
    within max_chars at all, otherwise it would be unsatisfiable.
    """
    violations = []
    stripped = text.strip()
    if not stripped:
        violations.append("empty")
        return violations
    if len(stripped) > constraints.max_chars:
        violations.append("length")
    folded = _fold(stripped)
    for term in constraints.banned_terms:
        if term and _fold(term) in folded:
            violations.append(f"banned_term:{term}")
    if constraints.require_theme_word:
        usable = [w for w in constraints.theme_words if len(w) <= constraints.max_chars]
        if usable and not any(w in stripped for w in usable):
            violations.append("missing_theme_word")
    return violations


def _load_data_json(name: str, path) -> dict:
    if path is None:
        raw = resources.files("impactcap").joinpath(f"data/{name}").read_text("utf-8")
        return json.loads(raw)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_phrases(path=None) -> dict[tuple[ResponseStyle, Pov], tuple[str, ...]]:
    doc = _load_data_json("phrases.json", path)
    table = {}
    for style in ResponseStyle:
        for pov in Pov:
            entries = doc["phrases"][style.value][pov.value]
            if not entries:
                raise ValueError(f"empty phrase list for ({style.value}, {pov.value})")
            table[(style, pov)] = tuple(entries)
    return table


def load_banned_terms(path=None) -> tuple[str, ...]:
    doc = _load_data_json("banned_terms.json", path)
    return tuple(doc.get("terms", []))


_PHRASES: dict[tuple[ResponseStyle, Pov], tuple[str, ...]] | None = None


def _phrases() -> dict[tuple[ResponseStyle, Pov], tuple[str, ...]]:
    global _PHRASES
    if _PHRASES is None:
        _PHRASES = load_phrases()
    return _PHRASES


def fallback_caption(style: ResponseStyle, pov: Pov, theme: Theme | None,
                     dominant_label: int, seed: int = 0,
                     constraints: GenerationConstraints | None = None,
                     phrases=None) -> CaptionText:
    """Deterministic phrase-table caption; never fails.

    Phrases with a {theme} slot resolve against the first theme word that
    keeps the result within max_chars and drop out when none does.
    """
    if constraints is None:
        constraints = GenerationConstraints.for_style(style, theme)
    table = phrases if phrases is not None else _phrases()
    pool = table[(style, pov)]

    theme_words = list(constraints.theme_words)
    if theme is not None:
        for w in theme.top_words:
            if w not in theme_words:
                theme_words.append(w)

    candidates = []
    for phrase in pool:
        if "{theme}" in phrase:
            budget = constraints.max_chars - (len(phrase) - len("{theme}"))
            word = next((w for w in theme_words if 0 < len(w) <= budget), None)
            if word is None:
                continue
            candidates.append(phrase.replace("{theme}", word))
        else:
            candidates.append(phrase)

    scored = [(len(validate_caption(c, constraints)), i) for i, c in enumerate(candidates)]
    best = min((s for s, _ in scored), default=1)
    if best > 0:
        # No phrase satisfies the constraints; a bare theme word or a
        # truncated phrase is better than surfacing a violation.
        for w in theme_words:
            if 0 < len(w) <= constraints.max_chars:
                candidates.append(w)
                break
        candidates.extend(p[: constraints.max_chars] for p in pool if "{theme}" not in p)
        scored = [(len(validate_caption(c, constraints)), i) for i, c in enumerate(candidates)]
        best = min(s for s, _ in scored)
    finalists = [candidates[i] for s, i in scored if s == best]
    rnd = random.Random(f"fallback|{style.value}|{pov.value}|{dominant_label}|{seed}")
    text = finalists[rnd.randrange(len(finalists))]
    return CaptionText(text=text, style=style, pov=pov, source=CaptionSource.TEMPLATE)


class HttpChatClient:
    """Chat-completion endpoint: POST {system, user, max_tokens} -> {text}."""

    def __init__(self, base_url: str, auth_token: str = "",
                 timeout: float = 5.0, transport=None):
        headers = {}
        if auth_token:
            headers["Authorization"] = f"Bearer {auth_token}"
        self._client = httpx.Client(
            base_url=base_url, headers=headers, timeout=timeout,
            transport=transport,
        )

    def complete(self, system: str, user: str, max_tokens: int) -> str:
        resp = self._client.post(
            "/", json={"system": system, "user": user, "max_tokens": max_tokens}
        )
        resp.raise_for_status()
        return str(resp.json()["text"])


def generate_caption(request: CaptionRequest, client,
                     constraints: GenerationConstraints | None = None) -> CaptionText:
    """Ask the endpoint for a caption; fall back on any failure.

    One retry on endpoint or validation failure, then the phrase table. The
    returned text satisfies the constraints either way.
    """
    if constraints is None:
        constraints = GenerationConstraints.for_style(request.style, request.theme)
    if client is not None:
        system, user = build_prompt(
            request.style, request.pov, request.theme, request.dominant_label,
            request.exemplars, constraints,
        )
        for _ in range(2):
            try:
                text = client.complete(system, user, max_tokens=constraints.max_chars * 4)
            except Exception:
                metrics["endpoint_error"] += 1
                continue
            text = text.strip()
            if validate_caption(text, constraints):
                metrics["validation_failure"] += 1
                continue
            return CaptionText(
                text=text, style=request.style, pov=request.pov,
                source=CaptionSource.LLM,
            )
        metrics["fallback_used"] += 1
    return fallback_caption(
        request.style, request.pov, request.theme, request.dominant_label,
        seed=request.seed, constraints=constraints,
    )
