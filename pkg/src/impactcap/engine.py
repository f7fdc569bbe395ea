"""Windowed moderation engine: trigger decisions and caption planning.

Danmaku are grouped into tumbling windows aligned to video time zero. A
window that accumulates enough emotional weight fires one caption, styled
by the active policy. The same code path serves batch planning over a log
and the live per-video engine.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .emotion import (
    EmotionVector,
    NEUTRAL_INDEX,
    LABEL_INDEX,
    PolarityClass,
    dominant_emotion,
    emotional_weight,
    polarity,
    sum_vectors,
)
from .generate import (
    CaptionRequest,
    CaptionText,
    Pov,
    ResponseStyle,
    generate_caption,
)
from .ingest import DanmakuLog, DanmakuMessage
from .style import ImpactCaption, compose_render_spec
from .topics import LdaModel, Theme, extract_theme

WINDOW_DURATIONS_S = (8, 12)
DEFAULT_THRESHOLD = 2.0

_SEED_STEP = 1_000_003
_SEED_MASK = (1 << 64) - 1

_AMBIGUOUS_TSUKKOMI = {LABEL_INDEX["surprise"], LABEL_INDEX["realization"]}


class SettingsError(ValueError):
    pass


@dataclass(frozen=True)
class AdminSettings:
    """Moderator-tunable knobs, validated on construction."""

    window_duration_s: int = 8
    comment_threshold: float = DEFAULT_THRESHOLD
    style_policy: str = "revised"
    pov_policy: str = "blend"
    display_position: str = "top"
    obscure_danmaku: bool = False
    danmaku_scale: float = 1.0
    embedding_method: str = "overlay"
    caption_backend: str = "template"
    trigger_weight: float = 1.0

    def __post_init__(self):
        if self.window_duration_s not in WINDOW_DURATIONS_S:
            raise SettingsError(
                f"window_duration_s must be one of {WINDOW_DURATIONS_S}, "
                f"got {self.window_duration_s}"
            )
        if not (math.isfinite(self.comment_threshold) and self.comment_threshold >= 0):
            raise SettingsError("comment_threshold must be finite and >= 0")
        if self.style_policy not in ("original", "revised"):
            prefix, _, name = self.style_policy.partition(":")
            if prefix != "fixed" or name not in [s.value for s in ResponseStyle]:
                raise SettingsError(f"bad style_policy: {self.style_policy!r}")
        if self.pov_policy not in ("first", "third", "blend"):
            raise SettingsError(f"bad pov_policy: {self.pov_policy!r}")
        if self.display_position not in ("top", "middle", "bottom"):
            raise SettingsError(f"bad display_position: {self.display_position!r}")
        if not 0 < self.danmaku_scale <= 3:
            raise SettingsError(f"danmaku_scale must be in (0, 3], got {self.danmaku_scale}")
        if self.embedding_method != "overlay":
            raise SettingsError(f"bad embedding_method: {self.embedding_method!r}")
        if self.caption_backend not in ("template", "llm"):
            raise SettingsError(f"bad caption_backend: {self.caption_backend!r}")
        if not self.trigger_weight > 0:
            raise SettingsError(f"trigger_weight must be > 0, got {self.trigger_weight}")

    def to_dict(self) -> dict:
        return {
            "window_duration_s": self.window_duration_s,
            "comment_threshold": self.comment_threshold,
            "style_policy": self.style_policy,
            "pov_policy": self.pov_policy,
            "display_position": self.display_position,
            "obscure_danmaku": self.obscure_danmaku,
            "danmaku_scale": self.danmaku_scale,
            "embedding_method": self.embedding_method,
            "caption_backend": self.caption_backend,
            "trigger_weight": self.trigger_weight,
        }

    @classmethod
    def from_dict(cls, doc: dict, base: "AdminSettings | None" = None) -> "AdminSettings":
        """Build settings from a JSON dict, merging over base when given."""
        known = cls().to_dict().keys()
        unknown = set(doc) - set(known)
        if unknown:
            raise SettingsError(f"unknown settings: {sorted(unknown)}")
        merged = (base.to_dict() if base is not None else cls().to_dict()) | dict(doc)
        try:
            return cls(**merged)
        except TypeError as exc:
            raise SettingsError(str(exc)) from None


@dataclass(frozen=True)
class WindowSummary:
    window_index: int
    start_ms: int
    end_ms: int
    message_count: int
    summed_emotions: EmotionVector
    dominant_label: int
    polarity: PolarityClass
    weighted_frequency: float
    theme: Theme

    def __post_init__(self):
        if self.end_ms <= self.start_ms:
            raise ValueError("window must have positive duration")
        if self.weighted_frequency < 0:
            raise ValueError("weighted_frequency must be >= 0")
        if self.weighted_frequency > self.message_count + 1e-9:
            raise ValueError("weighted_frequency cannot exceed message count")


@dataclass(frozen=True)
class TriggerDecision:
    fire: bool
    reason: str


@dataclass(frozen=True)
class CaptionPlanEntry:
    window_index: int
    caption: ImpactCaption
    triggered_by: WindowSummary


def assign_window(video_time_ms: int, duration_s: int) -> int:
    """Tumbling window index for a video timestamp, aligned at zero."""
    if video_time_ms < 0:
        raise ValueError(f"video_time_ms must be >= 0, got {video_time_ms}")
    if duration_s not in WINDOW_DURATIONS_S:
        raise ValueError(f"duration_s must be one of {WINDOW_DURATIONS_S}")
    return video_time_ms // (duration_s * 1000)


def window_seed(seed: int, window_index: int) -> int:
    return (seed * _SEED_STEP + window_index) & _SEED_MASK


def summarize_from_vectors(window_index: int, messages: Sequence[DanmakuMessage],
                           vectors: Sequence[EmotionVector], lda_model: LdaModel | None,
                           settings: AdminSettings, seed: int = 0) -> WindowSummary:
    """Summary from already-classified messages (one vector per message)."""
    duration_ms = settings.window_duration_s * 1000
    summed = sum_vectors(vectors)
    freq = 0.0
    for v in vectors:
        freq += emotional_weight(v)
    dominant = dominant_emotion(summed) if vectors else NEUTRAL_INDEX
    if lda_model is not None and messages:
        theme = extract_theme(lda_model, messages, seed=window_seed(seed, window_index))
    else:
        theme = Theme(topic=0, top_words=(), support=len(messages))
    return WindowSummary(
        window_index=window_index,
        start_ms=window_index * duration_ms,
        end_ms=(window_index + 1) * duration_ms,
        message_count=len(messages),
        summed_emotions=summed,
        dominant_label=dominant,
        polarity=polarity(dominant),
        weighted_frequency=freq,
        theme=theme,
    )


def summarize_window(messages: Sequence[DanmakuMessage], classifier,
                     lda_model: LdaModel | None, settings: AdminSettings,
                     seed: int = 0, window_index: int | None = None) -> WindowSummary:
    """Classify and aggregate one window's messages.

    All messages must share a window; the index comes from the first
    message unless passed explicitly (required for an empty window).
    """
    if window_index is None:
        if not messages:
            window_index = 0
        else:
            window_index = assign_window(
                messages[0].video_time_ms, settings.window_duration_s
            )
    vectors = classifier.classify_batch([m.text for m in messages]) if messages else []
    return summarize_from_vectors(
        window_index, messages, vectors, lda_model, settings, seed
    )


def should_trigger(summary: WindowSummary, settings: AdminSettings) -> TriggerDecision:
    """Fire iff weighted frequency reaches the threshold (inclusive)."""
    effective = summary.weighted_frequency * settings.trigger_weight
    fire = effective >= settings.comment_threshold and summary.message_count >= 1
    reason = (
        f"F={summary.weighted_frequency:.6g} weight={settings.trigger_weight:.6g} "
        f"theta={settings.comment_threshold:.6g} count={summary.message_count}"
    )
    return TriggerDecision(fire=fire, reason=reason)


def select_style(pol: PolarityClass, dominant_label: int, policy: str) -> ResponseStyle:
    """Map window polarity to a response style under the active policy."""
    if policy.startswith("fixed:"):
        return ResponseStyle(policy.split(":", 1)[1])
    if policy == "original":
        if pol is PolarityClass.NEGATIVE:
            return ResponseStyle.TSUKKOMI
        if pol is PolarityClass.POSITIVE:
            return ResponseStyle.HUMOROUS_PRAISE
        return ResponseStyle.EXPOSITORY
    if policy == "revised":
        # Negativity is defused with humor; roasting is reserved for
        # positive windows and the surprise/realization kind of ambiguity.
        if pol is PolarityClass.NEGATIVE:
            return ResponseStyle.HUMOROUS_PRAISE
        if pol is PolarityClass.POSITIVE:
            return ResponseStyle.TSUKKOMI
        if pol is PolarityClass.AMBIGUOUS and dominant_label in _AMBIGUOUS_TSUKKOMI:
            return ResponseStyle.TSUKKOMI
        return ResponseStyle.EXPOSITORY
    raise ValueError(f"unknown style policy: {policy!r}")


def select_pov(policy: str, window_index: int, seed: int = 0) -> Pov:
    if policy == "first":
        return Pov.FIRST
    if policy == "third":
        return Pov.THIRD
    if policy == "blend":
        bit = random.Random(f"pov|{seed}|{window_index}").getrandbits(1)
        return Pov.FIRST if bit else Pov.THIRD
    raise ValueError(f"unknown pov policy: {policy!r}")


def window_exemplars(messages: Sequence[DanmakuMessage],
                     vectors: Sequence[EmotionVector], limit: int = 3) -> tuple[str, ...]:
    """Texts of the most emotional messages, for grounding the prompt."""
    ranked = sorted(
        range(len(messages)),
        key=lambda i: (-emotional_weight(vectors[i]),
                       messages[i].video_time_ms, messages[i].id),
    )
    return tuple(messages[i].text for i in ranked[:limit])


def _caption_window(window_index, messages, vectors, summary, settings,
                    generator, seed) -> CaptionPlanEntry | None:
    decision = should_trigger(summary, settings)
    if not decision.fire:
        return None
    style = select_style(summary.polarity, summary.dominant_label,
                         settings.style_policy)
    pov = select_pov(settings.pov_policy, window_index, seed)
    request = CaptionRequest(
        style=style,
        pov=pov,
        theme=summary.theme,
        dominant_label=summary.dominant_label,
        exemplars=window_exemplars(messages, vectors),
        seed=window_seed(seed, window_index),
    )
    caption = generator(request)
    render = compose_render_spec(caption, summary, settings)
    return CaptionPlanEntry(
        window_index=window_index,
        caption=ImpactCaption(caption=caption, render=render,
                              window_index=window_index),
        triggered_by=summary,
    )


def template_generator(request: CaptionRequest) -> CaptionText:
    return generate_caption(request, client=None)


def plan_captions(log: DanmakuLog, settings: AdminSettings,
                  lda_model: LdaModel | None, classifier,
                  generator: Callable[[CaptionRequest], CaptionText] | None = None,
                  seed: int = 0) -> list[CaptionPlanEntry]:
    """Batch-plan captions over a whole sorted log, one entry per window."""
    if generator is None:
        generator = template_generator
    grouped: dict[int, list[DanmakuMessage]] = {}
    for m in log.messages:
        grouped.setdefault(
            assign_window(m.video_time_ms, settings.window_duration_s), []
        ).append(m)
    plan = []
    for index in sorted(grouped):
        messages = grouped[index]
        vectors = classifier.classify_batch([m.text for m in messages])
        summary = summarize_from_vectors(index, messages, vectors, lda_model,
                                         settings, seed)
        entry = _caption_window(index, messages, vectors, summary, settings,
                                generator, seed)
        if entry is not None:
            plan.append(entry)
    return plan


@dataclass
class WindowResult:
    """What closing one window produced (entry is None when it did not fire)."""

    summary: WindowSummary
    entry: CaptionPlanEntry | None
    settings: AdminSettings


class VideoEngine:
    """Single-writer live engine for one video.

    Messages must be fed in video-time order; each call may close earlier
    windows and returns their results. Settings updates queue and apply at
    the next window boundary, so a window is always judged by one settings
    snapshot. Late messages (before the open window) join the open window
    rather than reopening closed ones.
    """

    def __init__(self, video_id: str, settings: AdminSettings,
                 lda_model: LdaModel | None, classifier,
                 generator: Callable[[CaptionRequest], CaptionText] | None = None,
                 seed: int = 0):
        self.video_id = video_id
        self.settings = settings
        self.lda_model = lda_model
        self.classifier = classifier
        self.generator = generator if generator is not None else template_generator
        self.seed = seed
        self._pending_settings: AdminSettings | None = None
        # Window indexes restart from a fresh base after a duration change
        # so they stay unique and strictly increasing across the change.
        self._base_index = 0
        self._base_start_ms = 0
        self._open_index: int | None = None
        self._open_messages: list[DanmakuMessage] = []

    def _duration_ms(self) -> int:
        return self.settings.window_duration_s * 1000

    def _window_for(self, video_time_ms: int) -> int:
        offset = max(0, video_time_ms - self._base_start_ms)
        return self._base_index + offset // self._duration_ms()

    def _bounds(self, index: int) -> tuple[int, int]:
        start = self._base_start_ms + (index - self._base_index) * self._duration_ms()
        return start, start + self._duration_ms()

    def _close_open(self) -> WindowResult:
        index = self._open_index
        messages = self._open_messages
        start_ms, end_ms = self._bounds(index)
        vectors = self.classifier.classify_batch([m.text for m in messages])
        summary = summarize_from_vectors(index, messages, vectors,
                                         self.lda_model, self.settings, self.seed)
        # The base may have moved off zero; rebuild the true bounds.
        summary = replace(summary, start_ms=start_ms, end_ms=end_ms)
        entry = _caption_window(index, messages, vectors, summary,
                                self.settings, self.generator, self.seed)
        result = WindowResult(summary=summary, entry=entry, settings=self.settings)
        self._base_index = index + 1
        self._base_start_ms = end_ms
        self._open_index = None
        self._open_messages = []
        if self._pending_settings is not None:
            self.settings = self._pending_settings
            self._pending_settings = None
        return result

    @property
    def target_settings(self) -> AdminSettings:
        """The most recently accepted settings, applied or still queued."""
        if self._pending_settings is not None:
            return self._pending_settings
        return self.settings

    def update_settings(self, settings: AdminSettings) -> AdminSettings:
        """Queue new settings; they bind from the next window boundary."""
        if self._open_index is None:
            self.settings = settings
            self._pending_settings = None
        else:
            self._pending_settings = settings
        return settings

    def feed(self, message: DanmakuMessage) -> list[WindowResult]:
        results = []
        t = message.video_time_ms
        if self._open_index is not None:
            _, open_end = self._bounds(self._open_index)
            if t >= open_end:
                results.append(self._close_open())
        if self._open_index is None:
            self._open_index = self._window_for(t)
            self._open_messages = [message]
        else:
            self._open_messages.append(message)
        return results

    def flush(self) -> list[WindowResult]:
        """Close the open window, if any. Call at end of stream."""
        if self._open_index is None:
            return []
        return [self._close_open()]
