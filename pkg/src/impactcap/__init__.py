"""Real-time danmaku moderation: emotion-aware windows, topic themes, styled captions."""

from .emotion import (
    LABELS,
    EmotionVector,
    HttpClassifier,
    LexiconClassifier,
    PolarityClass,
    classify,
    dominant_emotion,
    emotional_weight,
    load_lexicon,
)
from .engine import (
    AdminSettings,
    CaptionPlanEntry,
    TriggerDecision,
    VideoEngine,
    WindowSummary,
    assign_window,
    plan_captions,
    select_pov,
    select_style,
    should_trigger,
    summarize_window,
)
from .generate import (
    CaptionRequest,
    CaptionText,
    GenerationConstraints,
    Pov,
    ResponseStyle,
    fallback_caption,
    generate_caption,
    validate_caption,
)
from .ingest import (
    DanmakuLog,
    DanmakuMessage,
    DisplayMode,
    normalize,
    parse_bilibili_xml,
    tokenize,
)
from .replay import ReplayResult, replay_log
from .style import ImpactCaption, RenderSpec, compose_render_spec, font_size, style_for
from .topics import LdaModel, Theme, TopicMixture, extract_theme, fit_lda, infer_mixture

__version__ = "0.1.0"

__all__ = [
    "AdminSettings",
    "CaptionPlanEntry",
    "CaptionRequest",
    "CaptionText",
    "DanmakuLog",
    "DanmakuMessage",
    "DisplayMode",
    "EmotionVector",
    "GenerationConstraints",
    "HttpClassifier",
    "ImpactCaption",
    "LABELS",
    "LdaModel",
    "LexiconClassifier",
    "PolarityClass",
    "Pov",
    "RenderSpec",
    "ReplayResult",
    "ResponseStyle",
    "Theme",
    "TopicMixture",
    "TriggerDecision",
    "VideoEngine",
    "WindowSummary",
    "assign_window",
    "classify",
    "compose_render_spec",
    "dominant_emotion",
    "emotional_weight",
    "extract_theme",
    "fallback_caption",
    "fit_lda",
    "font_size",
    "generate_caption",
    "infer_mixture",
    "load_lexicon",
    "normalize",
    "parse_bilibili_xml",
    "plan_captions",
    "replay_log",
    "select_pov",
    "select_style",
    "should_trigger",
    "style_for",
    "summarize_window",
    "tokenize",
    "validate_caption",
]
