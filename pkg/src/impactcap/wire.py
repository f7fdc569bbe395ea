"""Newline-JSON wire codec for stream events, caption plans, and summaries.

Key order in every payload is part of the contract: clients and golden
files compare bytes, so dicts here are always built in schema order and
serialized compactly with ensure_ascii off.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .engine import AdminSettings, CaptionPlanEntry, WindowSummary
from .ingest import DanmakuMessage, DisplayMode
from .style import ImpactCaption, RenderSpec, path_to_svg


class EventType(str, enum.Enum):
    DANMAKU = "danmaku"
    CAPTION = "caption"
    SETTINGS = "settings"
    HEARTBEAT = "heartbeat"


class WireError(ValueError):
    pass


@dataclass(frozen=True)
class StreamEvent:
    type: EventType
    seq: int
    payload: dict

    def __post_init__(self):
        if self.seq < 1:
            raise WireError(f"seq must be >= 1, got {self.seq}")


_DANMAKU_KEYS = (
    "id", "video_id", "video_time_ms", "wall_time_ms", "text",
    "user_hash", "display_color", "display_mode",
)
_CAPTION_KEYS = ("window_index", "text", "style", "pov", "source", "render")
_RENDER_KEYS = (
    "fill", "shape", "font_size_px", "position", "display_start_ms",
    "display_end_ms", "obscure_danmaku", "geometry_svg_path",
)


def danmaku_payload(message: DanmakuMessage) -> dict:
    return {
        "id": message.id,
        "video_id": message.video_id,
        "video_time_ms": message.video_time_ms,
        "wall_time_ms": message.wall_time_ms,
        "text": message.text,
        "user_hash": message.user_hash,
        "display_color": message.display_color,
        "display_mode": message.display_mode.value,
    }


def message_from_payload(payload: dict) -> DanmakuMessage:
    return DanmakuMessage(
        id=int(payload["id"]),
        video_id=str(payload["video_id"]),
        video_time_ms=int(payload["video_time_ms"]),
        wall_time_ms=int(payload["wall_time_ms"]),
        text=str(payload["text"]),
        user_hash=str(payload["user_hash"]),
        display_color=int(payload["display_color"]),
        display_mode=DisplayMode(payload["display_mode"]),
    )


def render_payload(spec: RenderSpec) -> dict:
    return {
        "fill": {"r": spec.fill.r, "g": spec.fill.g, "b": spec.fill.b,
                 "a": spec.fill.a},
        "shape": spec.shape.value,
        "font_size_px": spec.font_size_px,
        "position": spec.position.value,
        "display_start_ms": spec.display_start_ms,
        "display_end_ms": spec.display_end_ms,
        "obscure_danmaku": spec.obscure_danmaku,
        "geometry_svg_path": path_to_svg(list(spec.geometry)),
    }


def caption_payload(caption: ImpactCaption) -> dict:
    return {
        "window_index": caption.window_index,
        "text": caption.caption.text,
        "style": caption.caption.style.value,
        "pov": caption.caption.pov.value,
        "source": caption.caption.source.value,
        "render": render_payload(caption.render),
    }


def settings_payload(settings: AdminSettings) -> dict:
    return settings.to_dict()


def heartbeat_payload() -> dict:
    return {}


def make_event(type_: EventType, seq: int, payload: dict) -> StreamEvent:
    return StreamEvent(type=type_, seq=seq, payload=payload)


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"),
                      allow_nan=False)


def encode_event(event: StreamEvent) -> str:
    """One event as a JSON line (no trailing newline), keys in schema order."""
    return _dumps({"type": event.type.value, "seq": event.seq,
                   "payload": event.payload})


def _require_keys(payload: dict, keys, what: str):
    if set(payload) != set(keys):
        raise WireError(f"{what} payload keys {sorted(payload)} != {sorted(keys)}")


def validate_payload(type_: EventType, payload: dict) -> None:
    if not isinstance(payload, dict):
        raise WireError("payload must be an object")
    if type_ is EventType.DANMAKU:
        _require_keys(payload, _DANMAKU_KEYS, "danmaku")
    elif type_ is EventType.CAPTION:
        _require_keys(payload, _CAPTION_KEYS, "caption")
        _require_keys(payload["render"], _RENDER_KEYS, "render")
    elif type_ is EventType.SETTINGS:
        _require_keys(payload, AdminSettings().to_dict().keys(), "settings")
    elif type_ is EventType.HEARTBEAT:
        _require_keys(payload, (), "heartbeat")


def event_from_dict(doc) -> StreamEvent:
    if not isinstance(doc, dict) or set(doc) != {"type", "seq", "payload"}:
        raise WireError("event must have exactly type, seq, payload")
    try:
        type_ = EventType(doc["type"])
    except ValueError:
        raise WireError(f"unknown event type: {doc['type']!r}") from None
    seq = doc["seq"]
    if not isinstance(seq, int) or isinstance(seq, bool):
        raise WireError(f"seq must be an integer, got {seq!r}")
    validate_payload(type_, doc["payload"])
    return StreamEvent(type=type_, seq=seq, payload=doc["payload"])


def decode_event(line: str) -> StreamEvent:
    """Parse and validate one event line; raises WireError on any defect."""
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise WireError(f"bad JSON: {exc}") from None
    return event_from_dict(doc)


def summary_payload(summary: WindowSummary) -> dict:
    return {
        "window_index": summary.window_index,
        "start_ms": summary.start_ms,
        "end_ms": summary.end_ms,
        "message_count": summary.message_count,
        "summed_emotions": list(summary.summed_emotions.scores),
        "dominant_label": summary.dominant_label,
        "polarity": summary.polarity.value,
        "weighted_frequency": summary.weighted_frequency,
        "theme": {
            "topic": summary.theme.topic,
            "top_words": list(summary.theme.top_words),
            "support": summary.theme.support,
        },
    }


def plan_entry_line(entry: CaptionPlanEntry) -> str:
    return _dumps({
        "window_index": entry.window_index,
        "caption": caption_payload(entry.caption),
        "triggered_by": summary_payload(entry.triggered_by),
    })


def serialize_plan(entries) -> str:
    """Newline-delimited plan, one entry per line; the golden-file format."""
    return "".join(plan_entry_line(e) + "\n" for e in entries)


def serialize_summaries(summaries) -> str:
    return "".join(_dumps(summary_payload(s)) + "\n" for s in summaries)
