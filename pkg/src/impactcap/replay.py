"""Replay a recorded danmaku log through a fresh engine.

Pacing is cosmetic: the transcript carries only log-derived times, so the
same (log, settings, seed) gives byte-identical output at any speed. The
sleep function is injectable for tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .engine import (
    AdminSettings,
    CaptionPlanEntry,
    CaptionRequest,
    CaptionText,
    VideoEngine,
)
from .ingest import DanmakuLog, DanmakuMessage
from .topics import LdaModel
from .wire import (
    EventType,
    StreamEvent,
    caption_payload,
    danmaku_payload,
    encode_event,
    make_event,
)

INSTANT = "instant"


@dataclass
class ReplayResult:
    plan: list[CaptionPlanEntry]
    events: list[StreamEvent]
    message_count: int

    @property
    def transcript(self) -> str:
        return "".join(encode_event(e) + "\n" for e in self.events)


def replay_log(log: DanmakuLog, settings: AdminSettings,
               lda_model: LdaModel | None, classifier,
               generator: Callable[[CaptionRequest], CaptionText] | None = None,
               speed: float | str = INSTANT, seed: int = 0,
               sleep: Callable[[float], None] = time.sleep) -> ReplayResult:
    """Feed the log in order, emitting danmaku and caption events.

    speed is a wall-clock factor (1.0 = real time) or "instant". Caption
    events for a window appear after every danmaku event of that window.
    """
    if speed != INSTANT:
        speed = float(speed)
        if not speed > 0:
            raise ValueError(f"speed must be > 0 or {INSTANT!r}, got {speed}")
    engine = VideoEngine(log.video_id, settings, lda_model, classifier,
                         generator=generator, seed=seed)
    events: list[StreamEvent] = []
    plan: list[CaptionPlanEntry] = []
    seq = 0
    prev_ms: int | None = None

    def emit(type_: EventType, payload: dict) -> None:
        nonlocal seq
        seq += 1
        events.append(make_event(type_, seq, payload))

    def drain(results) -> None:
        for result in results:
            if result.entry is not None:
                plan.append(result.entry)
                emit(EventType.CAPTION, caption_payload(result.entry.caption))

    for message in log.messages:
        if prev_ms is not None and speed != INSTANT:
            delay_s = max(0, message.video_time_ms - prev_ms) / 1000.0 / speed
            sleep(delay_s)
        prev_ms = message.video_time_ms
        emit(EventType.DANMAKU, danmaku_payload(message))
        drain(engine.feed(message))
    drain(engine.flush())
    return ReplayResult(plan=plan, events=events, message_count=len(log.messages))
