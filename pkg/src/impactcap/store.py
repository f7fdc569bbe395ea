"""Append-only event persistence, one newline-JSON log per video.

A submit is acknowledged only after its line is fsynced. Recovery replays
the log: a torn final line (no terminating newline) is discarded, anything
else that fails to parse is real corruption and refuses to load.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .engine import AdminSettings
from .wire import StreamEvent, WireError, event_from_dict

VIDEO_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class StoreError(Exception):
    pass


class CorruptLog(StoreError):
    pass


class DuplicateVideoId(StoreError):
    pass


class InvalidVideoId(StoreError):
    pass


@dataclass(frozen=True)
class VideoRecord:
    video_id: str
    title: str = ""
    duration_ms: int = 0
    settings: AdminSettings = AdminSettings()
    model_ref: str = ""
    preloaded_log_ref: str = ""

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "title": self.title,
            "duration_ms": self.duration_ms,
            "settings": self.settings.to_dict(),
            "model_ref": self.model_ref,
            "preloaded_log_ref": self.preloaded_log_ref,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "VideoRecord":
        return cls(
            video_id=str(doc["video_id"]),
            title=str(doc.get("title", "")),
            duration_ms=int(doc.get("duration_ms", 0)),
            settings=AdminSettings.from_dict(doc.get("settings", {})),
            model_ref=str(doc.get("model_ref", "")),
            preloaded_log_ref=str(doc.get("preloaded_log_ref", "")),
        )


class EventStore:
    """Files under one root: {id}.meta.json, {id}.events.jsonl, {id}.lda.json."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._files: dict[str, object] = {}

    def meta_path(self, video_id: str) -> Path:
        return self.root / f"{video_id}.meta.json"

    def events_path(self, video_id: str) -> Path:
        return self.root / f"{video_id}.events.jsonl"

    def model_path(self, video_id: str) -> Path:
        return self.root / f"{video_id}.lda.json"

    def register(self, record: VideoRecord) -> VideoRecord:
        if not VIDEO_ID_RE.match(record.video_id):
            raise InvalidVideoId(
                f"video_id must match {VIDEO_ID_RE.pattern}, got {record.video_id!r}"
            )
        path = self.meta_path(record.video_id)
        if path.exists():
            raise DuplicateVideoId(record.video_id)
        self._write_meta(record)
        return record

    def update_record(self, record: VideoRecord) -> VideoRecord:
        if not self.meta_path(record.video_id).exists():
            raise StoreError(f"unknown video: {record.video_id}")
        self._write_meta(record)
        return record

    def _write_meta(self, record: VideoRecord) -> None:
        path = self.meta_path(record.video_id)
        tmp = path.with_suffix(".json.tmp")
        data = json.dumps(record.to_dict(), ensure_ascii=False, indent=1)
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(data + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)

    def videos(self) -> dict[str, VideoRecord]:
        out = {}
        for path in sorted(self.root.glob("*.meta.json")):
            with open(path, encoding="utf-8") as fh:
                record = VideoRecord.from_dict(json.load(fh))
            out[record.video_id] = record
        return out

    def _file(self, video_id: str):
        fh = self._files.get(video_id)
        if fh is None:
            fh = open(self.events_path(video_id), "ab")
            self._files[video_id] = fh
        return fh

    def append_event(self, video_id: str, wall_time_ms: int,
                     event: StreamEvent) -> None:
        """Durably append one event; returns only after fsync."""
        line = json.dumps(
            {"wall_time_ms": wall_time_ms,
             "event": {"type": event.type.value, "seq": event.seq,
                       "payload": event.payload}},
            ensure_ascii=False, separators=(",", ":"),
        )
        fh = self._file(video_id)
        fh.write(line.encode("utf-8") + b"\n")
        fh.flush()
        os.fsync(fh.fileno())

    def close(self) -> None:
        for fh in self._files.values():
            fh.close()
        self._files.clear()

    def read_events(self, video_id: str) -> tuple[list[tuple[int, StreamEvent]], int]:
        """All durable events in order, plus the count of discarded tails.

        Raises CorruptLog when a newline-terminated line fails to parse or
        seq continuity breaks; an unterminated final line is only a torn
        write and is dropped.
        """
        path = self.events_path(video_id)
        if not path.exists():
            return [], 0
        data = path.read_bytes()
        if not data:
            return [], 0
        complete, sep, tail = data.rpartition(b"\n")
        discarded = 1 if tail else 0
        events = []
        expected_seq = 1
        if not sep:
            return [], discarded
        for lineno, raw in enumerate(complete.split(b"\n"), start=1):
            try:
                doc = json.loads(raw.decode("utf-8"))
                if not isinstance(doc, dict) or set(doc) != {"wall_time_ms", "event"}:
                    raise WireError("log line must have wall_time_ms and event")
                wall = doc["wall_time_ms"]
                if not isinstance(wall, int) or isinstance(wall, bool):
                    raise WireError("wall_time_ms must be an integer")
                event = event_from_dict(doc["event"])
            except (UnicodeDecodeError, ValueError) as exc:
                raise CorruptLog(f"{path.name}:{lineno}: {exc}") from None
            if event.seq != expected_seq:
                raise CorruptLog(
                    f"{path.name}:{lineno}: seq {event.seq}, expected {expected_seq}"
                )
            expected_seq += 1
            events.append((wall, event))
        return events, discarded
