"""Parse, normalize, and tokenize danmaku from wire events and recorded logs."""

from __future__ import annotations

import enum
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

MAX_TEXT_CODEPOINTS = 100


class IngestError(Exception):
    pass


class EmptyText(IngestError):
    """Danmaku text is empty after normalization."""


class BadTimestamp(IngestError):
    """Negative video time."""


class MalformedXml(IngestError):
    """XML did not parse, or no usable danmaku element was found."""


class DisplayMode(str, enum.Enum):
    SCROLL = "scroll"
    TOP = "top"
    BOTTOM = "bottom"


@dataclass(frozen=True)
class DanmakuMessage:
    id: int
    video_id: str
    video_time_ms: int
    wall_time_ms: int
    text: str
    user_hash: str = ""
    display_color: int = 0xFFFFFF
    display_mode: DisplayMode = DisplayMode.SCROLL


class TokenKind(str, enum.Enum):
    CJK_BIGRAM = "cjk_bigram"
    CJK_UNIGRAM = "cjk_unigram"
    LATIN_WORD = "latin_word"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind


@dataclass
class DanmakuLog:
    """Messages of one video, sorted by (video_time_ms, id), ids unique."""

    video_id: str
    messages: list[DanmakuMessage] = field(default_factory=list)
    warnings: int = 0


def normalize(
    raw_text: str,
    *,
    id: int,
    video_id: str,
    video_time_ms: int,
    wall_time_ms: int,
    user_hash: str = "",
    display_color: int = 0xFFFFFF,
    display_mode: DisplayMode = DisplayMode.SCROLL,
) -> DanmakuMessage:
    """Build a normalized message: NFC, trimmed, capped at 100 code points."""
    if video_time_ms < 0:
        raise BadTimestamp(f"video_time_ms must be >= 0, got {video_time_ms}")
    text = unicodedata.normalize("NFC", raw_text).strip()
    if not text:
        raise EmptyText("danmaku text is empty after trimming")
    if len(text) > MAX_TEXT_CODEPOINTS:
        text = text[:MAX_TEXT_CODEPOINTS]
    return DanmakuMessage(
        id=id,
        video_id=video_id,
        video_time_ms=video_time_ms,
        wall_time_ms=wall_time_ms,
        text=text,
        user_hash=user_hash,
        display_color=display_color & 0xFFFFFF,
        display_mode=display_mode,
    )


def _is_cjk(ch: str) -> bool:
    # Han ideographs plus kana; enough for danmaku text, no segmenter needed.
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0xF900 <= cp <= 0xFAFF
        or 0x3040 <= cp <= 0x30FF
    )


def _is_wordish(ch: str) -> bool:
    return ch.isalnum() and not _is_cjk(ch)


def tokenize(text: str) -> list[Token]:
    """Split text into CJK bigrams/unigrams and lowercased latin or numeric words.

    CJK runs of length n >= 2 emit their n-1 overlapping character bigrams;
    a run of length 1 emits a single unigram. Everything else splits on
    non-alphanumeric characters. Pure and deterministic.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if _is_cjk(ch):
            j = i
            while j < n and _is_cjk(text[j]):
                j += 1
            run = text[i:j]
            if len(run) == 1:
                tokens.append(Token(run, TokenKind.CJK_UNIGRAM))
            else:
                for k in range(len(run) - 1):
                    tokens.append(Token(run[k : k + 2], TokenKind.CJK_BIGRAM))
            i = j
        elif _is_wordish(ch):
            j = i
            while j < n and _is_wordish(text[j]):
                j += 1
            run = text[i:j].lower()
            kind = TokenKind.NUMERIC if run.isdigit() else TokenKind.LATIN_WORD
            tokens.append(Token(run, kind))
            i = j
        else:
            i += 1
    return tokens


# <d p="playback_s,mode,fontsize,color,unix_ts,pool,user_hash,row_id">text</d>
_P_FIELD_COUNT = 8
_MODE_MAP = {4: DisplayMode.BOTTOM, 5: DisplayMode.TOP}


def parse_bilibili_xml(data: bytes, video_id: str = "") -> DanmakuLog:
    """Parse a community-format danmaku XML dump into a sorted DanmakuLog.

    Malformed elements (wrong field count, non-numeric fields, empty text,
    duplicate ids) are skipped and counted; the parse only fails when the XML
    itself is unreadable or no element survives.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(f"unreadable danmaku XML: {exc}") from exc

    if not video_id:
        chat_id = root.findtext("chatid")
        video_id = chat_id.strip() if chat_id else ""

    messages: list[DanmakuMessage] = []
    seen_ids: set[int] = set()
    warnings = 0
    for el in root.iter("d"):
        p = el.get("p", "")
        fields = p.split(",")
        if len(fields) != _P_FIELD_COUNT:
            warnings += 1
            continue
        try:
            playback_s = float(fields[0])
            mode = int(fields[1])
            int(fields[2])  # font size, unused here
            color = int(fields[3])
            unix_ts = int(fields[4])
            row_id = int(fields[7])
        except ValueError:
            warnings += 1
            continue
        if playback_s < 0 or row_id in seen_ids:
            warnings += 1
            continue
        try:
            msg = normalize(
                el.text or "",
                id=row_id,
                video_id=video_id,
                video_time_ms=round(playback_s * 1000),
                wall_time_ms=unix_ts * 1000,
                user_hash=fields[6],
                display_color=color,
                display_mode=_MODE_MAP.get(mode, DisplayMode.SCROLL),
            )
        except IngestError:
            warnings += 1
            continue
        seen_ids.add(row_id)
        messages.append(msg)

    if not messages:
        raise MalformedXml("no parseable danmaku element in input")
    messages.sort(key=lambda m: (m.video_time_ms, m.id))
    return DanmakuLog(video_id=video_id, messages=messages, warnings=warnings)
