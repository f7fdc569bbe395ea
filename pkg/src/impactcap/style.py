"""Visual styling of captions: colors, shapes, sizing, vector geometry.

Everything here is pure; the optional image endpoint is the one exception
and it never blocks caption composition.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import httpx

from .emotion import LABELS, PolarityClass
from .generate import CaptionText, ResponseStyle

if TYPE_CHECKING:
    from .engine import AdminSettings, WindowSummary


class BubbleShape(str, enum.Enum):
    ROUNDED = "rounded"
    RECTANGULAR = "rectangular"
    LIGHTNING = "lightning"


class Position(str, enum.Enum):
    TOP = "top"
    MIDDLE = "middle"
    BOTTOM = "bottom"


@dataclass(frozen=True)
class ColorRgba:
    r: int
    g: int
    b: int
    a: float

    def __post_init__(self):
        for c in (self.r, self.g, self.b):
            if not 0 <= c <= 255:
                raise ValueError(f"channel out of range: {c}")
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"alpha out of range: {self.a}")


CAPTION_ALPHA = 0.75

# One table to re-skin; the colors are mid-saturation picks for the three
# nominal hues (calm blue, warm orange, negative dark red).
BLUE = ColorRgba(30, 110, 220, CAPTION_ALPHA)
ORANGE = ColorRgba(240, 150, 40, CAPTION_ALPHA)
DARK_RED = ColorRgba(150, 25, 25, CAPTION_ALPHA)

_BASE_LOOK = {
    ResponseStyle.EXPOSITORY: (BLUE, BubbleShape.RECTANGULAR),
    ResponseStyle.HUMOROUS_PRAISE: (ORANGE, BubbleShape.ROUNDED),
    ResponseStyle.TSUKKOMI: (DARK_RED, BubbleShape.LIGHTNING),
}


def style_for(style: ResponseStyle, polarity: PolarityClass,
              negative_flag: bool = True) -> tuple[ColorRgba, BubbleShape]:
    """Color and shape for a caption.

    The lightning look marks negativity: always for tsukkomi, and for any
    style once the window polarity is negative (unless flagged off).
    """
    if negative_flag and polarity is PolarityClass.NEGATIVE:
        return DARK_RED, BubbleShape.LIGHTNING
    return _BASE_LOOK[style]


def font_size(window_message_count: int, settings=None) -> int:
    """Caption font in px, shrinking as the window gets denser."""
    if window_message_count < 0:
        raise ValueError("message count must be >= 0")
    size = round(36 - 4 * math.log2(1 + window_message_count))
    return max(14, min(36, size))


@dataclass(frozen=True)
class PathSegment:
    """One vector path step: op M/L/Q/Z with 0, 2, or 4 coordinates."""

    op: str
    coords: tuple[float, ...]

    def __post_init__(self):
        arity = {"M": 2, "L": 2, "Q": 4, "Z": 0}
        if self.op not in arity:
            raise ValueError(f"unknown path op: {self.op}")
        if len(self.coords) != arity[self.op]:
            raise ValueError(f"op {self.op} takes {arity[self.op]} coords")


def bubble_size(text_len_codepoints: int, font_size_px: int) -> tuple[float, float]:
    pad = 0.5 * font_size_px
    width = 0.62 * font_size_px * text_len_codepoints + 2 * pad
    height = 2.0 * font_size_px
    return width, height


def bubble_geometry(shape: BubbleShape, text_len_codepoints: int,
                    font_size_px: int) -> list[PathSegment]:
    """Closed outline of the caption bubble, anchored at (0, 0).

    All coordinates stay inside the bubble_size box and the path returns to
    its first point before Z.
    """
    if text_len_codepoints < 1:
        raise ValueError("text length must be >= 1")
    w, h = bubble_size(text_len_codepoints, font_size_px)
    f = float(font_size_px)
    if shape is BubbleShape.LIGHTNING:
        return _lightning_path(w, h, f)
    r = 0.5 * f if shape is BubbleShape.ROUNDED else 0.15 * f
    r = min(r, w / 2, h / 2)
    segs = [
        PathSegment("M", (r, 0.0)),
        PathSegment("L", (w - r, 0.0)),
        PathSegment("Q", (w, 0.0, w, r)),
        PathSegment("L", (w, h - r)),
        PathSegment("Q", (w, h, w - r, h)),
        PathSegment("L", (r, h)),
        PathSegment("Q", (0.0, h, 0.0, h - r)),
        PathSegment("L", (0.0, r)),
        PathSegment("Q", (0.0, 0.0, r, 0.0)),
        PathSegment("Z", ()),
    ]
    return segs


def _lightning_path(w: float, h: float, f: float) -> list[PathSegment]:
    # 12 jagged vertices around the box: 4 top, 2 right, 4 bottom, 2 left.
    # Each sits on a midline inset 0.2*f from its edge, displaced by
    # alternating +-0.2*f, so everything stays inside the box.
    inset = 0.2 * f
    verts = []
    spots = (
        [("top", x) for x in (1 / 8, 3 / 8, 5 / 8, 7 / 8)]
        + [("right", y) for y in (1 / 3, 2 / 3)]
        + [("bottom", x) for x in (7 / 8, 5 / 8, 3 / 8, 1 / 8)]
        + [("left", y) for y in (2 / 3, 1 / 3)]
    )
    for i, (edge, frac) in enumerate(spots):
        # midline +- inset: even vertices land on the edge, odd ones 2*inset in
        off = 0.0 if i % 2 == 0 else 2 * inset
        if edge == "top":
            verts.append((w * frac, off))
        elif edge == "bottom":
            verts.append((w * frac, h - off))
        elif edge == "right":
            verts.append((w - off, h * frac))
        else:
            verts.append((off, h * frac))
    segs = [PathSegment("M", verts[0])]
    segs.extend(PathSegment("L", v) for v in verts[1:])
    segs.append(PathSegment("L", verts[0]))
    segs.append(PathSegment("Z", ()))
    return segs


def path_to_svg(segments: list[PathSegment]) -> str:
    """SVG path syntax with repr-exact floats, so parsing gives bits back."""
    parts = []
    for seg in segments:
        parts.append(seg.op)
        parts.extend(repr(c) for c in seg.coords)
    return " ".join(parts)


def svg_to_path(data: str) -> list[PathSegment]:
    arity = {"M": 2, "L": 2, "Q": 4, "Z": 0}
    tokens = data.split()
    segments = []
    i = 0
    while i < len(tokens):
        op = tokens[i]
        if op not in arity:
            raise ValueError(f"bad path token: {op!r}")
        n = arity[op]
        coords = tuple(float(t) for t in tokens[i + 1 : i + 1 + n])
        if len(coords) != n:
            raise ValueError(f"truncated coords for op {op}")
        segments.append(PathSegment(op, coords))
        i += 1 + n
    return segments


@dataclass(frozen=True)
class RenderSpec:
    fill: ColorRgba
    shape: BubbleShape
    font_size_px: int
    position: Position
    display_start_ms: int
    display_end_ms: int
    obscure_danmaku: bool
    geometry: tuple[PathSegment, ...]

    def __post_init__(self):
        if self.display_end_ms <= self.display_start_ms:
            raise ValueError("display_end_ms must be after display_start_ms")
        if not 14 <= self.font_size_px <= 48:
            raise ValueError(f"font size out of range: {self.font_size_px}")


@dataclass(frozen=True)
class ImpactCaption:
    caption: CaptionText
    render: RenderSpec
    window_index: int


def compose_render_spec(caption: CaptionText, summary: "WindowSummary",
                        settings: "AdminSettings") -> RenderSpec:
    """Assemble the full visual spec for a caption of a finished window.

    The caption displays for one window duration starting at the window's
    end boundary.
    """
    fill, shape = style_for(caption.style, summary.polarity)
    size = font_size(summary.message_count, settings)
    duration_ms = settings.window_duration_s * 1000
    return RenderSpec(
        fill=fill,
        shape=shape,
        font_size_px=size,
        position=Position(settings.display_position),
        display_start_ms=summary.end_ms,
        display_end_ms=summary.end_ms + duration_ms,
        obscure_danmaku=settings.obscure_danmaku,
        geometry=tuple(bubble_geometry(shape, max(1, len(caption.text)), size)),
    )


_COLOR_WORD = {BLUE: "blue", ORANGE: "orange", DARK_RED: "dark red"}
_SHAPE_WORD = {
    BubbleShape.ROUNDED: "rounded",
    BubbleShape.RECTANGULAR: "rectangular",
    BubbleShape.LIGHTNING: "lightning bolt",
}


def image_prompt(style: ResponseStyle, theme, dominant_label: int) -> str:
    """English text-to-image prompt for the caption's bubble background."""
    color, shape = _BASE_LOOK[style]
    color_word = _COLOR_WORD[color]
    emotion = LABELS[dominant_label]
    hint = ""
    if theme is not None and getattr(theme, "top_words", ()):
        hint = f", about {' '.join(theme.top_words[:2])}"
    return (
        f"A {color_word} {_SHAPE_WORD[shape]} speech bubble with a translucent "
        f"background, flat vector style, conveying {emotion}{hint}"
    )


class CachedImageClient:
    """Optional diffusion endpoint: POST {prompt} -> {image_url}.

    Results are cached by (style, shape, color); failures return None and
    are retried on the next request.
    """

    def __init__(self, base_url: str, timeout: float = 20.0, transport=None):
        self._client = httpx.Client(base_url=base_url, timeout=timeout,
                                    transport=transport)
        self._cache: dict[tuple, str] = {}

    def image_for(self, style: ResponseStyle, theme=None,
                  dominant_label: int = 27) -> str | None:
        color, shape = _BASE_LOOK[style]
        key = (style, shape, (color.r, color.g, color.b))
        if key in self._cache:
            return self._cache[key]
        try:
            resp = self._client.post(
                "/", json={"prompt": image_prompt(style, theme, dominant_label)}
            )
            resp.raise_for_status()
            url = str(resp.json()["image_url"])
        except Exception:
            return None
        self._cache[key] = url
        return url
