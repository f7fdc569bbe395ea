import itertools

import httpx
import pytest
from hypothesis import given, strategies as st

from impactcap.emotion import LABEL_INDEX, PolarityClass
from impactcap.generate import CaptionSource, CaptionText, Pov, ResponseStyle
from impactcap.style import (
    BLUE,
    CAPTION_ALPHA,
    DARK_RED,
    ORANGE,
    BubbleShape,
    CachedImageClient,
    ColorRgba,
    PathSegment,
    Position,
    RenderSpec,
    bubble_geometry,
    bubble_size,
    compose_render_spec,
    font_size,
    image_prompt,
    path_to_svg,
    style_for,
    svg_to_path,
)
from impactcap.topics import Theme


class TestColors:
    def test_constants(self):
        assert (BLUE.r, BLUE.g, BLUE.b) == (30, 110, 220)
        assert (ORANGE.r, ORANGE.g, ORANGE.b) == (240, 150, 40)
        assert (DARK_RED.r, DARK_RED.g, DARK_RED.b) == (150, 25, 25)
        assert BLUE.a == ORANGE.a == DARK_RED.a == CAPTION_ALPHA == 0.75

    def test_validation(self):
        with pytest.raises(ValueError):
            ColorRgba(r=256, g=0, b=0, a=0.5)
        with pytest.raises(ValueError):
            ColorRgba(r=0, g=0, b=0, a=1.5)


class TestStyleFor:
    def test_base_looks(self):
        pos = PolarityClass.POSITIVE
        assert style_for(ResponseStyle.EXPOSITORY, pos) == (BLUE, BubbleShape.RECTANGULAR)
        assert style_for(ResponseStyle.HUMOROUS_PRAISE, pos) == (ORANGE, BubbleShape.ROUNDED)
        assert style_for(ResponseStyle.TSUKKOMI, pos) == (DARK_RED, BubbleShape.LIGHTNING)

    def test_negative_forces_lightning_for_every_style(self):
        for style in ResponseStyle:
            assert style_for(style, PolarityClass.NEGATIVE) == (
                DARK_RED, BubbleShape.LIGHTNING)

    def test_negative_flag_off_restores_base_look(self):
        got = style_for(ResponseStyle.EXPOSITORY, PolarityClass.NEGATIVE,
                        negative_flag=False)
        assert got == (BLUE, BubbleShape.RECTANGULAR)

    def test_non_negative_polarities_keep_base(self):
        for pol in (PolarityClass.POSITIVE, PolarityClass.AMBIGUOUS,
                    PolarityClass.NEUTRAL):
            assert style_for(ResponseStyle.HUMOROUS_PRAISE, pol) == (
                ORANGE, BubbleShape.ROUNDED)


class TestFontSize:
    def test_exact_points(self):
        assert font_size(0) == 36
        assert font_size(1) == 32
        assert font_size(3) == 28
        assert font_size(7) == 24
        assert font_size(15) == 20
        assert font_size(31) == 16
        assert font_size(63) == 14  # clamped at the floor
        assert font_size(10_000) == 14

    def test_monotone_nonincreasing(self):
        sizes = [font_size(n) for n in range(200)]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            font_size(-1)


def bbox_of(segments):
    xs, ys = [], []
    for seg in segments:
        pts = seg.coords
        for i in range(0, len(pts), 2):
            xs.append(pts[i])
            ys.append(pts[i + 1])
    return min(xs), min(ys), max(xs), max(ys)


class TestGeometry:
    def test_bubble_size_formula(self):
        w, h = bubble_size(10, 20)
        assert w == 0.62 * 20 * 10 + 20.0
        assert h == 40.0

    @pytest.mark.parametrize("shape", list(BubbleShape))
    def test_path_closed_and_inside_box(self, shape):
        segs = bubble_geometry(shape, 8, 24)
        assert segs[0].op == "M" and segs[-1].op == "Z"
        w, h = bubble_size(8, 24)
        x0, y0, x1, y1 = bbox_of(segs)
        assert x0 >= 0 and y0 >= 0 and x1 <= w and y1 <= h

    def test_lightning_has_12_distinct_vertices(self):
        segs = bubble_geometry(BubbleShape.LIGHTNING, 8, 24)
        pts = [s.coords for s in segs if s.op in ("M", "L")]
        # closing L repeats the first vertex
        assert pts[0] == pts[-1]
        assert len(set(pts[:-1])) == 12

    def test_lightning_vertices_jagged(self):
        segs = bubble_geometry(BubbleShape.LIGHTNING, 8, 24)
        ys = [s.coords[1] for s in segs if s.op in ("M", "L")][:4]  # top edge
        assert ys[0] == ys[2] == 0.0
        assert ys[1] == ys[3] > 0.0

    def test_rounded_corner_radius_larger_than_rectangular(self):
        rounded = bubble_geometry(BubbleShape.ROUNDED, 8, 24)
        rect = bubble_geometry(BubbleShape.RECTANGULAR, 8, 24)
        assert rounded[0].coords[0] > rect[0].coords[0]

    def test_zero_length_text_rejected(self):
        with pytest.raises(ValueError):
            bubble_geometry(BubbleShape.ROUNDED, 0, 24)

    def test_segment_arity_enforced(self):
        with pytest.raises(ValueError):
            PathSegment("Q", (1.0, 2.0))
        with pytest.raises(ValueError):
            PathSegment("X", ())


class TestSvgPath:
    @pytest.mark.parametrize("shape", list(BubbleShape))
    def test_round_trip_exact(self, shape):
        segs = bubble_geometry(shape, 11, 17)
        data = path_to_svg(segs)
        assert svg_to_path(data) == segs
        assert path_to_svg(svg_to_path(data)) == data

    def test_rejects_junk(self):
        with pytest.raises(ValueError):
            svg_to_path("M 1")
        with pytest.raises(ValueError):
            svg_to_path("W 1 2")

    @given(st.integers(min_value=1, max_value=60), st.integers(min_value=14, max_value=36),
           st.sampled_from(list(BubbleShape)))
    def test_round_trip_property(self, n, font, shape):
        segs = bubble_geometry(shape, n, font)
        assert svg_to_path(path_to_svg(segs)) == segs


class TestRenderSpec:
    def test_display_interval_ordered(self):
        with pytest.raises(ValueError):
            RenderSpec(fill=BLUE, shape=BubbleShape.RECTANGULAR, font_size_px=20,
                       position=Position.TOP, display_start_ms=5, display_end_ms=5,
                       obscure_danmaku=False,
                       geometry=tuple(bubble_geometry(BubbleShape.RECTANGULAR, 3, 20)))

    def test_font_bounds(self):
        with pytest.raises(ValueError):
            RenderSpec(fill=BLUE, shape=BubbleShape.RECTANGULAR, font_size_px=13,
                       position=Position.TOP, display_start_ms=0, display_end_ms=1,
                       obscure_danmaku=False,
                       geometry=tuple(bubble_geometry(BubbleShape.RECTANGULAR, 3, 20)))


class TestCompose:
    def test_fields_follow_summary_and_settings(self, classifier):
        from impactcap.engine import AdminSettings, summarize_window
        from synth import make_message

        msgs = [make_message(i, 1000 * i, "吓死我了") for i in range(1, 4)]
        summary = summarize_window(msgs, classifier, None, AdminSettings())
        cap = CaptionText(text="有点吓人", style=ResponseStyle.HUMOROUS_PRAISE,
                          pov=Pov.THIRD, source=CaptionSource.TEMPLATE)
        spec = compose_render_spec(cap, summary, AdminSettings(obscure_danmaku=True))
        assert spec.fill == DARK_RED and spec.shape is BubbleShape.LIGHTNING
        assert spec.font_size_px == font_size(3)
        assert spec.position is Position.TOP
        assert spec.obscure_danmaku is True
        assert spec.display_start_ms == summary.end_ms
        assert spec.display_end_ms == summary.end_ms + 8000
        assert spec.geometry


class TestImagePrompt:
    def test_mentions_color_shape_and_translucency(self):
        p = image_prompt(ResponseStyle.EXPOSITORY, Theme(0, ("高能",), 2),
                         LABEL_INDEX["excitement"])
        assert "blue" in p and "rectangular" in p and "translucent" in p
        assert "excitement" in p

    def test_distinct_per_style(self):
        prompts = {image_prompt(s, None, 0) for s in ResponseStyle}
        assert len(prompts) == 3


class TestCachedImageClient:
    def test_caches_by_look(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(200, json={"image_url": "http://img/1.png"})

        client = CachedImageClient("http://img.test",
                                   transport=httpx.MockTransport(handler))
        a = client.image_for(ResponseStyle.TSUKKOMI)
        b = client.image_for(ResponseStyle.TSUKKOMI)
        assert a == b == "http://img/1.png"
        assert len(calls) == 1

    def test_failure_returns_none(self):
        def handler(request):
            return httpx.Response(500)

        client = CachedImageClient("http://img.test",
                                   transport=httpx.MockTransport(handler))
        assert client.image_for(ResponseStyle.TSUKKOMI) is None
