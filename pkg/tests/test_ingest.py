import pytest
from hypothesis import given, strategies as st

from impactcap.ingest import (
    MAX_TEXT_CODEPOINTS,
    BadTimestamp,
    DisplayMode,
    EmptyText,
    MalformedXml,
    Token,
    TokenKind,
    normalize,
    parse_bilibili_xml,
    tokenize,
)


def msg(text, **kw):
    defaults = dict(id=1, video_id="v", video_time_ms=0, wall_time_ms=0)
    defaults.update(kw)
    return normalize(text, **defaults)


class TestNormalize:
    def test_nfc_and_trim(self):
        assert msg("  café  ").text == "café"

    def test_caps_at_100_codepoints(self):
        assert len(msg("x" * 300).text) == MAX_TEXT_CODEPOINTS

    def test_empty_after_trim_raises(self):
        with pytest.raises(EmptyText):
            msg("   　  ")

    def test_negative_time_raises(self):
        with pytest.raises(BadTimestamp):
            msg("ok", video_time_ms=-1)

    def test_color_masked_to_24_bits(self):
        assert msg("ok", display_color=0x1FF00FF00).display_color == 0xF00FF00 & 0xFFFFFF

    def test_defaults(self):
        m = msg("ok")
        assert m.display_color == 0xFFFFFF
        assert m.display_mode is DisplayMode.SCROLL


class TestTokenize:
    def test_cjk_run_emits_overlapping_bigrams(self):
        assert [t.surface for t in tokenize("高能预警")] == ["高能", "能预", "预警"]
        assert all(t.kind is TokenKind.CJK_BIGRAM for t in tokenize("高能预警"))

    def test_single_cjk_char_is_unigram(self):
        assert tokenize("强") == [Token("强", TokenKind.CJK_UNIGRAM)]

    def test_latin_lowercased(self):
        assert tokenize("GG Bro") == [
            Token("gg", TokenKind.LATIN_WORD),
            Token("bro", TokenKind.LATIN_WORD),
        ]

    def test_numeric_kind(self):
        assert tokenize("666!") == [Token("666", TokenKind.NUMERIC)]

    def test_mixed_script(self):
        got = [t.surface for t in tokenize("太强了666")]
        assert got == ["太强", "强了", "666"]

    def test_punctuation_only_is_empty(self):
        assert tokenize("！？…") == []

    @given(st.text(max_size=50))
    def test_deterministic_and_bigrams_have_length_two(self, text):
        once, twice = tokenize(text), tokenize(text)
        assert once == twice
        for t in once:
            if t.kind is TokenKind.CJK_BIGRAM:
                assert len(t.surface) == 2


def d_row(t, text, mode=1, row_id=None, user="u1"):
    rid = row_id if row_id is not None else int(t * 1000)
    return f'<d p="{t},{mode},25,16777215,1700000000,0,{user},{rid}">{text}</d>'


class TestParseXml:
    def test_parses_and_sorts(self):
        xml = "<i><chatid>vid9</chatid>" + d_row(5.0, "后面") + d_row(1.5, "前面") + "</i>"
        log = parse_bilibili_xml(xml.encode())
        assert log.video_id == "vid9"
        assert [m.text for m in log.messages] == ["前面", "后面"]
        assert [m.video_time_ms for m in log.messages] == [1500, 5000]
        assert log.warnings == 0

    def test_explicit_video_id_wins(self):
        xml = "<i><chatid>inner</chatid>" + d_row(1, "x") + "</i>"
        assert parse_bilibili_xml(xml.encode(), video_id="outer").video_id == "outer"

    def test_mode_mapping(self):
        xml = "<i>" + d_row(1, "a", mode=1) + d_row(2, "b", mode=5) + d_row(3, "c", mode=4) + "</i>"
        modes = [m.display_mode for m in parse_bilibili_xml(xml.encode()).messages]
        assert modes == [DisplayMode.SCROLL, DisplayMode.TOP, DisplayMode.BOTTOM]

    def test_malformed_rows_skipped_and_counted(self):
        xml = ("<i>" + d_row(1, "good")
               + '<d p="1,2,3">short</d>'
               + '<d p="x,1,25,1,1,0,u,9">nonnum</d>'
               + '<d p="-1,1,25,1,1,0,u,10">negative</d>'
               + '<d p="2,1,25,1,1,0,u,11">   </d>'
               + "</i>")
        log = parse_bilibili_xml(xml.encode())
        assert [m.text for m in log.messages] == ["good"]
        assert log.warnings == 4

    def test_duplicate_row_id_skipped(self):
        xml = "<i>" + d_row(1, "first", row_id=7) + d_row(2, "again", row_id=7) + "</i>"
        log = parse_bilibili_xml(xml.encode())
        assert [m.text for m in log.messages] == ["first"]
        assert log.warnings == 1

    def test_unreadable_xml_raises(self):
        with pytest.raises(MalformedXml):
            parse_bilibili_xml(b"<i><broken")

    def test_no_usable_element_raises(self):
        with pytest.raises(MalformedXml):
            parse_bilibili_xml(b"<i></i>")
        with pytest.raises(MalformedXml):
            parse_bilibili_xml(b'<i><d p="1,2,3">bad</d></i>')

    @given(st.lists(st.tuples(st.floats(min_value=0, max_value=10_000),
                              st.sampled_from(["666", "哈哈", "ok"])),
                    min_size=1, max_size=30))
    def test_output_sorted_with_unique_ids(self, rows):
        xml = "<i>" + "".join(
            d_row(round(t, 2), text, row_id=i) for i, (t, text) in enumerate(rows)
        ) + "</i>"
        log = parse_bilibili_xml(xml.encode())
        keys = [(m.video_time_ms, m.id) for m in log.messages]
        assert keys == sorted(keys)
        assert len({m.id for m in log.messages}) == len(log.messages)
