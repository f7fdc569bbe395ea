import json

import httpx
import pytest
from hypothesis import given, strategies as st

from impactcap.emotion import (
    LABELS,
    LABEL_INDEX,
    N_LABELS,
    NEUTRAL_INDEX,
    POLARITY_TABLE,
    EmotionLexicon,
    EmotionVector,
    HttpClassifier,
    LexiconClassifier,
    PolarityClass,
    classify,
    dominant_emotion,
    emotional_weight,
    load_lexicon,
    polarity,
    sum_vectors,
)


class TestLabelTable:
    def test_pinned_indexes(self):
        assert N_LABELS == 28
        assert LABELS[NEUTRAL_INDEX] == "neutral" and NEUTRAL_INDEX == 27
        assert LABEL_INDEX["surprise"] == 26
        assert LABEL_INDEX["realization"] == 22
        assert LABEL_INDEX["admiration"] == 0

    def test_polarity_partition_sizes(self):
        by_class = {c: 0 for c in PolarityClass}
        for c in POLARITY_TABLE:
            by_class[c] += 1
        assert by_class == {
            PolarityClass.POSITIVE: 12,
            PolarityClass.NEGATIVE: 11,
            PolarityClass.AMBIGUOUS: 4,
            PolarityClass.NEUTRAL: 1,
        }

    def test_polarity_bounds(self):
        with pytest.raises(IndexError):
            polarity(28)
        with pytest.raises(IndexError):
            polarity(-1)


class TestEmotionVector:
    def test_length_enforced(self):
        with pytest.raises(ValueError):
            EmotionVector(scores=(1.0,) * 27)

    def test_rejects_negative_and_nan(self):
        bad = [0.0] * 28
        bad[3] = -0.1
        with pytest.raises(ValueError):
            EmotionVector(scores=tuple(bad))
        bad[3] = float("nan")
        with pytest.raises(ValueError):
            EmotionVector(scores=tuple(bad))

    def test_from_map(self):
        v = EmotionVector.from_map({"joy": 2.0, "fear": 0.5})
        assert v.scores[LABEL_INDEX["joy"]] == 2.0
        assert v.scores[LABEL_INDEX["fear"]] == 0.5
        assert sum(v.scores) == 2.5
        with pytest.raises(KeyError):
            EmotionVector.from_map({"bliss": 1.0})


def tiny_lexicon():
    return EmotionLexicon(entries={
        "好强": {LABEL_INDEX["admiration"]: 1.0},
        "吓人": {LABEL_INDEX["fear"]: 1.0},
        "怎么": {LABEL_INDEX["confusion"]: 1.0},
        "那个": {LABEL_INDEX["neutral"]: 1.0},
        "both": {LABEL_INDEX["joy"]: 0.5, LABEL_INDEX["fear"]: 0.5},
    })


class TestLexicon:
    def test_polarity_coverage_required(self):
        with pytest.raises(ValueError, match="polarity"):
            EmotionLexicon(entries={"好强": {LABEL_INDEX["admiration"]: 1.0}})

    def test_rejects_negative_weight(self):
        with pytest.raises(ValueError):
            EmotionLexicon(entries={"x": {0: -1.0}})

    def test_bundled_lexicon_loads(self):
        lex = load_lexicon()
        assert len(lex.entries) > 300

    def test_load_from_path(self, tmp_path):
        p = tmp_path / "lex.json"
        p.write_text(json.dumps({"version": "9", "entries": {
            "a": {"admiration": 1.0}, "b": {"fear": 1.0},
            "c": {"confusion": 1.0}, "d": {"neutral": 1.0},
        }}), "utf-8")
        lex = load_lexicon(p)
        assert lex.version == "9"
        assert lex.entries["a"] == {LABEL_INDEX["admiration"]: 1.0}


class TestClassify:
    def test_sums_over_tokens(self):
        v = classify("好强好强", tiny_lexicon())
        # tokens: 好强, 强好, 好强 -> two hits
        assert v.scores[LABEL_INDEX["admiration"]] == 2.0

    def test_no_match_is_neutral_one_hot(self):
        assert classify("zzz", tiny_lexicon()) == EmotionVector.neutral_one_hot()

    def test_multi_label_entry(self):
        v = classify("both", tiny_lexicon())
        assert v.scores[LABEL_INDEX["joy"]] == 0.5
        assert v.scores[LABEL_INDEX["fear"]] == 0.5

    def test_empty_text_is_neutral(self):
        assert classify("", tiny_lexicon()) == EmotionVector.neutral_one_hot()


finite_scores = st.lists(
    st.floats(min_value=0, max_value=100, allow_nan=False), min_size=28, max_size=28
).map(lambda xs: EmotionVector(scores=tuple(xs)))


class TestAggregation:
    def test_sum_empty_is_zero(self):
        assert sum_vectors([]) == EmotionVector.zero()

    def test_sum_order_is_fixed(self):
        vs = [EmotionVector.from_map({"joy": 0.1}) for _ in range(10)]
        assert sum_vectors(vs) == sum_vectors(list(vs))

    def test_dominant_tie_prefers_lower_index(self):
        v = EmotionVector.from_map({"amusement": 1.0, "anger": 1.0})
        assert LABELS[dominant_emotion(v)] == "amusement"

    def test_dominant_all_zero_is_neutral(self):
        assert dominant_emotion(EmotionVector.zero()) == NEUTRAL_INDEX

    def test_weight_math(self):
        v = EmotionVector.from_map({"joy": 3.0, "neutral": 1.0})
        assert emotional_weight(v) == 0.75
        assert emotional_weight(EmotionVector.zero()) == 0.0
        assert emotional_weight(EmotionVector.neutral_one_hot()) == 0.0

    @given(finite_scores)
    def test_weight_in_unit_interval(self, v):
        assert 0.0 <= emotional_weight(v) <= 1.0

    @given(st.lists(finite_scores, max_size=8))
    def test_sum_matches_manual(self, vs):
        got = sum_vectors(vs)
        for i in range(28):
            acc = 0.0
            for v in vs:
                acc += v.scores[i]
            assert got.scores[i] == acc


def http_classifier(handler, **kw):
    transport = httpx.MockTransport(handler)
    return HttpClassifier("http://emo.test", transport=transport, **kw)


class TestHttpClassifier:
    def test_uses_endpoint_vectors(self):
        def handler(request):
            body = json.loads(request.content)
            assert body == {"texts": ["你好", "666"]}
            vec = [0.0] * 28
            vec[LABEL_INDEX["joy"]] = 2.0
            return httpx.Response(200, json={"vectors": [vec, vec]})

        got = http_classifier(handler).classify_batch(["你好", "666"])
        assert len(got) == 2
        assert got[0].scores[LABEL_INDEX["joy"]] == 2.0

    def test_wrong_batch_size_falls_back(self):
        def handler(request):
            return httpx.Response(200, json={"vectors": []})

        got = http_classifier(handler).classify_batch(["666"])
        assert got == LexiconClassifier().classify_batch(["666"])

    def test_http_error_falls_back(self):
        def handler(request):
            return httpx.Response(500, text="boom")

        got = http_classifier(handler).classify_batch(["666", "zzz"])
        assert got == LexiconClassifier().classify_batch(["666", "zzz"])

    def test_transport_error_falls_back(self):
        def handler(request):
            raise httpx.ConnectError("refused")

        got = http_classifier(handler).classify_batch(["吓死我了"])
        assert got == LexiconClassifier().classify_batch(["吓死我了"])

    def test_bad_vector_shape_falls_back(self):
        def handler(request):
            return httpx.Response(200, json={"vectors": [[1.0, 2.0]]})

        got = http_classifier(handler).classify_batch(["666"])
        assert got == LexiconClassifier().classify_batch(["666"])
