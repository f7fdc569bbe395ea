import json
from pathlib import Path

import pytest

from impactcap import topics
from impactcap.cli import main
from impactcap.config import ConfigError, ServiceConfig, load_config

SAMPLE_XML = Path(__file__).parent.parent / "src/impactcap/data/sample_log.xml"
GOLDEN_PLAN = Path(__file__).parent / "data/golden_plan.jsonl"


class TestServiceConfig:
    def test_round_trip(self):
        cfg = ServiceConfig(port=9001, moderator_token="tok")
        assert ServiceConfig.from_dict(cfg.to_dict()) == cfg

    def test_rejects_unknown_keys(self):
        with pytest.raises(ConfigError, match="unknown"):
            ServiceConfig.from_dict({"portt": 1})

    @pytest.mark.parametrize("bad", [
        {"port": 0}, {"port": 70000}, {"rate_limit_per_s": 0},
        {"heartbeat_interval_s": -1}, {"default_settings": {"bogus": 1}},
    ])
    def test_rejects_bad_values(self, bad):
        with pytest.raises(ConfigError):
            ServiceConfig.from_dict(bad)

    def test_load_config(self, tmp_path):
        path = tmp_path / "svc.json"
        path.write_text(json.dumps({"port": 9002,
                                    "default_settings": {"window_duration_s": 12}}))
        cfg = load_config(path)
        assert cfg.port == 9002
        assert cfg.default_settings.window_duration_s == 12

    def test_load_config_empty_object_is_defaults(self, tmp_path):
        path = tmp_path / "svc.json"
        path.write_text("{}")
        assert load_config(path) == ServiceConfig()

    def test_load_config_bad_json(self, tmp_path):
        path = tmp_path / "svc.json"
        path.write_text("{nope")
        with pytest.raises(ConfigError):
            load_config(path)
        path.write_text("[1,2]")
        with pytest.raises(ConfigError, match="object"):
            load_config(path)


class TestCli:
    def test_missing_log_exits(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["analyze", str(tmp_path / "absent.xml")])

    def test_fit_lda(self, tmp_path, capsys):
        out = tmp_path / "model.json"
        assert main(["fit-lda", str(SAMPLE_XML), "--k", "4", "--seed", "0",
                     "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "fitted K=4" in printed
        assert printed.count("topic ") == 4
        model = topics.load_model(out)
        assert model.k == 4

    def test_analyze_writes_summaries(self, tmp_path, capsys):
        out = tmp_path / "summaries.jsonl"
        assert main(["analyze", str(SAMPLE_XML), "--window", "8",
                     "--out", str(out)]) == 0
        lines = out.read_text("utf-8").splitlines()
        docs = [json.loads(l) for l in lines]
        assert docs  # sample log spans many windows
        assert all(d["message_count"] >= 1 for d in docs)
        indexes = [d["window_index"] for d in docs]
        assert indexes == sorted(indexes)

    def test_replay_reproduces_golden(self, tmp_path):
        out = tmp_path / "plan.jsonl"
        assert main(["replay", str(SAMPLE_XML), "--seed", "0",
                     "--out", str(out)]) == 0
        assert out.read_bytes() == GOLDEN_PLAN.read_bytes()

    def test_replay_bad_settings_file(self, tmp_path):
        bad = tmp_path / "settings.json"
        bad.write_text(json.dumps({"window_duration_s": 9}))
        with pytest.raises(SystemExit, match="settings"):
            main(["replay", str(SAMPLE_XML), "--settings", str(bad)])

    def test_gen_caption_template(self, capsys):
        assert main(["gen-caption", "--style", "expository", "--pov", "third",
                     "--theme", "高能,名场面", "--seed", "1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"text", "style", "pov", "source"}
        assert doc["style"] == "expository"
        assert doc["source"] == "template"
        assert doc["text"]

    def test_gen_caption_rejects_unknown_label(self):
        with pytest.raises(SystemExit, match="unknown emotion label"):
            main(["gen-caption", "--style", "tsukkomi", "--pov", "first",
                  "--dominant", "thrilled"])

    def test_gen_caption_llm_requires_endpoint(self):
        with pytest.raises(SystemExit, match="endpoint"):
            main(["gen-caption", "--style", "tsukkomi", "--pov", "first",
                  "--backend", "llm"])
