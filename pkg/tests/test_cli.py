import json

import pytest

from nextpage import cli
from nextpage.simulator import SimReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def synth_log(tmp_path):
    path = tmp_path / "synth.log"
    code = cli.main(["gen", "--pages", "6", "--sessions", "40", "--seed", "9",
                     "--out", str(path)])
    assert code == 0
    return path


class TestStageChain:
    def test_parse_to_simulate(self, tmp_path, synth_log, capsys):
        entries = tmp_path / "entries.jsonl"
        sessions = tmp_path / "sessions.jsonl"
        model = tmp_path / "model.json"
        rules = tmp_path / "rules.jsonl"

        code, _, err = run(capsys, "parse", "--log", str(synth_log),
                           "--out", str(entries))
        assert code == 0
        report = json.loads(err.strip())
        assert report["rejected_count"] == 0

        assert run(capsys, "sessionize", "--entries", str(entries),
                   "--out", str(sessions))[0] == 0
        assert run(capsys, "train", "--sessions", str(sessions),
                   "--order", "2", "--out", str(model))[0] == 0
        assert run(capsys, "mine", "--sessions", str(sessions),
                   "--out", str(rules))[0] == 0

        code, out, _ = run(capsys, "predict", "--model", str(model),
                           "--rules", str(rules), "--context", "/p000,/p001",
                           "--top", "3")
        assert code == 0
        predictions = json.loads(out)
        assert predictions and all("page" in p and "score" in p for p in predictions)

        code, out, err = run(capsys, "simulate", "--sessions", str(sessions),
                             "--cache-size", "4", "--prefetch-k", "1",
                             "--context-len", "2", "--split", "0.8")
        assert code == 0
        payload = json.loads(out)
        assert payload["prefetch_on"]["requests"] > 0
        assert payload["prefetch_off"]["requests"] == payload["prefetch_on"]["requests"]
        assert "hit ratio" in err

    def test_simulate_csv_mode(self, tmp_path, synth_log, capsys):
        sessions = tmp_path / "sessions.jsonl"
        entries = tmp_path / "entries.jsonl"
        run(capsys, "parse", "--log", str(synth_log), "--out", str(entries))
        run(capsys, "sessionize", "--entries", str(entries), "--out", str(sessions))
        code, out, _ = run(capsys, "simulate", "--sessions", str(sessions), "--csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == SimReport.CSV_HEADER
        assert len(lines) == 3  # header + prefetch-on + prefetch-off


class TestPipeline:
    def test_end_to_end_json_and_intermediates(self, tmp_path, synth_log, capsys):
        work = tmp_path / "work"
        code, out, _ = run(capsys, "pipeline", "--log", str(synth_log),
                           "--split", "0.8", "--order", "1",
                           "--prefetch-k", "1", "--cache-size", "4",
                           "--workdir", str(work))
        assert code == 0
        payload = json.loads(out)
        assert payload["manifest"]["config"]["order"] == 1
        assert payload["manifest"]["inputs"]["log"]["sha256"]
        assert payload["prefetch_on"]["hits"] + payload["prefetch_on"]["misses"] \
            == payload["prefetch_on"]["requests"]
        for name in ("entries.jsonl", "sessions.jsonl", "model.json",
                     "rules.jsonl", "manifest.json"):
            assert (work / name).exists()

    def test_rerun_is_byte_identical(self, synth_log, capsys):
        args = ["pipeline", "--log", str(synth_log), "--prefetch-k", "2"]
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_config_file_with_flag_precedence(self, tmp_path, synth_log, capsys):
        config = tmp_path / "pipeline.json"
        config.write_text(json.dumps({"order": 2, "cache_size": 3}))
        code, out, _ = run(capsys, "pipeline", "--log", str(synth_log),
                           "--config", str(config), "--cache-size", "5")
        assert code == 0
        echoed = json.loads(out)["manifest"]["config"]
        assert echoed["order"] == 2        # from config file
        assert echoed["cache_size"] == 5   # flag wins

    def test_unknown_config_keys_rejected(self, tmp_path, synth_log, capsys):
        config = tmp_path / "pipeline.json"
        config.write_text(json.dumps({"became_self_aware": True}))
        code, _, err = run(capsys, "pipeline", "--log", str(synth_log),
                           "--config", str(config))
        assert code == 1
        assert "error:" in err


class TestErrorHandling:
    def test_missing_file_is_data_error(self, capsys):
        code, _, err = run(capsys, "train", "--sessions", "/nope/missing.jsonl",
                           "--out", "-")
        assert code == 1
        assert err.startswith("error:") and err.count("\n") == 1

    def test_unknown_flag_is_usage_error(self, synth_log):
        with pytest.raises(SystemExit) as exc:
            cli.main(["parse", "--log", str(synth_log), "--frobnicate"])
        assert exc.value.code == 2

    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["transmogrify"])
        assert exc.value.code == 2

    def test_mine_on_empty_sessions(self, tmp_path, capsys):
        empty = tmp_path / "sessions.jsonl"
        empty.write_text("")
        rules = tmp_path / "rules.jsonl"
        code, _, _ = run(capsys, "mine", "--sessions", str(empty),
                         "--out", str(rules))
        assert code == 0
        assert rules.read_text() == ""

    def test_bad_context_rejected(self, tmp_path, synth_log, capsys):
        model = tmp_path / "model.json"
        entries = tmp_path / "e.jsonl"
        sessions = tmp_path / "s.jsonl"
        run(capsys, "parse", "--log", str(synth_log), "--out", str(entries))
        run(capsys, "sessionize", "--entries", str(entries), "--out", str(sessions))
        run(capsys, "train", "--sessions", str(sessions), "--out", str(model))
        code, _, err = run(capsys, "predict", "--model", str(model),
                           "--context", " , ")
        assert code == 1 and "error:" in err


class TestEmitReport:
    def make(self, hit_ratio):
        hits = int(100 * hit_ratio)
        return SimReport(100, hits, 100 - hits, hit_ratio, 10, 5, 0.5, 0.05)

    def test_identical_reports_delta_zero(self):
        text, payload = cli.emit_report(self.make(0.6), self.make(0.6))
        assert payload["hit_ratio_delta"] == 0.0
        assert "delta: +0.0000" in text

    def test_positive_delta(self):
        text, payload = cli.emit_report(self.make(0.75), self.make(0.50))
        assert payload["hit_ratio_delta"] == pytest.approx(0.25)
        assert "delta: +0.2500" in text

    def test_missing_baseline(self):
        text, payload = cli.emit_report(self.make(0.75), None)
        assert payload["prefetch_off"] is None
        assert payload["hit_ratio_delta"] is None
        assert "delta: n/a" in text


def test_gen_determinism_through_cli(tmp_path, capsys):
    a, b = tmp_path / "a.log", tmp_path / "b.log"
    run(capsys, "gen", "--pages", "5", "--sessions", "20", "--seed", "3",
        "--out", str(a))
    run(capsys, "gen", "--pages", "5", "--sessions", "20", "--seed", "3",
        "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_gen_spec_file(tmp_path, capsys):
    from nextpage import synth

    spec_path = tmp_path / "spec.json"
    spec = synth.make_spec(pages=3, session_count=5, seed=2)
    spec_path.write_text(json.dumps(synth.spec_to_dict(spec)))
    out = tmp_path / "from_spec.log"
    code, _, _ = run(capsys, "gen", "--spec", str(spec_path), "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines() == synth.generate(spec)
