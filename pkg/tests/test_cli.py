"""End-to-end CLI runs on a small universe, plus exit-code contracts."""
import json
import os

import pytest

from omnirank.cli import main
from omnirank.config import load_config, parse_months_range
from omnirank.domain import format_month, month_index
from omnirank.errors import ConfigError

START = month_index(2014, 1)
CUTOFF = START + 12  # horizon 14 months -> last evaluable month


@pytest.fixture(scope="module")
def universe_dir(tmp_path_factory):
    out = str(tmp_path_factory.mktemp("data"))
    code = main(["generate", "--out", out, "--seed", "9", "--n-platforms", "40", "--months", "14"])
    assert code == 0
    return out


@pytest.fixture()
def config_path(tmp_path, universe_dir):
    out_dir = str(tmp_path / "out")
    path = tmp_path / "run.ini"
    path.write_text(
        f"""
[run]
seed = 9
data_dir = {universe_dir}
out_dir = {out_dir}

[features]
window_months = 6
lda_k = 3
lda_fit_iters = 12
lda_infer_iters = 4

[train]
epochs = 6
batch_size = 16

[evaluate]
months = {format_month(CUTOFF)}
folds = 3
"""
    )
    return str(path), out_dir


class TestGenerate:
    def test_outputs_present(self, universe_dir):
        for name in ("platforms.jsonl", "news.jsonl", "comments.jsonl", "truth.json", "lexicon.json"):
            assert os.path.exists(os.path.join(universe_dir, name)), name

    def test_lexicon_is_loadable(self, universe_dir):
        from omnirank.sentiment import load_lexicon

        lexicon = load_lexicon(os.path.join(universe_dir, "lexicon.json"))
        assert lexicon.positive and lexicon.negative


class TestStagewisePipeline:
    def test_stages_and_artifacts(self, config_path):
        config, out = config_path
        assert main(["clean", "--config", config]) == 0
        report_path = os.path.join(out, "clean", "report.json")
        with open(report_path) as fh:
            report = json.load(fh)
        assert report["schema_version"] == 1
        assert report["docs_kept"] > 0

        assert main(["features", "--config", config, "--cutoff", format_month(CUTOFF)]) == 0
        bundles_path = os.path.join(out, "bundles.jsonl")
        assert os.path.exists(bundles_path)

        assert main(["train", "--config", config]) == 0
        model_dir = os.path.join(out, "model")
        assert os.path.exists(os.path.join(model_dir, "manifest.json"))
        assert os.path.exists(os.path.join(model_dir, "params.bin"))

        assert main(["evaluate", "--config", config]) == 0
        with open(os.path.join(out, "reports.json")) as fh:
            reports = json.load(fh)
        assert reports["schema_version"] == 1
        (report,) = reports["reports"]
        assert 0.0 <= report["accuracy"] <= 1.0
        assert 0.0 <= report["auc"] <= 1.0
        histogram = report["histogram"]
        assert sum(histogram["normal"]) + sum(histogram["problem"]) == report["n_platforms"]
        assert [b["limit"] for b in report["buckets"]] == [20, 50, 100, 200, 500, 1000, None]

        assert main(["rank", "--config", config, "--model", model_dir, "--bundles", bundles_path,
                     "--rankings-out", os.path.join(out, "model_rankings.json")]) == 0
        with open(os.path.join(out, "model_rankings.json")) as fh:
            model_rankings = json.load(fh)
        entries = model_rankings["months"][str(CUTOFF)]["entries"]
        assert entries == sorted(entries, key=lambda e: e["rank"])

        assert main(["export-dashboard", "--config", config, "--artifacts", out]) == 0
        dash = os.path.join(out, "dashboard")
        for name in ("rankings.json", "platforms.json", "series.json", "reports.json", "related.json"):
            with open(os.path.join(dash, name)) as fh:
                assert json.load(fh)["schema_version"] == 1
        with open(os.path.join(dash, "rankings.json")) as fh:
            rankings = json.load(fh)
        with open(os.path.join(dash, "platforms.json")) as fh:
            platforms = {p["id"] for p in json.load(fh)["platforms"]}
        assert platforms, "dashboard export kept no platforms"
        for month in rankings["months"].values():
            for entry in month["entries"]:
                assert entry["platform_id"] in platforms
        with open(os.path.join(dash, "related.json")) as fh:
            related = json.load(fh)["related"]
        assert set(related) == platforms
        assert all(len(v["related"]) <= 5 for v in related.values())

        # limit=0 still produces a valid (empty) bundle
        empty_dir = os.path.join(out, "dash-empty")
        assert main(["export-dashboard", "--config", config, "--artifacts", out,
                     "--out", empty_dir, "--limit", "0"]) == 0
        with open(os.path.join(empty_dir, "rankings.json")) as fh:
            empty_rankings = json.load(fh)
        assert all(not m["entries"] for m in empty_rankings["months"].values())
        with open(os.path.join(empty_dir, "platforms.json")) as fh:
            assert json.load(fh)["platforms"] == []


class TestFullRun:
    def test_run_pipeline_and_rerun_identical_rankings(self, config_path):
        config, out = config_path
        assert main(["run", "--config", config]) == 0
        rankings_path = os.path.join(out, "rankings.json")
        first = open(rankings_path).read()
        assert main(["run", "--config", config]) == 0
        second = open(rankings_path).read()
        assert first == second


class TestExitCodes:
    def test_missing_input_dir_is_data_error(self, tmp_path):
        code = main(["clean", "--in", str(tmp_path / "nope"), "--out", str(tmp_path / "o")])
        assert code == 3

    def test_clean_error_is_stage_tagged(self, tmp_path, capsys):
        main(["clean", "--in", str(tmp_path / "nope"), "--out", str(tmp_path / "o")])
        assert "stage:clean" in capsys.readouterr().err

    def test_bad_config_file_is_config_error(self, tmp_path):
        assert main(["clean", "--config", str(tmp_path / "missing.ini")]) == 2

    def test_missing_model_is_data_error(self, tmp_path):
        code = main(["rank", "--model", str(tmp_path / "m"), "--bundles", str(tmp_path / "b")])
        assert code == 3

    def test_argparse_usage_error_exits_2(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["features"])  # --cutoff is required
        assert excinfo.value.code == 2


class TestConfigParsing:
    def test_months_range(self):
        months = parse_months_range("2015-11:2016-01")
        assert months == (month_index(2015, 11), month_index(2015, 12), month_index(2016, 1))

    def test_months_list_and_dedup(self):
        months = parse_months_range("2015-11, 2015-11, 2016-01")
        assert months == (month_index(2015, 11), month_index(2016, 1))

    def test_reversed_range_rejected(self):
        with pytest.raises(ConfigError):
            parse_months_range("2016-01:2015-11")

    def test_env_overrides_only_paths_and_seed(self, monkeypatch):
        monkeypatch.setenv("OMNIRANK_SEED", "777")
        monkeypatch.setenv("OMNIRANK_DATA_DIR", "/d")
        monkeypatch.setenv("OMNIRANK_OUT_DIR", "/o")
        config = load_config(None)
        assert config.seed == 777
        assert config.train.seed == 777
        assert config.data_dir == "/d"
        assert config.out_dir == "/o"

    def test_bad_env_seed(self, monkeypatch):
        monkeypatch.setenv("OMNIRANK_SEED", "abc")
        with pytest.raises(ConfigError):
            load_config(None)
