import json

import pandas as pd
import pytest
from click.testing import CliRunner

from app.main import cli

TINY_CONFIG = """
# configuración mínima para pruebas de extremo a extremo
embedding_dim = 4
layers = 2
degree_threshold = 5
batch_size = 64
epochs = 2
eval_k = 5
eval_batch_users = 16
seed = 4
"""


def invoke(*args):
    return CliRunner().invoke(cli, ["--log-level", "WARNING", *map(str, args)])


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    (root / "hp.conf").write_text(TINY_CONFIG)
    result = invoke("synth", "--users", 60, "--items", 40, "--edges", 600, "--seed", 2, "--out", root / "data")
    assert result.exit_code == 0, result.output
    result = invoke("train", "--data", root / "data", "--config", root / "hp.conf", "--out", root / "ckpt")
    assert result.exit_code == 0, result.output
    return root


class TestDataCommands:

    def test_synth_outputs(self, workspace):
        data = workspace / "data"
        for name in ("dataset.json", "train.bin", "val.bin", "test.bin", "interactions.tsv", "run_manifest.json"):
            assert (data / name).is_file(), name
        manifest = json.loads((data / "run_manifest.json").read_text())
        assert manifest["command"] == "synth"
        assert "run_manifest.json" in manifest["artifacts"]
        assert manifest["dataset_fingerprint"]

    def test_prepare_from_interactions(self, workspace, tmp_path):
        result = invoke("prepare", "--input", workspace / "data" / "interactions.tsv", "--out", tmp_path / "prep")
        assert result.exit_code == 0, result.output
        dataset = json.loads((tmp_path / "prep" / "dataset.json").read_text())
        assert dataset["num_users"] == 60

    def test_prepare_missing_file(self, tmp_path):
        result = invoke("prepare", "--input", tmp_path / "absent.csv", "--out", tmp_path / "prep")
        assert result.exit_code == 1
        assert "--input" in result.output

    def test_prepare_invalid_split_names_flag(self, workspace, tmp_path):
        result = invoke(
            "prepare", "--input", workspace / "data" / "interactions.tsv", "--split", "0.5,0.5,0.5", "--out", tmp_path / "prep"
        )
        assert result.exit_code == 1
        assert "--split:" in result.output

    def test_synth_infeasible(self, tmp_path):
        result = invoke("synth", "--users", 3, "--items", 3, "--edges", 10, "--out", tmp_path / "data")
        assert result.exit_code == 1

    def test_synth_invalid_exponent_names_flag(self, tmp_path):
        result = invoke("synth", "--users", 3, "--items", 3, "--edges", 4, "--exponent", 0.5, "--out", tmp_path / "d")
        assert result.exit_code == 1
        assert "--exponent" in result.output

    def test_unknown_flag(self, tmp_path):
        result = invoke("synth", "--bogus", 1)
        assert result.exit_code == 2


class TestTrainAndEvaluate:

    def test_train_outputs(self, workspace):
        ckpt = workspace / "ckpt"
        for name in ("checkpoint.json", "checkpoint.bin", "train_log.jsonl", "run_manifest.json"):
            assert (ckpt / name).is_file(), name
        manifest = json.loads((ckpt / "run_manifest.json").read_text())
        assert len(manifest["epoch_wall_times"]) == 2
        assert "checkpoint.bin" in manifest["artifacts"]

    def test_evaluate_is_reproducible(self, workspace, tmp_path):
        first = invoke("evaluate", "--data", workspace / "data", "--ckpt", workspace / "ckpt", "--k", 5, "--out", tmp_path / "a")
        second = invoke("evaluate", "--data", workspace / "data", "--ckpt", workspace / "ckpt", "--k", 5, "--out", tmp_path / "b")
        assert first.exit_code == 0 and second.exit_code == 0, first.output
        assert (tmp_path / "a" / "metrics.json").read_bytes() == (tmp_path / "b" / "metrics.json").read_bytes()
        metrics = json.loads((tmp_path / "a" / "metrics.json").read_text())
        assert 0.0 <= metrics["recall"] <= 1.0 and metrics["k"] == 5

    def test_evaluate_default_output(self, workspace):
        result = invoke("evaluate", "--data", workspace / "data", "--ckpt", workspace / "ckpt", "--k", 5)
        assert result.exit_code == 0, result.output
        assert (workspace / "ckpt" / "evaluation" / "metrics.json").is_file()

    def test_k_too_large_names_flag(self, workspace, tmp_path):
        result = invoke("evaluate", "--data", workspace / "data", "--ckpt", workspace / "ckpt", "--k", 1000, "--out", tmp_path)
        assert result.exit_code == 1
        assert "--k" in result.output

    def test_missing_checkpoint(self, workspace, tmp_path):
        result = invoke("evaluate", "--data", workspace / "data", "--ckpt", tmp_path / "none", "--out", tmp_path / "o")
        assert result.exit_code == 1
        assert "--ckpt" in result.output

    def test_bad_config_key(self, workspace, tmp_path):
        config = tmp_path / "bad.conf"
        config.write_text("embedding_dims = 4\n")
        result = invoke("train", "--data", workspace / "data", "--config", config, "--out", tmp_path / "ckpt")
        assert result.exit_code == 1
        assert "embedding_dims" in result.output

    def test_gradcheck(self, workspace, tmp_path):
        result = invoke(
            "gradcheck", "--data", workspace / "data", "--config", workspace / "hp.conf",
            "--selector", "rec", "--out", tmp_path,
        )
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "gradient_check.json").read_text())
        assert report["rec"]["max_relative_error"] < 1e-4


class TestAnalyze:

    def test_degree_groups(self, workspace, tmp_path):
        result = invoke(
            "analyze", "--data", workspace / "data", "--ckpt", workspace / "ckpt",
            "--mode", "degree-groups", "--k", 5, "--out", tmp_path,
        )
        assert result.exit_code == 0, result.output
        groups = pd.read_csv(tmp_path / "groups.csv")
        assert list(groups.columns) == ["group", "users", "recall", "ndcg"]
        assert len(groups) == 10

    def test_uniformity(self, workspace, tmp_path):
        result = invoke(
            "analyze", "--data", workspace / "data", "--ckpt", workspace / "ckpt",
            "--mode", "uniformity", "--pairs", 2000, "--out", tmp_path,
        )
        assert result.exit_code == 0, result.output
        for side in ("users", "items"):
            report = json.loads((tmp_path / f"uniformity_{side}.json").read_text())
            assert report["statistic"] <= 0.0
            histogram = pd.read_csv(tmp_path / f"uniformity_{side}.csv")
            assert list(histogram.columns) == ["angle_bin", "count"]
            assert histogram["count"].sum() == report["sample_count"]


class TestAblate:

    def test_k_sweep_rows(self, workspace, tmp_path):
        result = invoke(
            "ablate", "--data", workspace / "data", "--config", workspace / "hp.conf",
            "--variant", "full", "--k-sweep", "2,4,8,16", "--out", tmp_path,
        )
        assert result.exit_code == 0, result.output
        table = pd.read_csv(tmp_path / "ablation.csv")
        assert list(table["k"]) == [2, 4, 8, 16]
        assert list(table.columns) == ["variant", "k", "seed", "recall", "ndcg", "tail_recall", "uniformity"]

    def test_lightgcn_matches_zeroed_training(self, workspace, tmp_path):
        result = invoke(
            "ablate", "--data", workspace / "data", "--config", workspace / "hp.conf",
            "--variant", "lightgcn", "--out", tmp_path / "abl",
        )
        assert result.exit_code == 0, result.output
        row = json.loads((tmp_path / "abl" / "ablation.json").read_text())[0]

        config = tmp_path / "zeroed.conf"
        config.write_text(TINY_CONFIG + "lambda_trans = 0\nlambda_adv = 0\nlambda_cl = 0\nuse_kt = false\n")
        assert invoke("train", "--data", workspace / "data", "--config", config, "--out", tmp_path / "ckpt").exit_code == 0
        result = invoke("evaluate", "--data", workspace / "data", "--ckpt", tmp_path / "ckpt", "--k", 5, "--out", tmp_path / "ev")
        assert result.exit_code == 0, result.output
        metrics = json.loads((tmp_path / "ev" / "metrics.json").read_text())
        assert row["recall"] == metrics["recall"]
        assert row["ndcg"] == metrics["ndcg"]

    def test_invalid_k_sweep(self, workspace, tmp_path):
        result = invoke("ablate", "--data", workspace / "data", "--k-sweep", "2,x", "--out", tmp_path)
        assert result.exit_code == 2
