import json
import math
import os
import subprocess

import pytest

import nap


def test_tokenize_drops_stopwords():
    assert nap.tokenize("The Headphone is Cool") == ["headphone", "is", "cool"]


def test_parameter_counts():
    assert nap.weighting_parameter_count("AVG", 100, 4) == 0
    assert nap.weighting_parameter_count("WAVG", 100, 4) == 100
    assert nap.weighting_parameter_count("FR", 100, 10) == 1000
    assert nap.weighting_parameter_count("SFR", 3, 2) == 6


def test_context_embedding_average():
    c, alpha = nap.context_embedding([[1.0, 3.0], [3.0, 1.0]], "AVG")
    assert c == [2.0, 2.0]
    c, alpha = nap.context_embedding([[1.0, 3.0], [3.0, 1.0]], "WAVG", query=[0.3, -0.7])
    assert math.isclose(sum(alpha), 1.0)
    with pytest.raises(ValueError):
        nap.context_embedding([[1.0], [2.0, 3.0]])


def test_features():
    assert nap.entropy_feature([["a", "b"], ["b", "c"], ["a"]]) == [2, 1, 0]
    assert all(abs(v) < 1e-9 for v in nap.conformity_feature([["x", "y"]] * 3))
    assert nap.polarity_score(["nothing", "here"]) == 0.0


def test_git_blob_hash():
    assert nap.git_blob_hash(b"hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a"


def test_synthetic_corpus_is_deterministic():
    a = nap.synthetic_corpus_jsonl(items=2, reviews_per_item=20, vocabulary_size=60, seed=3)
    b = nap.synthetic_corpus_jsonl(items=2, reviews_per_item=20, vocabulary_size=60, seed=3)
    assert a == b
    lines = a.splitlines()
    assert len(lines) == 40
    assert {"item_id", "review_id", "date"} <= set(json.loads(lines[0]))


def test_pipeline_through_bindings(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(nap.synthetic_corpus_jsonl(items=4, reviews_per_item=40, vocabulary_size=60, seed=1))
    data = tmp_path / "data"
    code, out, err = nap.run_cli(
        ["preprocess", "--input", str(corpus), "--out", str(data), "--min-reviews", "10",
         "--embedding-dim", "8", "--K", "2", "--seed", "1"])
    assert code == 0, err
    summary = nap.dataset_summary(str(data))
    assert summary["embedding_dim"] == 8
    assert summary["pairs"] > 0
    code, out, err = nap.run_cli(
        ["train", "--dataset", str(data), "--out", str(tmp_path / "run"), "--kernels", "4",
         "--max-len", "30", "--max-epochs", "2", "--repetitions", "1"])
    assert code == 0, err
    results = json.loads((tmp_path / "run" / "results.json").read_text())
    assert 0.0 <= results["mean_test_accuracy"] <= 1.0
    with pytest.raises(ValueError):
        nap.dataset_summary(str(tmp_path / "missing"))


def test_cli_exit_codes():
    assert nap.run_cli([])[0] == 1
    assert nap.run_cli(["preprocess", "--input", "/nonexistent.jsonl", "--out", "/tmp/x"])[0] == 2


@pytest.mark.skipif("NAP_CLI" not in os.environ, reason="command line binary not provided")
def test_binary_help():
    result = subprocess.run([os.environ["NAP_CLI"], "--help"], capture_output=True, text=True)
    assert result.returncode == 0
    assert "sweep" in result.stdout
