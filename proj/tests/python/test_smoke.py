import json
import math
import os
import subprocess
import sys

import pytest

import scamtrace

SRC = os.environ.get("SCAMTRACE_SRC", os.path.join(os.path.dirname(__file__), "..", ".."))


def test_extract_addresses():
    found = scamtrace.extract_addresses(
        "pay 1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa or "
        "0x5aAeb6053F3E94C9b9A09f33669435E7Ef1BeAed"
    )
    assert ("bitcoin", "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa") in found
    assert ("ethereum", "0x5aaeb6053f3e94c9b9a09f33669435e7ef1beaed") in found
    assert scamtrace.extract_addresses("1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNb") == []


def test_analytics_and_email():
    assert scamtrace.extract_analytics_ids("ga('create','UA-1-2')") == {"UA-1-2"}
    assert scamtrace.decompose_email("Scam123@Mail.example") == ("scam123", "mail.example")


def test_preprocess_and_tfidf():
    tokens = scamtrace.preprocess("The price is 100 BTC!", {"the", "is"})
    assert tokens == ["price", "btc"]
    vectors = scamtrace.tfidf_vectors([["a", "b"], ["a"]])
    for vec in vectors:
        norm = math.sqrt(sum(w * w for w in vec.values()))
        assert abs(norm - 1.0) < 1e-9


def test_dbscan_and_metrics():
    # two tight groups of six, far apart
    pts = [0.0 + i * 0.01 for i in range(6)] + [5.0 + i * 0.01 for i in range(6)]
    d = [[abs(a - b) for b in pts] for a in pts]
    eps = scamtrace.select_eps(d, k=5)
    labels = scamtrace.dbscan(d, eps, min_pts=5)
    assert len(set(labels)) == 2
    truth = [0] * 6 + [1] * 6
    assert scamtrace.adjusted_rand_index(labels, truth) == pytest.approx(1.0)
    assert scamtrace.pairwise_f1(labels, truth) == pytest.approx(1.0)


def test_stopword_file_matches_embedded():
    path = os.path.join(SRC, "data", "stopwords_en.txt")
    with open(path) as fh:
        file_words = [line.strip() for line in fh if line.strip()]
    tokens = scamtrace.preprocess(" ".join(file_words), None)
    assert tokens == []  # every shipped word is dropped by the default list


def test_cli_pipeline(tmp_path):
    out = str(tmp_path / "run")
    assert scamtrace.run_cli(["synth", "--out", out, "--seed", "5"]) == 0
    assert scamtrace.run_cli(["cluster-types", "--out", out]) == 0
    assert scamtrace.run_cli(["cluster-campaigns", "--out", out]) == 0
    assert scamtrace.run_cli(["chain-cluster", "--out", out]) == 0
    assert scamtrace.run_cli(["trace", "--out", out]) == 0
    assert scamtrace.run_cli(["report", "--out", out]) == 0
    assert scamtrace.run_cli(["eval", "--out", out]) == 0

    with open(os.path.join(out, "eval.json")) as fh:
        ev = json.load(fh)
    assert ev["type"]["ari"] == pytest.approx(1.0)
    assert ev["campaign"]["pairwise_f1"] == pytest.approx(1.0)

    # missing input is a validation error
    assert scamtrace.run_cli(["trace", "--out", str(tmp_path / "empty")]) == 1


def test_outputs_validate_against_schemas(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    out = str(tmp_path / "run")
    assert scamtrace.run_cli(["synth", "--out", out]) == 0
    assert scamtrace.run_cli(["cluster-types", "--out", out]) == 0
    assert scamtrace.run_cli(["cluster-campaigns", "--out", out]) == 0
    assert scamtrace.run_cli(["chain-cluster", "--out", out]) == 0
    assert scamtrace.run_cli(["trace", "--out", out]) == 0
    assert scamtrace.run_cli(["report", "--out", out]) == 0
    assert scamtrace.run_cli(["eval", "--out", out]) == 0

    pairs = [
        ("type_report.json", "type_report.schema.json"),
        ("campaign_report.json", "campaign_report.schema.json"),
        ("chain_stats.json", "chain_stats.schema.json"),
        ("trace_summary.json", "trace_summary.schema.json"),
        ("report.json", "report.schema.json"),
        ("eval.json", "eval.schema.json"),
    ]
    for produced, schema_name in pairs:
        with open(os.path.join(out, produced)) as fh:
            doc = json.load(fh)
        with open(os.path.join(SRC, "schemas", schema_name)) as fh:
            schema = json.load(fh)
        jsonschema.validate(doc, schema)


def test_build_clusters_from_file(tmp_path):
    path = tmp_path / "txs.jsonl"
    txs = [
        {
            "tx_id": "t1",
            "chain": "bitcoin",
            "timestamp": "2018-07-01T00:00:00Z",
            "coinbase": False,
            "inputs": [{"address": "A", "value": 1}, {"address": "B", "value": 1}],
            "outputs": [{"address": "X", "value": 2}],
        },
        {
            "tx_id": "t2",
            "chain": "bitcoin",
            "timestamp": "2018-07-02T00:00:00Z",
            "coinbase": False,
            "inputs": [{"address": "B", "value": 1}, {"address": "C", "value": 1}],
            "outputs": [{"address": "Y", "value": 2}],
        },
    ]
    path.write_text("\n".join(json.dumps(t) for t in txs) + "\n")
    clusters = scamtrace.build_clusters(str(path))
    assert ["A", "B", "C"] in clusters
