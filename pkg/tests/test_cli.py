import csv
import json
import signal
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest
from fastapi.testclient import TestClient

from gwcorr.cli import main, run_bench
from gwcorr.geodata import dataset_to_geojson, document_to_json
from gwcorr.service import ServiceConfig, create_app
from gwcorr.synth import synth_dataset


@pytest.fixture
def sample_geojson(tmp_path):
    path = tmp_path / "sample.geojson"
    doc = document_to_json(dataset_to_geojson(synth_dataset(50, 3, seed=7)))
    path.write_text(doc, encoding="utf-8")
    return path


# --- compute ---

def test_compute_writes_result(sample_geojson, tmp_path, capsys):
    out = tmp_path / "result.geojson"
    code = main(["compute", "--input", str(sample_geojson),
                 "--pair", "var_0,var_1", "--mode", "corr",
                 "--method", "pearson", "--kernel", "bisquare",
                 "--bandwidth", "0.25", "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    coefs = [f["properties"]["coef"] for f in doc["features"]
             if f["properties"]["coef"] is not None]
    assert coefs and all(-1.0 <= c <= 1.0 for c in coefs)
    assert "n_used=50" in capsys.readouterr().out


def test_compute_partial_with_controls(sample_geojson, tmp_path):
    out = tmp_path / "result.geojson"
    code = main(["compute", "--input", str(sample_geojson),
                 "--pair", "var_0,var_1", "--control", "var_2",
                 "--mode", "pcorr", "--bandwidth", "0.4",
                 "--output", str(out)])
    assert code == 0
    assert out.exists()


def test_compute_identical_pair_is_flag_error(sample_geojson, tmp_path):
    code = main(["compute", "--input", str(sample_geojson),
                 "--pair", "var_0,var_0", "--bandwidth", "0.25",
                 "--output", str(tmp_path / "x.geojson")])
    assert code == 2


def test_compute_unknown_variable_is_flag_error(sample_geojson, tmp_path):
    code = main(["compute", "--input", str(sample_geojson),
                 "--pair", "var_0,nope", "--bandwidth", "0.25",
                 "--output", str(tmp_path / "x.geojson")])
    assert code == 2


def test_compute_missing_input_is_data_error(tmp_path):
    code = main(["compute", "--input", str(tmp_path / "absent.geojson"),
                 "--pair", "a,b", "--bandwidth", "0.25",
                 "--output", str(tmp_path / "x.geojson")])
    assert code == 3


def test_compute_csv_requires_columns(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("x,y,a,b\n0,0,1,2\n1,0,2,3\n0,1,3,4\n")
    code = main(["compute", "--input", str(path), "--pair", "a,b",
                 "--bandwidth", "0.5", "--output", str(tmp_path / "o.geojson")])
    assert code == 2
    code = main(["compute", "--input", str(path), "--pair", "a,b",
                 "--bandwidth", "0.5", "--x-col", "x", "--y-col", "y",
                 "--assume-planar", "--output", str(tmp_path / "o.geojson")])
    assert code == 0


def test_compute_bad_kernel_rejected_by_argparse(sample_geojson, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--input", str(sample_geojson), "--pair", "a,b",
              "--kernel", "pyramid", "--bandwidth", "0.2",
              "--output", str(tmp_path / "x.geojson")])
    assert exc.value.code == 2


def test_cli_service_parity(sample_geojson, tmp_path):
    """Identical parameters produce byte-identical GeoJSON documents."""
    out = tmp_path / "cli.geojson"
    code = main(["compute", "--input", str(sample_geojson),
                 "--pair", "var_0,var_1", "--control", "var_2",
                 "--mode", "pcorr", "--method", "spearman",
                 "--kernel", "tricube", "--bandwidth", "0.3",
                 "--output", str(out)])
    assert code == 0

    client = TestClient(create_app(ServiceConfig()))
    did = client.post("/datasets", content=sample_geojson.read_bytes(),
                      headers={"content-type": "application/geo+json"}
                      ).json()["dataset_id"]
    aid = client.post("/analyses", json={
        "dataset_id": did, "mode": "partial_correlation", "method": "spearman",
        "var_a": "var_0", "var_b": "var_1", "controls": ["var_2"],
        "kernel": "tricube", "bandwidth_proportion": 0.3,
    }).json()["analysis_id"]
    service_bytes = client.get(f"/analyses/{aid}/result").content
    assert out.read_bytes() == service_bytes


# --- bench ---

def test_bench_rows_and_csv(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code = main(["bench", "--sizes", "40,80", "--vars", "2",
                 "--bandwidth", "0.3", "--seed", "5", "--output", str(out)])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["n"]) for r in rows] == [40, 80]
    assert all(float(r["wall_s"]) > 0 for r in rows)


def test_bench_rejects_small_sizes(tmp_path):
    assert main(["bench", "--sizes", "5,100",
                 "--output", str(tmp_path / "b.csv")]) == 2
    assert main(["bench", "--sizes", "abc",
                 "--output", str(tmp_path / "b.csv")]) == 2


def test_run_bench_sizes_sorted_unique():
    rows = run_bench([80, 40, 80], n_vars=2, proportion=0.5, warmup=False)
    assert [r["n"] for r in rows] == [40, 80]


def test_bench_deterministic_datasets():
    a = document_to_json(dataset_to_geojson(synth_dataset(40, 3, seed=9)))
    b = document_to_json(dataset_to_geojson(synth_dataset(40, 3, seed=9)))
    assert a == b


# --- synth ---

def test_synth_subcommand_writes_geojson(tmp_path):
    out = tmp_path / "synth.geojson"
    assert main(["synth", "--n", "30", "--vars", "2", "--seed", "3",
                 "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["features"]) == 30


def test_synth_subcommand_rejects_one_var(tmp_path):
    assert main(["synth", "--n", "30", "--vars", "1",
                 "--output", str(tmp_path / "x.geojson")]) == 2


# --- serve ---

def _free_port():
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


def test_serve_bind_failure_exit_code():
    blocker = socket.socket()
    blocker.bind(("127.0.0.1", 0))
    port = blocker.getsockname()[1]
    try:
        assert main(["serve", "--port", str(port)]) == 3
    finally:
        blocker.close()


def test_serve_responds_and_shuts_down_cleanly():
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "gwcorr.cli", "serve", "--port", str(port),
         "--tiles-url", "https://tiles.test/{z}"],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT)
    try:
        base = f"http://127.0.0.1:{port}"
        deadline = time.time() + 30.0
        last_err = None
        while time.time() < deadline:
            try:
                r = httpx.get(f"{base}/config", timeout=1.0)
                break
            except httpx.HTTPError as err:
                last_err = err
                time.sleep(0.2)
        else:
            raise AssertionError(f"server never came up: {last_err}")
        assert r.json()["tiles_url"] == "https://tiles.test/{z}"
        r404 = httpx.get(f"{base}/datasets/unknown/variables", timeout=5.0)
        assert r404.status_code == 404
        assert r404.json()["error_kind"] == "NotFound"
    finally:
        proc.send_signal(signal.SIGINT)
        code = proc.wait(timeout=20)
    assert code == 0
