import csv
import json
import math
import os

import pytest
from click.testing import CliRunner

from qswlab import cli, graphs


@pytest.fixture
def runner():
    return CliRunner()


def test_parse_graph_spec():
    assert cli.parse_graph_spec("path:5") == graphs.path(5)
    assert cli.parse_graph_spec("complete:4") == graphs.complete(4)
    assert cli.parse_graph_spec("star:6") == graphs.star(6)


def test_parse_graph_spec_errors():
    import click
    for bad in ("path", "path:x", "ring:5", "path:0"):
        with pytest.raises(click.UsageError):
            cli.parse_graph_spec(bad)


def test_graphgen_deterministic(runner, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        r = runner.invoke(cli.main, ["graphgen", "--model", "er", "--n", "100",
                                     "--p", "0.05", "--seed", "42",
                                     "--out", str(out)])
        assert r.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()
    g = graphs.from_json(out1.read_text())
    assert g.n == 100


def test_graphgen_ba_bounds(runner, tmp_path):
    out = tmp_path / "ba.json"
    r = runner.invoke(cli.main, ["graphgen", "--model", "ba", "--n", "50",
                                 "--m0", "3", "--seed", "1", "--out", str(out)])
    assert r.exit_code == 0
    g = graphs.from_json(out.read_text())
    assert graphs.is_connected(g)
    assert len(g.edges) <= 150


def test_graphgen_usage_errors(runner, tmp_path):
    r = runner.invoke(cli.main, ["graphgen", "--model", "er", "--n", "10",
                                 "--out", str(tmp_path / "x.json")])
    assert r.exit_code == 2  # missing --p
    r = runner.invoke(cli.main, ["graphgen", "--model", "er", "--n", "10",
                                 "--p", "2.0", "--out", str(tmp_path / "x.json")])
    assert r.exit_code == 2


def test_propagate_gqsw(runner, tmp_path):
    csv_p, json_p = tmp_path / "p.csv", tmp_path / "p.json"
    r = runner.invoke(cli.main, [
        "propagate", "--model", "gqsw", "--omega", "1.0", "--length", "201",
        "--t-start", "30", "--t-stop", "300", "--t-step", "30",
        "--batch", "5", "--out-csv", str(csv_p), "--out-json", str(json_p)])
    assert r.exit_code == 0, r.output
    doc = json.loads(json_p.read_text())
    assert abs(doc["final_alpha"] - 1.0) < 0.05
    assert doc["config"]["model"] == "gqsw"
    with open(csv_p) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "mu2", "alpha_mid", "alpha"]
    assert len(rows) == 11


def test_propagate_empty_grid_exits_2(runner, tmp_path):
    r = runner.invoke(cli.main, [
        "propagate", "--model", "gqsw", "--omega", "0.5",
        "--t-start", "10", "--t-stop", "5", "--t-step", "1",
        "--out-csv", str(tmp_path / "x.csv"), "--out-json", str(tmp_path / "x.json")])
    assert r.exit_code == 2


def test_converge_fixture_classifications(runner, tmp_path):
    g_file = tmp_path / "circ.json"
    g_file.write_text(graphs.to_json(graphs.circulant_jump2(8)))
    out = tmp_path / "rep.json"
    r = runner.invoke(cli.main, ["converge", "--model", "gqsw",
                                 "--graph", f"file:{g_file}", "--out", str(out)])
    assert r.exit_code == 0, r.output
    doc = json.loads(out.read_text())
    assert doc["classification"] == "PossiblyPeriodic"
    assert doc["tol"] == 1e-10

    cyc = tmp_path / "cycle.json"
    cyc.write_text(graphs.to_json(
        graphs.DiGraph(4, frozenset({(0, 1), (1, 2), (2, 3), (3, 0)}))))
    r = runner.invoke(cli.main, ["converge", "--model", "lqsw",
                                 "--graph", f"file:{cyc}", "--tol", "1e-9",
                                 "--out", str(out)])
    assert r.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["classification"] == "Relaxing"
    assert doc["tol"] == 1e-9


def test_search_complete_auto_grid(runner, tmp_path):
    csv_p, json_p = tmp_path / "s.csv", tmp_path / "s.json"
    r = runner.invoke(cli.main, ["search", "--graph", "complete:64",
                                 "--marked", "1",
                                 "--out-csv", str(csv_p), "--out-json", str(json_p)])
    assert r.exit_code == 0, r.output
    doc = json.loads(json_p.read_text())
    t_opt = math.pi * 8 / 2
    assert abs(doc["argmax_t"] - t_opt) / t_opt < 0.1
    assert doc["p_max"] > 0.9


def test_search_marked_out_of_range(runner, tmp_path):
    r = runner.invoke(cli.main, ["search", "--graph", "complete:8",
                                 "--marked", "9",
                                 "--out-csv", str(tmp_path / "s.csv"),
                                 "--out-json", str(tmp_path / "s.json")])
    assert r.exit_code == 2


def test_sweep_requires_samples(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "er_p0", "samples": 0}))
    r = runner.invoke(cli.main, ["sweep", "--config", str(cfg)])
    assert r.exit_code == 2


def test_sweep_ba_search_small(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    outdir = tmp_path / "out"
    cfg.write_text(json.dumps({"kind": "ba_search", "samples": 2,
                               "n": [30], "m0": 2, "seed": 5,
                               "outdir": str(outdir)}))
    r = runner.invoke(cli.main, ["sweep", "--config", str(cfg)])
    assert r.exit_code == 0, r.output
    with open(outdir / "aggregate.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "T", "pT"]
    assert len(rows) == 3
    doc = json.loads((outdir / "sweep.json").read_text())
    assert doc["config"]["kind"] == "ba_search"
    assert doc["version"]
