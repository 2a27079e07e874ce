"""Command-line interface: outputs, determinism, exit codes."""

from __future__ import annotations

import json

from phylocount.cli import main
from phylocount import io
from phylocount.networks import Network


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_count_closed_and_series_agree(capsys):
    code, out = run_cli(capsys, "count", "--class", "gn", "--leaves", "10", "--rets", "2")
    assert code == 0
    closed = json.loads(out)
    code, out = run_cli(
        capsys, "count", "--class", "gn", "--leaves", "10", "--rets", "2", "--method", "series"
    )
    series = json.loads(out)
    assert closed["value"] == series["value"]
    assert closed["method"] == "closed" and series["method"] == "series"


def test_count_trees(capsys):
    code, out = run_cli(capsys, "count", "--class", "trees", "--leaves", "6", "--format", "text")
    assert code == 0
    assert "945" in out


def test_count_beyond_bound_flags_bound(capsys):
    code, out = run_cli(capsys, "count", "--class", "rv", "--leaves", "1", "--rets", "5")
    assert code == 0
    record = json.loads(out)
    assert record["value"] == "0" and record["validity"] == "bound"


def test_count_brute_matches_series(capsys):
    code, out = run_cli(
        capsys, "count", "--class", "rv", "--leaves", "2", "--rets", "2", "--method", "brute"
    )
    brute = json.loads(out)
    code, out = run_cli(
        capsys, "count", "--class", "rv", "--leaves", "2", "--rets", "2", "--method", "dagsum"
    )
    assert brute["value"] == json.loads(out)["value"] == "5"


def test_count_usage_error(capsys):
    assert main(["count", "--class", "tc", "--leaves", "9", "--rets", "3"]) == 2  # over budget


def test_table_galled_row(capsys):
    code, out = run_cli(capsys, "table", "--class", "gn", "--lmax", "10", "--kmax", "3")
    assert code == 0
    rows = out.strip().split("\n")
    assert rows[3] == "3,3,21,75,114"


def test_table_visible_shares_single_ret_column(capsys):
    _, gn_out = run_cli(capsys, "table", "--class", "gn", "--lmax", "6", "--kmax", "3")
    _, rv_out = run_cli(capsys, "table", "--class", "rv", "--lmax", "6", "--kmax", "3")
    gn_col = [line.split(",")[2] for line in gn_out.strip().split("\n")[1:]]
    rv_col = [line.split(",")[2] for line in rv_out.strip().split("\n")[1:]]
    assert gn_col == rv_col


def test_table_trees(capsys):
    code, out = run_cli(capsys, "table", "--class", "trees", "--lmax", "5", "--kmax", "0")
    assert code == 0
    values = [line.split(",")[1] for line in out.strip().split("\n")[1:]]
    assert values == ["1", "1", "3", "15", "105"]


def test_table_deterministic(capsys):
    _, first = run_cli(capsys, "table", "--class", "gn", "--lmax", "8", "--kmax", "2")
    _, second = run_cli(capsys, "table", "--class", "gn", "--lmax", "8", "--kmax", "2")
    assert first == second


def test_blocks_csv(capsys):
    code, out = run_cli(capsys, "blocks", "--lmax", "4", "--kmax", "2")
    assert code == 0
    assert out.startswith("leaves,k=0,k=1,k=2\n")
    assert "3,3,6,20" in out


def test_verify_fast_suite(capsys):
    code, out = run_cli(capsys, "verify", "--suite", "genfun")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_asympt_output(capsys):
    code, out = run_cli(capsys, "asympt", "--class", "gn", "--rets", "1", "--leaves", "50,100")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().split("\n")]
    ratios = [float(line["ratio"]) for line in lines]
    assert abs(ratios[1] - 1) < abs(ratios[0] - 1)


def test_enumerate_writes_files(tmp_path, capsys):
    code, out = run_cli(
        capsys,
        "enumerate", "--leaves", "2", "--rets", "1", "--out", str(tmp_path), "--format", "both",
    )
    assert code == 0
    assert json.loads(out)["written"] == 2
    json_files = sorted(tmp_path.glob("*.json"))
    dot_files = sorted(tmp_path.glob("*.dot"))
    assert len(json_files) == 2 and len(dot_files) == 2
    net = io.network_from_json(json_files[0].read_text())
    assert isinstance(net, Network)
    assert "digraph" in dot_files[0].read_text()


def test_enumerate_with_class_filter(tmp_path, capsys):
    code, out = run_cli(
        capsys,
        "enumerate", "--leaves", "2", "--rets", "2",
        "--class", "gn", "--out", str(tmp_path), "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["written"] == 3


def test_enumerate_budget_exceeded(tmp_path, capsys):
    assert main(["enumerate", "--leaves", "5", "--rets", "4", "--out", str(tmp_path)]) == 2


def test_patterns_catalog(tmp_path, capsys):
    code, out = run_cli(capsys, "patterns", "--m", "3", "--dot", str(tmp_path))
    assert code == 0
    record = json.loads(out)
    assert record["count"] == 3
    assert sorted(p["symmetries"] for p in record["patterns"]) == [1, 1, 2]
    assert len(list(tmp_path.glob("*.dot"))) == 3


def test_component_graph_serialization():
    from phylocount.networks import component_graph

    net = Network.build([[1], [2, 3], [3, 4], [5], [], []], {4: 2, 5: 1})
    cg = component_graph(net)
    doc = io.component_graph_to_json(cg)
    assert doc == io.component_graph_to_json(cg)  # deterministic
    assert '"schema":"phylocount.component_graph/1"' in doc.replace(" ", "")
    assert "digraph" in io.component_graph_to_dot(cg)


def test_json_round_trip_via_io():
    net = Network.build([[1], [2, 3], [3, 4], [5], [], []], {4: 2, 5: 1})
    assert io.network_from_json(io.network_to_json(net)) == net
