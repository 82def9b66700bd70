import json

from click.testing import CliRunner

from gcsim.cli import main

RUN_ARGS = [
    "run",
    "--workers", "12", "--clusters", "4", "--load", "2", "--replication", "2",
    "--iterations", "4", "--runs", "2", "--seed", "9",
    "--initial-stragglers", "6",
]


def invoke(args):
    runner = CliRunner()
    result = runner.invoke(main, args, catch_exceptions=False)
    return result


def test_run_writes_csvs(tmp_path):
    out = tmp_path / "exp"
    result = invoke(RUN_ARGS + ["--out", str(out)])
    assert result.exit_code == 0, result.output
    data = (out / "data.csv").read_text()
    summary = (out / "summary.csv").read_text()
    assert data.splitlines()[0].startswith("run,iteration,scheme")
    assert len(data.splitlines()) == 1 + 4 * 2 * 4
    assert summary.splitlines()[0] == "scheme,mean,std,improvement_vs_gcsc"
    assert "GC-DC" in result.output


def test_run_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert invoke(RUN_ARGS + ["--out", str(a)]).exit_code == 0
    assert invoke(RUN_ARGS + ["--out", str(b)]).exit_code == 0
    assert (a / "data.csv").read_bytes() == (b / "data.csv").read_bytes()
    assert (a / "summary.csv").read_bytes() == (b / "summary.csv").read_bytes()


def test_run_scheme_subset_and_placements(tmp_path):
    out = tmp_path / "exp"
    result = invoke(
        RUN_ARGS
        + ["--out", str(out), "--schemes", "GC-SC,GC-DC", "--dump-placements"]
    )
    assert result.exit_code == 0, result.output
    data = (out / "data.csv").read_text()
    assert len(data.splitlines()) == 1 + 2 * 2 * 4
    assert (out / "placements.csv").exists()
    assert (out / "placement_histogram.csv").exists()


def test_config_file_with_flag_override(tmp_path):
    cfg = {
        "workers": 12, "clusters": 4, "load": 2, "replication": 2,
        "iterations": 3, "runs": 1, "seed": 1, "schemes": "GC,LB",
        "initial_stragglers": 4,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "exp"
    result = invoke(
        ["run", "--config", str(cfg_path), "--out", str(out), "--iterations", "5"]
    )
    assert result.exit_code == 0, result.output
    data = (out / "data.csv").read_text()
    # 2 schemes x 1 run x 5 iterations (flag overrides config's 3)
    assert len(data.splitlines()) == 1 + 2 * 1 * 5


def test_run_reports_validation_failure(tmp_path):
    result = CliRunner().invoke(
        main,
        ["run", "--workers", "10", "--clusters", "4", "--out", str(tmp_path)],
    )
    assert result.exit_code != 0
    assert "divide" in result.output


def test_dump_assignment(tmp_path):
    out = tmp_path / "dump"
    result = invoke(
        ["dump-assignment", "--workers", "12", "--clusters", "4", "--load", "2",
         "--replication", "2", "--seed", "0", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "assignment.json").read_text())
    assert doc["static"]["matrix"][0] == [1, 2, 3, 4]
    assert doc["feasible"] is True


def test_dump_trace(tmp_path):
    out = tmp_path / "dump"
    result = invoke(
        ["dump-trace", "--workers", "6", "--iterations", "7", "--seed", "2",
         "--initial-stragglers", "3", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[0] == "iteration,w1,w2,w3,w4,w5,w6"
    assert len(lines) == 8
