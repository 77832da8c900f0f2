"""Command-line entry points, exercised in-process."""

import json
import os

from contactlearn.cli import main
from contactlearn.scenarios import KINDS


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRun:
    def test_writes_artifacts_and_prints_summary(self, tmp_path, capsys):
        out = str(tmp_path / "run")
        code, stdout, _ = run_cli(
            capsys,
            ["run", "--scenario", "pinching", "--kmax", "2", "--horizon", "8",
             "--samples", "4", "--seed", "1", "--out", out],
        )
        assert code == 0
        payload = json.loads(stdout)
        assert payload["out"] == out
        assert set(payload["theta_hat"]) == {"stiffness", "damping"}
        assert os.path.exists(os.path.join(out, "summary.json"))

    def test_baseline_engine_flag(self, tmp_path, capsys):
        out = str(tmp_path / "run")
        code, stdout, _ = run_cli(
            capsys,
            ["run", "--scenario", "rubbing", "--engine", "baseline", "--kmax", "1",
             "--horizon", "8", "--samples", "4", "--out", out],
        )
        assert code == 0
        cfg = json.load(open(os.path.join(out, "config.json")))
        assert cfg["engine"]["mode"] == "baseline"


class TestSweep:
    def test_priors_file(self, tmp_path, capsys):
        priors = tmp_path / "priors.json"
        priors.write_text(json.dumps({"modes": [[0.2], [0.7]]}))
        out = str(tmp_path / "sweep")
        code, stdout, _ = run_cli(
            capsys,
            ["sweep", "--scenario", "rubbing", "--kmax", "1", "--horizon", "8",
             "--samples", "4", "--priors", str(priors), "--out", out],
        )
        assert code == 0
        assert json.loads(stdout)["n_priors"] == 2
        summary = json.load(open(os.path.join(out, "summary.json")))
        assert summary["priors"] == [[0.2], [0.7]]


class TestLandscape:
    def test_grid_csv(self, tmp_path, capsys):
        out = str(tmp_path / "grid.csv")
        code, stdout, _ = run_cli(
            capsys, ["landscape", "--scenario", "rubbing", "--res", "3", "--out", out]
        )
        assert code == 0
        assert json.loads(stdout)["axes"] == ["v_n", "v_t"]
        assert open(out).readline().strip() == "v_n,v_t,trace_f"

    def test_unsupported_scenario_fails_cleanly(self, tmp_path, capsys):
        out = str(tmp_path / "grid.csv")
        code, _, stderr = run_cli(
            capsys, ["landscape", "--scenario", "contouring", "--out", out]
        )
        assert code == 1
        err = json.loads(stderr)
        assert err["type"] == "ValueError"
        assert "landscape not supported" in err["error"]
        assert not os.path.exists(out)


class TestCompare:
    def test_small_paired_run(self, tmp_path, capsys):
        out = str(tmp_path / "cmp")
        code, stdout, _ = run_cli(
            capsys,
            ["compare", "--scenario", "pinching", "--seeds", "2", "--kmax", "1", "--out", out],
        )
        assert code == 0
        report = json.loads(stdout)
        assert report["n_seeds"] == 2 and "records" not in report
        assert os.path.exists(os.path.join(out, "compare.csv"))


class TestConfig:
    def test_dump_all(self, capsys):
        code, stdout, _ = run_cli(capsys, ["config", "--dump"])
        assert code == 0
        cfg = json.loads(stdout)
        assert set(cfg) == set(KINDS)
        assert cfg["hefting"]["true_params"] == {"mass": 0.05}

    def test_dump_one(self, capsys):
        code, stdout, _ = run_cli(capsys, ["config", "--dump", "--scenario", "rubbing"])
        assert code == 0
        cfg = json.loads(stdout)
        assert list(cfg) == ["rubbing"]
