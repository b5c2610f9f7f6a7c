import json
import os

import numpy as np

from rootreg.cli import main


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


class TestTrack:
    def test_builtin_family(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "degree": 2, "domain": [0, 1],
            "family": {"kind": "builtin", "name": "zn-minus-t"},
        })
        out = str(tmp_path / "out")
        assert main(["track", "--config", cfg, "--p", "1.0", "--json", "--out", out]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["branch_reports"][0]["lp_of_derivative"] - 1.0) < 1e-6
        assert os.path.exists(os.path.join(out, "trajectories.csv"))
        with open(os.path.join(out, "trajectories.csv")) as fh:
            header = fh.readline().strip().split(",")
        assert header[0] == "t" and "re_lambda_0" in header

    def test_sampled_family(self, tmp_path, capsys):
        grid = np.linspace(0, 1, 65)
        coeffs = [[[0.0, 0.0] for _ in grid], [[-float(t), 0.0] for t in grid]]
        cfg = write_config(tmp_path, {
            "degree": 2, "domain": [0, 1],
            "family": {"kind": "sampled", "grid": list(grid), "coeffs": coeffs},
        })
        assert main(["track", "--config", cfg, "--json"]) == 0

    def test_missing_config(self, capsys):
        assert main(["track"]) == 2


class TestNorms:
    def test_sampled_function_json(self, tmp_path, capsys):
        grid = list(np.linspace(0, 1, 33))
        vals = [[t, 0.0] for t in grid]
        cfg = write_config(tmp_path, {"grid": grid, "values": vals, "q": 1.0})
        assert main(["norms", "--config", cfg, "--p", "2.0", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["sandwich"]["passed"]

    def test_named_function(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "function": {"name": "power", "gamma": 0.5},
            "domain": [0.0, 1.0], "samples": 512,
        })
        assert main(["norms", "--config", cfg, "--p", "1.5", "--json"]) == 0


class TestCover:
    def test_budget_config(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "L": 0.5, "D": 0.2, "domain": [0, 1],
            "radicals": [{"k": 2, "base": {"name": "poly", "coeffs": [[0, 0], [1, 0], [-1, 0]]}}],
        })
        out = str(tmp_path / "cov")
        assert main(["cover", "--config", cfg, "--json", "--out", out]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["max_overlap"] <= 2
        assert os.path.exists(os.path.join(out, "cover.csv"))

    def test_malformed(self, tmp_path):
        cfg = write_config(tmp_path, {"L": 0.5})
        assert main(["cover", "--config", cfg]) == 2


class TestGlaeserCmd:
    def test_interpolation(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"op": "interpolation-bound", "m": 1, "alpha": 1.0,
                                      "A": 1.0, "B": 1.0, "M": 1.0})
        assert main(["glaeser", "--config", cfg, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["nodes"][0] - 1.0) < 1e-12

    def test_unknown_op(self, tmp_path):
        cfg = write_config(tmp_path, {"op": "nope"})
        assert main(["glaeser", "--config", cfg]) == 2


class TestTraceCmd:
    def test_cubic(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "degree": 3, "domain": [0, 1],
            "family": {"kind": "builtin", "name": "cubic-walkthrough"},
            "max_depth": 2,
        })
        assert main(["trace", "--config", cfg, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["all_passed"]


class TestExperimentCmd:
    def test_unknown_name(self, tmp_path):
        cfg = write_config(tmp_path, {"name": "bogus"})
        assert main(["experiment", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_monodromy_runs(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"name": "monodromy", "seed": 1})
        out = str(tmp_path / "mono")
        assert main(["experiment", "--config", cfg, "--out", out, "--json"]) == 0
        report = json.load(open(os.path.join(out, "report.json")))
        assert {tuple(l["permutation"]) for l in report["loops"]} == {(1, 0), (1, 2, 0)}
        assert os.path.exists(os.path.join(out, "manifest.json"))


class TestNumericFailureExit:
    def test_monodromy_obstruction_via_api_maps_to_3(self, tmp_path, capsys):
        # a numeric failure inside a handler must exit 3 with a JSON diagnostic
        import rootreg.cli as cli
        from rootreg.errors import NonConvergence

        def boom(args):
            raise NonConvergence("synthetic failure")

        cfg = write_config(tmp_path, {"degree": 2, "domain": [0, 1],
                                      "family": {"kind": "builtin", "name": "zn-minus-t"}})
        orig = cli._cmd_track
        cli.__dict__["_cmd_track"] = boom
        try:
            rc = main(["track", "--config", cfg])
        finally:
            cli.__dict__["_cmd_track"] = orig
        assert rc == 3
        err = capsys.readouterr().err
        diag = json.loads(err.strip().splitlines()[-1])
        assert diag["error"] == "NonConvergence"
