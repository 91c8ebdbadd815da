"""Config parsing, report rendering, and the exit-code contract.

Suite internals are covered per module; here the checks are about the
front end: configs reject unknown keys and bad ranges, reports are
byte-identical across reruns, rows come out sorted, and the process
exit code reflects the table.
"""
import json
import os

import pytest

from critline import cli
from critline.errors import AccuracyUnattainableError, ConfigError


class TestConfigParsing:
    def test_flat_key_value(self):
        text = "# comment\n\nq_max = 17\nformat=json\nwidth_scale=0.04\n"
        got = cli.parse_config_text(text, "inline")
        assert got == {"q_max": 17, "format": "json", "width_scale": 0.04}

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            cli.parse_config_text("alpha=0.1\n", "inline")

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            cli.parse_config_text("q_max=ten\n", "inline")

    def test_missing_separator(self):
        with pytest.raises(ConfigError):
            cli.parse_config_text("q_max 10\n", "inline")

    def test_file_and_env(self, tmp_path, monkeypatch):
        path = tmp_path / "run.cfg"
        path.write_text("q_max=9\n")
        monkeypatch.delenv(cli.CONFIG_ENV, raising=False)
        assert cli.load_config(str(path)).q_max == 9
        monkeypatch.setenv(cli.CONFIG_ENV, str(path))
        assert cli.load_config(None).q_max == 9
        monkeypatch.delenv(cli.CONFIG_ENV)
        assert cli.load_config(None).q_max is None

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            cli.load_config("/no/such/config")

    def test_validation(self):
        with pytest.raises(ConfigError):
            cli.validated(cli.RunConfig(q_max=2))
        with pytest.raises(ConfigError):
            cli.validated(cli.RunConfig(disc_min=5))
        with pytest.raises(ConfigError):
            cli.validated(cli.RunConfig(width_scale=0.0))
        with pytest.raises(ConfigError):
            cli.validated(cli.RunConfig(tolerance=-1.0))
        with pytest.raises(ConfigError):
            cli.validated(cli.RunConfig(format="xml"))
        assert cli.validated(cli.RunConfig()).format == "csv"


class TestRendering:
    def rows(self):
        return [
            cli.ReportRow("demo", "b-row", 1.5, 2.0, True),
            cli.ReportRow("demo", "a-row", 3.0, 2.0, False, error=0.25),
        ]

    def test_csv_shape(self):
        text = cli.render_csv(self.rows())
        lines = text.splitlines()
        assert lines[0] == "suite,label,value,bound,passed,error"
        assert lines[1] == "demo,b-row,1.5,2.0,true,0.0"
        assert lines[2] == "demo,a-row,3.0,2.0,false,0.25"
        assert text.endswith("\n")

    def test_json_schema(self):
        got = json.loads(cli.render_json("demo", self.rows()))
        assert got["schema"] == cli.SCHEMA_VERSION
        assert got["suite"] == "demo"
        assert got["rows"][0]["label"] == "b-row"
        assert got["rows"][1]["passed"] is False

    def test_atomic_write(self, tmp_path):
        target = tmp_path / "report.csv"
        target.write_text("old")
        cli.write_atomic(str(target), "new\n")
        assert target.read_text() == "new\n"
        leftovers = [p for p in os.listdir(tmp_path) if p != "report.csv"]
        assert leftovers == []


class TestRunSuite:
    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            cli.run_suite("no-such-suite", cli.RunConfig())

    def test_report_written_and_sorted(self, tmp_path):
        out = tmp_path / "spec.csv"
        code = cli.run_suite("specfun-check", cli.RunConfig(out=str(out)))
        assert code == 0
        lines = out.read_text().splitlines()
        labels = [line.split(",")[1] for line in lines[1:]]
        assert labels == sorted(labels)
        assert len(labels) == 5

    def test_reruns_byte_identical(self, tmp_path):
        cfg_a = cli.RunConfig(q_max=8, out=str(tmp_path / "a.csv"))
        cfg_b = cli.RunConfig(q_max=8, out=str(tmp_path / "b.csv"))
        assert cli.run_suite("fe-check", cfg_a) == 0
        assert cli.run_suite("fe-check", cfg_b) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_json_report(self, tmp_path):
        out = tmp_path / "scan.json"
        cfg = cli.RunConfig(q_max=60, out=str(out), format="json")
        assert cli.run_suite("nonresidue-scan", cfg) == 0
        got = json.loads(out.read_text())
        assert got["schema"] == 1
        assert got["suite"] == "nonresidue-scan"
        assert got["rows"][-1]["label"] == "max-exponent-ratio"
        assert all(r["passed"] for r in got["rows"])

    def test_default_output_name(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cli.run_suite("specfun-check", cli.RunConfig())
        assert (tmp_path / "specfun-check.csv").exists()

    def test_failing_row_exits_one(self, tmp_path):
        cfg = cli.RunConfig(
            q_max=5, tolerance=1e-30, out=str(tmp_path / "tight.csv")
        )
        assert cli.run_suite("fe-check", cfg) == 1
        text = (tmp_path / "tight.csv").read_text()
        assert ",false," in text

    def test_quadfield_suites_small_ranges(self, tmp_path):
        cfg = cli.RunConfig(disc_min=-100, out=str(tmp_path / "g.csv"))
        assert cli.run_suite("genus-frobenius-scan", cfg) == 0
        cfg = cli.RunConfig(disc_min=-50, out=str(tmp_path / "s.csv"))
        assert cli.run_suite("sieve-integrals", cfg) == 0

    def test_every_suite_is_wired(self):
        assert len(cli.SUITES) == 13
        for name, fn in cli.SUITES.items():
            assert callable(fn), name


class TestMain:
    def test_exit_zero(self, tmp_path):
        out = str(tmp_path / "ok.csv")
        assert cli.main(["specfun-check", "--out", out]) == 0
        assert os.path.exists(out)

    def test_flag_overrides(self, tmp_path):
        out = tmp_path / "few.json"
        code = cli.main(
            ["fe-check", "--q-max", "5", "--format", "json", "--out", str(out)]
        )
        assert code == 0
        assert len(json.loads(out.read_text())["rows"]) == 3

    def test_config_error_exit_two(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("no_such_key=1\n")
        assert cli.main(["fe-check", "--config", str(bad)]) == 2
        assert cli.main(["fe-check", "--config", str(tmp_path / "absent")]) == 2

    def test_bad_suite_exit_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["not-a-suite"])
        assert exc.value.code == 2

    def test_accuracy_error_exit_three(self, tmp_path, monkeypatch):
        def refuses(cfg):
            raise AccuracyUnattainableError("dual paths disagree")

        monkeypatch.setitem(cli.SUITES, "specfun-check", refuses)
        assert cli.main(["specfun-check", "--out", str(tmp_path / "x.csv")]) == 3

    def test_failing_rows_exit_one(self, tmp_path):
        cfg = tmp_path / "tight.cfg"
        cfg.write_text("tolerance=1e-30\nq_max=5\n")
        code = cli.main(
            ["fe-check", "--config", str(cfg), "--out", str(tmp_path / "t.csv")]
        )
        assert code == 1
