"""End-to-end CLI coverage: config intake, output formats, exit codes."""
import json
import math

import pytest

import hestonfp.cli as cli
from hestonfp import Dimensionless, ModelParams


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def _read_rows(path):
    lines = open(path, encoding="utf-8", newline="").read().split("\n")
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:] if line]
    return header, rows


class TestLoadConfig:
    def test_physical_parameters(self, tmp_path):
        path = _write(tmp_path, "fig1.cfg",
                      "alpha=0.045\nm2=8.62e-5\nk=0.0045\n")
        spec = cli.load_config(path)
        d = spec.dimensionless
        assert math.isclose(d.theta, 1.9156e-3, rel_tol=1e-4)
        assert math.isclose(d.beta, 0.1, rel_tol=1e-12)

    def test_empty_file_gives_defaults(self, tmp_path):
        path = _write(tmp_path, "empty.cfg", "")
        spec = cli.load_config(path)
        assert spec.params == cli.DEFAULT_PARAMS
        assert spec.seed == 0 and spec.paths == 10**6 and spec.dt == 1e-3

    def test_comments_and_blanks_ignored(self, tmp_path):
        path = _write(tmp_path, "c.cfg", "# comment\n\nseed=7\n")
        assert cli.load_config(path).seed == 7

    def test_mixed_parameter_groups_rejected(self, tmp_path):
        path = _write(tmp_path, "bad.cfg", "theta=1.92e-3\nalpha=0.045\n")
        with pytest.raises(cli.ParameterError, match="not both"):
            cli.load_config(path)

    def test_unknown_key_named(self, tmp_path):
        path = _write(tmp_path, "bad.cfg", "volvol=3\n")
        with pytest.raises(cli.ConfigError, match="volvol"):
            cli.load_config(path)

    def test_duplicate_key_named(self, tmp_path):
        path = _write(tmp_path, "bad.cfg", "seed=1\nseed=2\n")
        with pytest.raises(cli.ConfigError, match="duplicate key 'seed'"):
            cli.load_config(path)

    def test_missing_file_named(self):
        with pytest.raises(cli.ConfigError, match="no/such/file"):
            cli.load_config("no/such/file.cfg")


class TestOutputFormats:
    def test_csv_round_trip_is_byte_identical(self, tmp_path):
        out = str(tmp_path / "exact.csv")
        rc = cli.main(["exact", "--z", "1e-3:1e-1:7", "--output", out])
        assert rc == 0
        original = open(out, encoding="utf-8", newline="").read()
        header, rows = _read_rows(out)

        def cell(text):
            try:
                return int(text)
            except ValueError:
                return float(text)

        re_emitted = cli.emit_csv(
            header, [[cell(row[c]) for c in header] for row in rows])
        assert re_emitted == original
        assert original.endswith("\n") and "\r" not in original

    def test_json_envelope(self, tmp_path):
        out = str(tmp_path / "exact.json")
        rc = cli.main(["exact", "--z", "0.01", "--seed", "5",
                       "--format", "json", "--output", out])
        assert rc == 0
        payload = json.loads(open(out, encoding="utf-8").read())
        assert set(payload) == {"meta", "rows"}
        meta = payload["meta"]
        assert meta["seed"] == 5
        assert meta["version"] == cli.__version__
        assert math.isclose(meta["theta"], 1.9156e-3, rel_tol=1e-4)
        assert math.isclose(meta["beta"], 0.1, rel_tol=1e-12)
        row = payload["rows"][0]
        assert set(row) == {"z", "v", "tau", "S", "err_estimate", "panels"}

    def test_deterministic_output_bytes(self, tmp_path):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        args = ["simulate", "--z", "0.01", "--tau", "0.2", "--paths", "2000",
                "--dt", "5e-3", "--seed", "42"]
        assert cli.main(args + ["--output", a]) == 0
        assert cli.main(args + ["--output", b]) == 0
        assert open(a, "rb").read() == open(b, "rb").read()


class TestCommands:
    def test_boundary_start_has_zero_survival(self, tmp_path):
        out = str(tmp_path / "a.csv")
        rc = cli.main(["approx", "--method", "erf", "--z", "0", "--output", out])
        assert rc == 0
        _, rows = _read_rows(out)
        assert float(rows[0]["S"]) == 0.0

    def test_method_aliases_agree(self, tmp_path):
        outs = []
        for method in ("erf", "erf_joint"):
            out = str(tmp_path / f"{method}.csv")
            assert cli.main(["approx", "--method", method, "--z", "0.02",
                             "--output", out]) == 0
            outs.append(_read_rows(out)[1][0]["S"])
        assert outs[0] == outs[1]

    @pytest.mark.xfail(strict=True, reason="documented l_c ~ 0.336 within "
                       "10%: the asymptotic-balance root is 0.2406 (see the "
                       "matching analysis test); row emitted is correct")
    def test_crossing_level_documented_value(self, tmp_path):
        out = str(tmp_path / "lc.csv")
        rc = cli.main(["crossing-level", "--beta", "10",
                       "--theta-tau", "5.76e-3", "--output", out])
        assert rc == 0
        _, rows = _read_rows(out)
        assert abs(float(rows[0]["l_c"]) - 0.336) / 0.336 <= 0.10

    def test_crossing_level_row_contents(self, tmp_path):
        out = str(tmp_path / "lc.csv")
        rc = cli.main(["crossing-level", "--beta", "10",
                       "--theta-tau", "5.76e-3", "--output", out])
        assert rc == 0
        header, rows = _read_rows(out)
        assert header == ["beta", "theta_tau", "l_c", "residual"]
        assert math.isclose(float(rows[0]["l_c"]), 0.24059, rel_tol=1e-3)
        assert float(rows[0]["residual"]) <= 1e-10

    def test_beta_scan_expands_rows(self, tmp_path):
        out = str(tmp_path / "scan.csv")
        rc = cli.main(["crossing-level", "--beta", "1:100:5",
                       "--theta-tau", "5.76e-3", "--output", out])
        assert rc == 0
        _, rows = _read_rows(out)
        assert len(rows) == 5
        lcs = [float(r["l_c"]) for r in rows]
        assert lcs == sorted(lcs)

    def test_grid_flag_expansion(self, tmp_path):
        out = str(tmp_path / "grid.csv")
        assert cli.main(["exact", "--z", "1e-3:1e-1:5", "--output", out]) == 0
        _, rows = _read_rows(out)
        assert len(rows) == 5
        assert math.isclose(float(rows[0]["z"]), 1e-3, rel_tol=1e-12)
        assert math.isclose(float(rows[-1]["z"]), 1e-1, rel_tol=1e-12)

    def test_sweep_columns(self, tmp_path):
        out = str(tmp_path / "sweep.csv")
        assert cli.main(["sweep", "--z", "0.01", "--output", out]) == 0
        header, rows = _read_rows(out)
        assert header == ["z", "v", "tau", "exact", "averaged", "erf_joint",
                          "arctan_joint", "pheno", "erf_averaged",
                          "arctan_averaged"]
        assert len(rows) == 1

    def test_figure_fig1_pairs_exact_and_mc(self, tmp_path):
        out = str(tmp_path / "fig1.csv")
        rc = cli.main(["figure", "fig1", "--paths", "2000", "--seed", "1",
                       "--output", out])
        assert rc == 0
        header, rows = _read_rows(out)
        assert header == ["z", "S_exact", "err_estimate", "S_mc", "ci"]
        assert len(rows) == 16
        for row in rows:
            assert abs(float(row["S_mc"]) - float(row["S_exact"])) <= \
                max(3.0 / 1.96 * float(row["ci"]), 0.01)

    def test_simulate_stationary_smoke(self, tmp_path):
        out = str(tmp_path / "sim.csv")
        rc = cli.main(["simulate", "--z", "0.01", "--tau", "0.2", "--paths",
                       "500", "--dt", "5e-3", "--stationary", "--output", out])
        assert rc == 0
        header, rows = _read_rows(out)
        assert header == ["tau", "S", "ci"] and len(rows) == 1

    def test_flags_override_config(self, tmp_path):
        cfg = _write(tmp_path, "c.cfg", "theta=1.92e-3\nbeta=0.1\n")
        out = str(tmp_path / "o.json")
        rc = cli.main(["crossing-level", "--config", cfg, "--beta", "1.0",
                       "--theta-tau", "0.03", "--format", "json",
                       "--output", out])
        assert rc == 0
        meta = json.loads(open(out, encoding="utf-8").read())["meta"]
        assert meta["beta"] == 1.0
        assert meta["theta"] == 1.92e-3


class TestExitCodes:
    def test_conflicting_parameter_groups(self, capsys):
        rc = cli.main(["exact", "--theta", "1.92e-3", "--alpha", "0.045"])
        assert rc == 2
        assert "not both" in capsys.readouterr().err

    def test_unknown_method(self, capsys):
        rc = cli.main(["approx", "--method", "parabola"])
        assert rc == 2
        assert "--method" in capsys.readouterr().err

    def test_malformed_grid(self, capsys):
        rc = cli.main(["exact", "--z", "1:2"])
        assert rc == 2
        assert "--z" in capsys.readouterr().err

    def test_usage_error_from_argparse(self, capsys):
        assert cli.main([]) == 2
        assert cli.main(["no-such-command"]) == 2
        capsys.readouterr()

    def test_no_root_is_exit_3_with_no_output(self, tmp_path, capsys):
        out = tmp_path / "never.csv"
        rc = cli.main(["crossing-level", "--beta", "0.01",
                       "--theta-tau", "10", "--output", str(out)])
        assert rc == 3
        assert not out.exists()
        assert "numerical failure" in capsys.readouterr().err

    def test_missing_required_theta_tau(self, capsys):
        rc = cli.main(["crossing-level", "--beta", "10"])
        assert rc == 2
        assert "--theta-tau" in capsys.readouterr().err
