"""Command-line interface: parsing, CSV artifacts, exit codes, determinism.

Mechanics run on a coarse grid (dx=0.05, few paths) to stay fast; the
default-parameter numbers at dx=0.01 are covered by the acceptance suite.
"""

import csv
import io
import sys

import numpy as np
import pytest

from pppcontract import cli

FAST = ["--dx", "0.05", "--na", "128", "--eps", "1e-9"]


def run_cli(argv, capsys=None):
    return cli.main(argv)


class TestConfigParsing:
    def test_default_parameters(self):
        args = cli.build_parser().parse_args(["solve"])
        cfg = cli.parse_config(args)
        assert (cfg.alpha, cfg.beta, cfg.lam, cfg.delta) == (0.035, 0.017, 0.08, 0.065)
        assert (cfg.sigma, cfg.xmax, cfg.dx, cfg.eps) == (1.2, 10.0, 0.01, 1e-9)

    def test_file_sets_value(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("# a comment\nsigma = 2.2\n\npaths = 500 # trailing comment\n")
        args = cli.build_parser().parse_args(["solve", "--config", str(f)])
        cfg = cli.parse_config(args)
        assert cfg.sigma == 2.2 and cfg.paths == 500

    def test_flag_overrides_file(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("sigma = 1.2\n")
        args = cli.build_parser().parse_args(
            ["solve", "--config", str(f), "--sigma", "1.65"])
        assert cli.parse_config(args).sigma == 1.65

    def test_unknown_key_reports_line_number(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("sigma = 1.2\nwibble = 3\n")
        args = cli.build_parser().parse_args(["solve", "--config", str(f)])
        with pytest.raises(cli.ConfigError, match=r":2: unknown key 'wibble'"):
            cli.parse_config(args)

    def test_bad_value_reports_line_number(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("\nsigma = fast\n")
        args = cli.build_parser().parse_args(["solve", "--config", str(f)])
        with pytest.raises(cli.ConfigError, match=r":2: bad value"):
            cli.parse_config(args)

    def test_sweep_and_x0_lists(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("sweep = 1.2, 1.65\nx0 = 0.5, 1.0\n")
        args = cli.build_parser().parse_args(["sweep", "--config", str(f)])
        cfg = cli.parse_config(args)
        assert cfg.sweep == (1.2, 1.65) and cfg.x0 == (0.5, 1.0)

    def test_missing_command_usage(self, capsys):
        assert cli.main([]) == cli.EXIT_CONFIG

    def test_invalid_params_exit_config(self, tmp_path):
        # lambda < delta violates the impatience ordering, rejected before any solve
        rc = cli.main(["solve", "--lambda", "0.05", "--delta", "0.065"])
        assert rc == cli.EXIT_CONFIG


class TestSolveCommand:
    def test_writes_schema_and_prints_summary(self, tmp_path, capsys):
        rc = cli.main(["solve", "--out", str(tmp_path)] + FAST)
        assert rc == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "v(0)=" in out and "boundary=" in out
        path = tmp_path / "solution_1.2.csv"
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["x", "value", "effort", "rent", "stopping"]
        assert len(rows) == 1 + 201  # boundaries included at dx=0.05
        assert float(rows[1][0]) == 0.0
        assert float(rows[1][1]) == pytest.approx(0.942, abs=0.01)
        assert rows[1][4] == "0"
        assert float(rows[-1][0]) == 10.0
        assert float(rows[-1][1]) == -10.0
        assert rows[-1][4] == "1"

    def test_stopping_rows_sit_on_obstacle(self, tmp_path):
        cli.main(["solve", "--out", str(tmp_path)] + FAST)
        rows = list(csv.reader((tmp_path / "solution_1.2.csv").open()))[1:]
        for x, v, a, r, s in rows:
            if s == "1":
                assert float(v) == pytest.approx(-float(x), abs=1e-12)
                assert float(a) == 0.0 and float(r) == 0.0

    def test_byte_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        cli.main(["solve", "--out", str(out1)] + FAST)
        cli.main(["solve", "--out", str(out2)] + FAST)
        assert (out1 / "solution_1.2.csv").read_bytes() == \
            (out2 / "solution_1.2.csv").read_bytes()

    def test_nonconvergence_exit_and_no_csv(self, tmp_path):
        rc = cli.main(["solve", "--out", str(tmp_path), "--dx", "0.05",
                       "--eps", "1e-16"])
        assert rc == cli.EXIT_NSOLVE
        assert not (tmp_path / "solution_1.2.csv").exists()


class TestSweepCommand:
    def test_regions_csv_sorted(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("sweep = 1.65, 1.2\n")
        rc = cli.main(["sweep", "--config", str(f), "--out", str(tmp_path)] + FAST)
        assert rc == cli.EXIT_OK
        rows = list(csv.reader((tmp_path / "regions.csv").open()))
        assert rows[0] == ["sigma", "boundary"]
        sig = [float(r[0]) for r in rows[1:]]
        assert sig == sorted(sig) == [1.2, 1.65]
        assert (tmp_path / "solution_1.2.csv").exists()
        assert (tmp_path / "solution_1.65.csv").exists()

    def test_boundaries_nondecreasing(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("sweep = 1.2, 2.2\n")
        cli.main(["sweep", "--config", str(f), "--out", str(tmp_path)] + FAST)
        rows = list(csv.reader((tmp_path / "regions.csv").open()))[1:]
        bounds = [float(r[1]) for r in rows]
        assert bounds[0] <= bounds[1]

    def test_single_element_sweep_matches_solve(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("sweep = 1.2\n")
        cli.main(["sweep", "--config", str(f), "--out", str(tmp_path / "s")] + FAST)
        cli.main(["solve", "--out", str(tmp_path / "v")] + FAST)
        assert (tmp_path / "s" / "solution_1.2.csv").read_bytes() == \
            (tmp_path / "v" / "solution_1.2.csv").read_bytes()


class TestSimulateCommand:
    def test_immediate_stop_row_exact(self, tmp_path):
        rc = cli.main(["simulate", "--out", str(tmp_path), "--x0", "5.0",
                       "--paths", "50", "--dt", "0.01"] + FAST)
        assert rc == cli.EXIT_OK
        rows = list(csv.reader((tmp_path / "mc_report.csv").open()))
        assert rows[0] == ["x0", "pde_value", "mc_mean", "mc_se",
                           "tau_mean", "censored_frac"]
        x0, pde, mean, se, tau, cens = map(float, rows[1])
        assert mean == -5.0 and se == 0.0 and tau == 0.0 and cens == 0.0

    def test_agreement_and_determinism(self, tmp_path):
        argv = ["simulate", "--out", None, "--x0", "1.0", "--paths", "4000",
                "--dt", "0.002", "--seed", "7"] + FAST
        outs = []
        for sub in ("r1", "r2"):
            argv[2] = str(tmp_path / sub)
            assert cli.main(list(argv)) == cli.EXIT_OK
            outs.append((tmp_path / sub / "mc_report.csv").read_bytes())
        assert outs[0] == outs[1]


class TestCheckCommand:
    def test_passes_at_defaults(self, tmp_path, capsys):
        rc = cli.main(["check", "--paths", "1500", "--dt", "0.002"] + FAST)
        out = capsys.readouterr().out
        assert rc == cli.EXIT_OK, out
        assert "[FAIL]" not in out
        for name in ("round trip", "ODE oracle", "M-matrix", "complementarity",
                     "obstacle", "incentive"):
            assert name in out


class TestFormatting:
    def test_twelve_significant_digits(self):
        assert cli._fmt(1.0 / 3.0) == "0.333333333333"
        assert cli._fmt(-10.0) == "-10"
