"""Command-line behavior: output contracts, exit codes, determinism.

The CLI is a client of the HTTP service, so these tests cover the whole
stack: flag parsing, request assembly, service validation mapping, and
file emission.
"""
import json
import os

import pytest
from click.testing import CliRunner

from mrflimits.bounds import BoundInputs, evaluate_bounds
from mrflimits.cli import main
from mrflimits.figures import FigureSpec, build_figure, figure_json, write_figure
from mrflimits.genmodel import ModelParams
from mrflimits.graphs import build_family, complete, format_edge_list, GraphFamily
from mrflimits.montecarlo import TrialConfig, run_trials, summary_to_dict


@pytest.fixture()
def runner():
    return CliRunner()


def _stderr(result) -> str:
    # click >= 8.2 separates the streams; fall back to combined output
    try:
        return result.stderr
    except ValueError:
        return result.output


class TestGraphInfo:
    def test_complete_four_line(self, runner):
        result = runner.invoke(main, ["graph-info", "--family", "complete", "--n", "4"])
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "n=4 edges=6 delta_max=3 cheeger=2 (closed-form)"
        assert lines[1] == "connected=yes min_degree=3 family=complete"

    def test_even_chain_annotation(self, runner):
        result = runner.invoke(main, ["graph-info", "--family", "chain", "--n", "6"])
        assert result.exit_code == 0
        assert "cheeger=0.333333 (closed-form, even n)" in result.output

    def test_odd_chain_uses_enumeration(self, runner):
        result = runner.invoke(main, ["graph-info", "--family", "chain", "--n", "5"])
        assert result.exit_code == 0
        assert "cheeger=0.5 (exact-enumeration)" in result.output

    def test_json_mode(self, runner):
        result = runner.invoke(main, ["graph-info", "--family", "star", "--n", "8", "--json"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["num_edges"] == 7
        assert body["delta_max"] == 7
        assert body["cheeger"] == 1.0
        assert body["connected"] is True

    def test_edge_file_round_trip(self, runner, tmp_path):
        g = build_family(GraphFamily("expander", 8, d=4, seed=3))
        path = tmp_path / "g.txt"
        path.write_text(format_edge_list(g))
        result = runner.invoke(main, ["graph-info", "--edges", str(path)])
        assert result.exit_code == 0
        assert f"n={g.n} edges={g.num_edges}" in result.output

    def test_disconnected_edge_file_exits_2(self, runner, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 1\n2 3\n")
        result = runner.invoke(main, ["--", "graph-info", "--edges", str(path)])
        assert result.exit_code == 2
        assert "not connected" in _stderr(result)

    def test_missing_edge_file_exits_3(self, runner, tmp_path):
        result = runner.invoke(main, ["graph-info", "--edges", str(tmp_path / "nope.txt")])
        assert result.exit_code == 3

    def test_family_and_edges_together_exit_2(self, runner, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("0 1\n")
        result = runner.invoke(
            main, ["graph-info", "--family", "chain", "--n", "3", "--edges", str(path)])
        assert result.exit_code == 2

    def test_no_graph_exits_2(self, runner):
        result = runner.invoke(main, ["graph-info"])
        assert result.exit_code == 2

    def test_family_without_n_exits_2(self, runner):
        result = runner.invoke(main, ["graph-info", "--family", "complete"])
        assert result.exit_code == 2


class TestBounds:
    def test_complete_half_noise_minimax(self, runner):
        result = runner.invoke(
            main, ["bounds", "--family", "complete", "--n", "4", "--p", "0.5"])
        assert result.exit_code == 0
        assert "minimax_lower=0.75" in result.output
        assert "regime=EdgeOnly" in result.output
        assert "epsilon2" not in result.output

    def test_text_report_matches_direct_evaluation(self, runner):
        result = runner.invoke(
            main, ["bounds", "--family", "star", "--n", "16", "--p", "0.1", "--q", "0.3"])
        assert result.exit_code == 0
        got = dict(line.split("=", 1) for line in result.output.splitlines())
        inputs = BoundInputs.from_graph(
            build_family(GraphFamily("star", 16)), ModelParams(0.1, 0.3))
        report = evaluate_bounds(inputs)
        assert float(got["f"]) == report.f
        assert float(got["g"]) == report.g
        assert float(got["g_star"]) == report.g_star
        assert float(got["minimax_lower"]) == report.minimax_lower
        assert float(got["epsilon1"]) == report.epsilon1
        assert float(got["epsilon2"]) == report.epsilon2
        assert got["necessary_condition_violated"] == str(report.necessary_condition_violated).lower()

    def test_branch_flag_follows_the_larger_term(self, runner):
        # tiny q: the node channel is nearly clean, f dominates (g goes negative)
        result = runner.invoke(
            main, ["bounds", "--family", "star", "--n", "64", "--p", "0.1", "--q", "0.045"])
        assert "minimax_branch=f" in result.output
        result = runner.invoke(
            main, ["bounds", "--family", "star", "--n", "64", "--p", "0.1", "--q", "0.45"])
        assert "minimax_branch=g" in result.output

    def test_sparse_chain_negative_verdicts(self, runner):
        result = runner.invoke(
            main, ["bounds", "--family", "chain", "--n", "64", "--p", "0.01"])
        assert result.exit_code == 0
        assert "sufficient_condition_holds=false" in result.output

    def test_json_mode_matches_direct_evaluation(self, runner):
        result = runner.invoke(
            main, ["bounds", "--family", "complete", "--n", "6", "--p", "0.2", "--json"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        report = evaluate_bounds(BoundInputs.from_graph(complete(6), ModelParams(0.2)))
        assert body["minimax_lower"] == report.minimax_lower
        assert body["mle_success_lower"] == report.mle_success_lower
        assert body["epsilon2"] is None

    def test_missing_p_exits_2(self, runner):
        result = runner.invoke(main, ["bounds", "--family", "complete", "--n", "4"])
        assert result.exit_code == 2
        assert "--p is required" in _stderr(result)

    def test_boundary_q_exits_2(self, runner):
        result = runner.invoke(
            main, ["bounds", "--family", "complete", "--n", "4", "--p", "0.1", "--q", "0.5"])
        assert result.exit_code == 2

    def test_cheeger_override_reaches_report(self, runner):
        base = runner.invoke(
            main, ["bounds", "--family", "chain", "--n", "12", "--p", "0.1", "--json"])
        boosted = runner.invoke(
            main, ["bounds", "--family", "chain", "--n", "12", "--p", "0.1",
                   "--cheeger", "6", "--json"])
        low = json.loads(base.output)
        high = json.loads(boosted.output)
        assert high["cheeger"] == 6.0
        assert high["mle_success_lower"] >= low["mle_success_lower"]


class TestFigure:
    def test_csv_files_match_library_output(self, runner, tmp_path):
        cli_dir = tmp_path / "cli"
        lib_dir = tmp_path / "lib"
        result = runner.invoke(
            main, ["figure", "--id", "fig1", "--step", "0.05", "--out", str(cli_dir)])
        assert result.exit_code == 0
        paths = write_figure(
            build_figure(FigureSpec("fig1", p_step=0.05)), str(lib_dir))
        assert sorted(os.listdir(cli_dir)) == sorted(os.path.basename(p) for p in paths)
        for path in paths:
            name = os.path.basename(path)
            assert (cli_dir / name).read_bytes() == open(path, "rb").read()

    def test_repeated_runs_identical(self, runner, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            result = runner.invoke(
                main, ["figure", "--id", "fig7", "--step", "0.1", "--out", str(out)])
            assert result.exit_code == 0
        assert (out1 / "fig7_grid.csv").read_bytes() == (out2 / "fig7_grid.csv").read_bytes()

    def test_json_format_matches_library(self, runner, tmp_path):
        result = runner.invoke(
            main, ["figure", "--id", "fig2", "--step", "0.05", "--format", "json",
                   "--out", str(tmp_path)])
        assert result.exit_code == 0
        expected = figure_json(build_figure(FigureSpec("fig2", p_step=0.05)))
        assert (tmp_path / "fig2.json").read_text() == expected

    def test_q_list_flag_changes_columns(self, runner, tmp_path):
        result = runner.invoke(
            main, ["figure", "--id", "fig4", "--step", "0.25", "--q", "0.1,0.3",
                   "--out", str(tmp_path)])
        assert result.exit_code == 0
        header = (tmp_path / "fig4_curves.csv").read_text().splitlines()[0]
        assert "q0.1" in header and "q0.3" in header and "q0.05" not in header

    def test_unknown_id_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["figure", "--id", "fig99", "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "unknown figure id" in _stderr(result)

    def test_bad_format_exits_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["figure", "--id", "fig2", "--format", "png", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_unwritable_path_exits_3(self, runner, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        result = runner.invoke(
            main, ["figure", "--id", "fig2", "--step", "0.1",
                   "--out", str(blocker / "sub")])
        assert result.exit_code == 3

    def test_missing_id_exits_2(self, runner):
        result = runner.invoke(main, ["figure"])
        assert result.exit_code == 2


class TestSimulate:
    ARGS = ["simulate", "--family", "complete", "--n", "8", "--p", "0.05",
            "--trials", "60", "--seed", "7"]

    def test_verdict_line_and_exit(self, runner):
        result = runner.invoke(main, self.ARGS)
        assert result.exit_code == 0
        assert result.output.splitlines()[-1] == "CONSISTENT"

    def test_summary_matches_direct_run(self, runner, tmp_path):
        out = tmp_path / "s.json"
        result = runner.invoke(main, self.ARGS + ["--out", str(out)])
        assert result.exit_code == 0
        assert result.output == "CONSISTENT\n"
        cfg = TrialConfig(graph=complete(8), params=ModelParams(0.05),
                          trials=60, master_seed=7)
        payload = summary_to_dict(cfg, run_trials(cfg))
        payload["verdict"] = "CONSISTENT"
        expected = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        assert out.read_text() == expected

    def test_worker_count_does_not_change_bytes(self, runner, tmp_path):
        blobs = []
        for workers in ("1", "4", "8"):
            out = tmp_path / f"w{workers}.json"
            result = runner.invoke(
                main, self.ARGS + ["--workers", workers, "--out", str(out)])
            assert result.exit_code == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]
        assert b'"workers"' not in blobs[0]

    def test_repeat_run_byte_identical(self, runner, tmp_path):
        out1, out2 = tmp_path / "one.json", tmp_path / "two.json"
        runner.invoke(main, self.ARGS + ["--out", str(out1)])
        runner.invoke(main, self.ARGS + ["--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_env_var_sets_default_workers(self, runner, tmp_path):
        out = tmp_path / "env.json"
        result = runner.invoke(main, self.ARGS + ["--out", str(out)],
                               env={"MRFLIMITS_WORKERS": "3"})
        assert result.exit_code == 0
        ref = tmp_path / "ref.json"
        runner.invoke(main, self.ARGS + ["--out", str(ref)])
        assert out.read_bytes() == ref.read_bytes()

    def test_bad_env_var_exits_2(self, runner):
        result = runner.invoke(main, self.ARGS, env={"MRFLIMITS_WORKERS": "zebra"})
        assert result.exit_code == 2

    def test_zero_trials_exits_2(self, runner):
        result = runner.invoke(
            main, ["simulate", "--family", "complete", "--n", "8", "--p", "0.05",
                   "--trials", "0"])
        assert result.exit_code == 2

    def test_missing_trials_exits_2(self, runner):
        result = runner.invoke(
            main, ["simulate", "--family", "complete", "--n", "8", "--p", "0.05"])
        assert result.exit_code == 2
        assert "--trials is required" in _stderr(result)

    def test_regime_flag_cross_checks(self, runner):
        base = ["simulate", "--family", "star", "--n", "6", "--p", "0.1",
                "--trials", "5"]
        assert runner.invoke(main, base + ["--regime", "edge-and-node"]).exit_code == 2
        assert runner.invoke(
            main, base + ["--q", "0.1", "--regime", "edge-only"]).exit_code == 2
        assert runner.invoke(main, base + ["--regime", "sideways"]).exit_code == 2
        ok = runner.invoke(main, base + ["--q", "0.1", "--regime", "edge-and-node"])
        assert ok.exit_code == 0

    def test_inflated_cheeger_forces_violation_exit_4(self, runner, tmp_path):
        # a wildly wrong expansion constant makes the success bound
        # unattainable, which the harness must flag rather than absorb
        out = tmp_path / "v.json"
        result = runner.invoke(
            main, ["simulate", "--family", "chain", "--n", "10", "--p", "0.35",
                   "--trials", "200", "--seed", "3", "--cheeger", "400",
                   "--out", str(out)])
        assert result.exit_code == 4
        assert result.output.splitlines()[-1] == "VIOLATION"
        body = json.loads(out.read_text())
        assert body["verdict"] == "VIOLATION"
        assert body["bound_consistent"] is False


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, runner, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text(
            "# defaults shared across subcommands\n"
            "[run]\n"
            "family = complete\n"
            "n = 4\n"
            "p = 0.5\n"
            "trials = 20\n"
        )
        result = runner.invoke(main, ["bounds", "--config", str(conf)])
        assert result.exit_code == 0
        assert "minimax_lower=0.75" in result.output
        override = runner.invoke(main, ["bounds", "--config", str(conf), "--n", "6"])
        assert "n=6 edges=15" in override.output
        sim = runner.invoke(main, ["simulate", "--config", str(conf), "--seed", "1"])
        assert sim.exit_code == 0

    def test_quoted_strings_and_booleans(self, runner, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text('family = "star"\nn = 8\njson = true\n')
        result = runner.invoke(main, ["graph-info", "--config", str(conf)])
        assert result.exit_code == 0
        assert json.loads(result.output)["delta_max"] == 7

    def test_malformed_line_exits_2(self, runner, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("family complete\n")
        result = runner.invoke(main, ["graph-info", "--config", str(conf)])
        assert result.exit_code == 2

    def test_bad_value_exits_2(self, runner, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("family = complete\nn = many\n")
        result = runner.invoke(main, ["graph-info", "--config", str(conf)])
        assert result.exit_code == 2
        assert "bad config value for n" in _stderr(result)

    def test_missing_config_exits_3(self, runner, tmp_path):
        result = runner.invoke(
            main, ["graph-info", "--family", "complete", "--n", "4",
                   "--config", str(tmp_path / "none.conf")])
        assert result.exit_code == 3


class TestTransport:
    def test_unreachable_server_exits_3(self, runner):
        result = runner.invoke(
            main, ["graph-info", "--family", "complete", "--n", "4",
                   "--server", "http://127.0.0.1:9"])
        assert result.exit_code == 3
        assert "unreachable" in _stderr(result)

    def test_help_screens(self, runner):
        for cmd in ("graph-info", "bounds", "figure", "simulate", "serve"):
            result = runner.invoke(main, [cmd, "--help"])
            assert result.exit_code == 0
