"""Benchmark harness and command-line surface."""
import csv

import pytest

import mdpsweep
from mdpsweep.bench import (CSV_COLUMNS, SCALE_COLUMNS, SOLVER_NAMES,
                            compare_backends, emit_scaling_table, run_pipeline,
                            resolve_problem, run_suite)
from mdpsweep.cli import main
from mdpsweep.mdp import sup_norm_diff
from mdpsweep.solvers import SolverConfig


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class TestPipelines:
    def test_every_solver_on_chain3(self, chain3_g):
        cfg = SolverConfig()
        values = {}
        for name in SOLVER_NAMES:
            report = run_pipeline(name, chain3_g, cfg)
            assert report.converged, name
            values[name] = report.value
        # every pipeline lands inside the policy-quality band of every other
        for u in values.values():
            for v in values.values():
                assert sup_norm_diff(u, v) <= 0.198

    def test_unknown_solver(self, chain3_g):
        with pytest.raises(ValueError):
            run_pipeline("sor", chain3_g, SolverConfig())

    def test_resolve_problem_tokens(self):
        name, g = resolve_problem("chain3")
        assert name == "chain3" and g.mdp.discount == 0.9
        _, g = resolve_problem("A:noisy")
        assert g.mdp.discount == 0.99
        _, g = resolve_problem("A:noisy", discount=0.5)
        assert g.mdp.discount == 0.5

    def test_resolve_problem_rejects_unknown(self, tmp_path):
        from mdpsweep.bench import ProblemLoadError
        with pytest.raises(ProblemLoadError):
            resolve_problem("A:gale")
        with pytest.raises(ProblemLoadError):
            resolve_problem(str(tmp_path / "missing.mdp"))


class TestRunSuite:
    def test_chain3_all_six(self, tmp_path):
        out = tmp_path / "suite.csv"
        rows, ok = run_suite(["chain3"], list(SOLVER_NAMES), SolverConfig(), out)
        assert ok and len(rows) == 6
        assert all(r.converged for r in rows)
        assert all(r.final_residual <= 1e-3 for r in rows)
        got = read_csv(out)
        assert list(got[0].keys()) == list(CSV_COLUMNS)
        assert [r["solver"] for r in got] == list(SOLVER_NAMES)
        # one trace file per run
        assert len(list(tmp_path.glob("suite__chain3__*.trace"))) == 6

    def test_grid_backup_comparison(self, tmp_path):
        rows, ok = run_suite(["A:standard", "A:noisy"], ["vi", "pvi1"],
                             SolverConfig(), tmp_path / "g.csv")
        assert ok
        by_problem = {}
        for r in rows:
            by_problem.setdefault(r.problem, {})[r.solver] = r.backups
        for problem, backups in by_problem.items():
            assert backups["pvi1"] < backups["vi"], problem

    def test_reproducible_modulo_wall_time(self, tmp_path):
        cfg = SolverConfig()
        run_suite(["chain3", "split"], ["vi", "dvi"], cfg, tmp_path / "a.csv")
        run_suite(["chain3", "split"], ["vi", "dvi"], cfg, tmp_path / "b.csv")
        rows_a, rows_b = read_csv(tmp_path / "a.csv"), read_csv(tmp_path / "b.csv")
        for ra, rb in zip(rows_a, rows_b):
            for col in CSV_COLUMNS:
                if col != "wall_time_ms":
                    assert ra[col] == rb[col]

    def test_unreadable_file_records_error_row(self, tmp_path):
        rows, ok = run_suite([str(tmp_path / "nope.mdp"), "chain3"], ["vi"],
                             SolverConfig(), tmp_path / "e.csv")
        assert not ok
        assert any(r.solver == "load" and not r.converged for r in rows)
        assert any(r.problem == "chain3" and r.converged for r in rows)

    def test_empty_selection_rejected(self, tmp_path):
        out = tmp_path / "never.csv"
        with pytest.raises(ValueError):
            run_suite(["chain3"], [], SolverConfig(), out)
        with pytest.raises(ValueError):
            run_suite([], ["vi"], SolverConfig(), out)
        assert not out.exists()

    def test_file_problem_round_trips_through_suite(self, tmp_path, split_g):
        path = tmp_path / "split.mdp"
        path.write_text(mdpsweep.write_mdp_file(split_g))
        rows, ok = run_suite([str(path)], ["vi"], SolverConfig(), tmp_path / "f.csv")
        assert ok and rows[0].discount == 0.9


class TestScalingTable:
    def test_rows_and_ratio(self, tmp_path):
        out = tmp_path / "scale.csv"
        rows, ok = emit_scaling_table(mdpsweep.layout("A"), [1, 2, 4],
                                      ["vi", "pvi1"], SolverConfig(), out)
        assert ok and len(rows) == 6
        got = read_csv(out)
        assert list(got[0].keys()) == list(SCALE_COLUMNS)
        vi_backups = [int(r["backups"]) for r in got if r["solver"] == "vi"]
        assert vi_backups == sorted(vi_backups) and vi_backups[0] < vi_backups[-1]
        ratios = {r["copies"]: r["vi_over_pvi1_backups"] for r in got}
        assert all(float(v) > 1.0 for v in ratios.values())

    def test_single_copy_matches_suite_numbers(self, tmp_path):
        cfg = SolverConfig()
        rows, _ = emit_scaling_table(mdpsweep.layout("A"), [1], ["vi"], cfg,
                                     tmp_path / "one.csv")
        suite_rows, _ = run_suite(["A:standard"], ["vi"], cfg, tmp_path / "s.csv")
        assert rows[0]["backups"] == suite_rows[0].backups
        assert rows[0]["iterations"] == suite_rows[0].iterations

    def test_rejects_bad_k_sequence(self, tmp_path):
        with pytest.raises(ValueError):
            emit_scaling_table(mdpsweep.layout("A"), [2, 1], ["vi"],
                               SolverConfig(), tmp_path / "x.csv")


class TestCompareBackends:
    def test_outputs_identical(self, chain3_g):
        records, identical = compare_backends(chain3_g, "vi", SolverConfig(), repeats=1)
        assert identical
        assert {r["backend"] for r in records} == set(mdpsweep.kernels.available_backends())


class TestCli:
    def test_solve_generated(self, capsys):
        assert main(["solve", "--layout", "A", "--solver", "dvi"]) == 0
        out = capsys.readouterr().out
        assert "converged true" in out and "eps_contracted true" in out

    def test_solve_from_file(self, tmp_path, chain3_g, capsys):
        path = tmp_path / "c.mdp"
        path.write_text(mdpsweep.write_mdp_file(chain3_g))
        trace = tmp_path / "c.trace"
        assert main(["solve", "--file", str(path), "--solver", "vi",
                     "--out", str(trace)]) == 0
        assert trace.exists()
        assert "discount 0.9" in capsys.readouterr().out

    def test_solve_requires_exactly_one_source(self, capsys):
        assert main(["solve", "--solver", "vi"]) == 1
        assert main(["solve", "--layout", "A", "--file", "x.mdp",
                     "--solver", "vi"]) == 1

    def test_solve_missing_file_is_run_failure(self, tmp_path):
        assert main(["solve", "--file", str(tmp_path / "no.mdp"),
                     "--solver", "vi"]) == 2

    def test_usage_errors_exit_one(self):
        assert main(["solve", "--layout", "A", "--solver", "sor"]) == 1
        assert main(["frobnicate"]) == 1
        assert main(["scale", "--layout", "A", "--copies", "two"]) == 1

    def test_suite_default_problem_set(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code = main(["suite", "A:standard", "split", "--solver", "vi,dvi",
                     "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 4
        assert {r["problem"] for r in rows} == {"A:standard", "split"}

    def test_suite_empty_solver_is_usage_error(self, tmp_path):
        out = tmp_path / "never.csv"
        assert main(["suite", "chain3", "--solver", "", "--out", str(out)]) == 1
        assert main(["suite", "chain3", "--solver", "vi,sor", "--out", str(out)]) == 1
        assert not out.exists()

    def test_solve_unconverged_single_sweep_exits_two(self, capsys):
        # one goal-outward sweep cannot settle a cyclic problem at defaults
        assert main(["solve", "--layout", "A", "--solver", "gvi"]) == 2
        assert "eps_contracted false" in capsys.readouterr().out

    def test_suite_missing_file_exits_two(self, tmp_path):
        assert main(["suite", str(tmp_path / "ghost.mdp"),
                     "--out", str(tmp_path / "o.csv")]) == 2

    def test_scale(self, tmp_path):
        out = tmp_path / "sc.csv"
        assert main(["scale", "--layout", "A", "--copies", "1,2",
                     "--out", str(out)]) == 0
        assert len(read_csv(out)) == 4

    def test_backends(self, capsys):
        assert main(["backends", "--layout", "A", "--repeats", "1"]) == 0
        assert "bit-identical across backends: true" in capsys.readouterr().out

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0
