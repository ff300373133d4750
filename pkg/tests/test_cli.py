"""End-to-end tests of the command-line surface via main(argv)."""

import csv
import io
import json

import numpy as np
import pytest

from prank.approx import load_mixture_json
from prank.cli import main
from prank.engine import rank_prfe
from prank.jtree import (
    check_calibration,
    load_junction_tree_json,
    rank_prf_jt,
    variable_marginal,
)
from prank.model import (
    TreeAnd,
    TreeLeaf,
    TreeXor,
    load_relation_csv,
    load_tree_json,
    save_relation_csv,
    save_tree_json,
)
from prank.ranking import rank_pt
from prank.synth import PRESETS, gen_independent
from prank.weights import Exponential

from conftest import build_six_tuple_tree


def write_example_csv(path):
    path.write_text("id,score,prob\n1,300,0.5\n2,200,0.6\n3,100,0.4\n")
    return str(path)


def write_prefs_csv(path, rel, order):
    by_id = {t.id: t for t in rel}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "score", "prob"])
        for tid in order:
            t = by_id[tid]
            writer.writerow([t.id, repr(t.score), repr(t.prob)])
    return str(path)


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestRank:
    def test_worked_example_values(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        code, out = run(
            capsys,
            ["rank", "--input", data, "--fn", "prfe", "--alpha", "0.6",
             "--k", "3", "--format", "csv"],
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["rank", "id", "score", "value"]
        assert [r[1] for r in rows] == ["1", "2", "3"]
        values = [float(r[3]) for r in rows]
        assert values == pytest.approx([0.30, 0.288, 0.14592], abs=1e-9)

    def test_escore_on_certain_tuples_is_score_order(self, tmp_path, capsys):
        path = tmp_path / "sure.csv"
        path.write_text(
            "id,score,prob\n1,50,1.0\n2,900,1.0\n3,700,1.0\n4,100,1.0\n"
        )
        code, out = run(
            capsys, ["rank", "--input", str(path), "--fn", "escore",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert [r[1] for r in rows] == ["2", "3", "4", "1"]

    def test_pt_on_tree_matches_library(self, tmp_path, capsys):
        tree = build_six_tuple_tree()
        path = tmp_path / "tree.json"
        save_tree_json(tree, path)
        code, out = run(
            capsys,
            ["rank", "--input", str(path), "--model", "andxor", "--fn", "pt",
             "--h", "2", "--k", "2", "--format", "csv"],
        )
        assert code == 0
        _, rows = parse_csv(out)
        want = rank_pt(tree, 2, 2)
        assert [int(r[1]) for r in rows] == list(want.ids)

    def test_junction_model_matches_library(self, tmp_path, capsys):
        out_tree = tmp_path / "jt.json"
        assert main(["gen-synth", "--kind", "junction", "--n", "7",
                     "--seed", "3", "--output", str(out_tree)]) == 0
        capsys.readouterr()
        rel_path = str(tmp_path / "jt.relation.csv")
        code, out = run(
            capsys,
            ["rank", "--input", str(out_tree), "--model", "junction",
             "--relation", rel_path, "--fn", "prfe", "--alpha", "0.8",
             "--format", "csv"],
        )
        assert code == 0
        _, rows = parse_csv(out)
        jt = load_junction_tree_json(out_tree)
        rel = load_relation_csv(rel_path)
        want = rank_prf_jt(jt, rel, Exponential(0.8))
        assert [int(r[1]) for r in rows] == [s.tuple_id for s in want]

    def test_tie_breaks_toward_smaller_id(self, tmp_path, capsys):
        path = tmp_path / "ties.csv"
        path.write_text("id,score,prob\n9,500,0.5\n2,500,0.5\n5,500,0.5\n")
        code, out = run(
            capsys, ["rank", "--input", str(path), "--fn", "prfe",
                     "--alpha", "0.7", "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert [r[1] for r in rows] == ["2", "5", "9"]

    def test_k_truncates(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        code, out = run(
            capsys, ["rank", "--input", data, "--fn", "escore", "--k", "2",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 2

    def test_json_format(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        code, out = run(
            capsys, ["rank", "--input", data, "--fn", "escore",
                     "--format", "json"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["columns"] == ["rank", "id", "score", "value"]
        assert len(doc["rows"]) == 3

    def test_output_file_and_metadata(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        report = tmp_path / "report.csv"
        code = main(
            ["rank", "--input", data, "--fn", "prfe", "--alpha", "0.6",
             "--format", "csv", "--output", str(report)]
        )
        assert code == 0
        assert report.exists()
        meta = json.loads((tmp_path / "report.csv.meta.json").read_text())
        assert meta["generator"] == "numpy PCG64"
        assert meta["seed"] == 42

    def test_plot_writes_figure(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        report = tmp_path / "report.csv"
        code = main(
            ["rank", "--input", data, "--fn", "prfe", "--alpha", "0.6",
             "--format", "csv", "--output", str(report), "--plot"]
        )
        assert code == 0
        figure = tmp_path / "report.png"
        assert figure.exists() and figure.stat().st_size > 0

    def test_plot_without_output_is_usage_error(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        assert main(["rank", "--input", data, "--fn", "escore", "--plot"]) == 2

    def test_unknown_fn_is_usage_error(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        assert main(["rank", "--input", data, "--fn", "wavelet"]) == 2

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        assert main(["rank", "--input", str(tmp_path / "no.csv"),
                     "--fn", "escore"]) == 2

    def test_bad_probability_is_model_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("id,score,prob\n1,300,1.5\n")
        assert main(["rank", "--input", str(path), "--fn", "escore"]) == 3

    def test_prfe_without_alpha_is_usage_error(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        assert main(["rank", "--input", data, "--fn", "prfe"]) == 2


class TestCompare:
    def test_same_function_twice_distance_zero(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        code, out = run(
            capsys, ["compare", "--input", data, "--fns", "escore,escore",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][2]) == 0.0
        assert float(rows[1][1]) == 0.0

    def test_escore_vs_erank_on_certain_data(self, tmp_path, capsys):
        path = tmp_path / "sure.csv"
        path.write_text("id,score,prob\n1,50,1.0\n2,900,1.0\n3,700,1.0\n")
        code, out = run(
            capsys, ["compare", "--input", str(path), "--fns", "escore,erank",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][2]) == 0.0

    def test_matrix_shape_and_symmetry(self, tmp_path, capsys):
        syn = tmp_path / "syn.csv"
        assert main(["gen-synth", "--kind", "ind", "--n", "200", "--seed",
                     "42", "--output", str(syn)]) == 0
        capsys.readouterr()
        code, out = run(
            capsys,
            ["compare", "--input", str(syn), "--fns",
             "escore,pt:20,urank,erank,prfe:0.9", "--k", "20",
             "--format", "csv"],
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["fn", "escore", "pt:20", "urank", "erank", "prfe:0.9"]
        m = np.array([[float(v) for v in r[1:]] for r in rows])
        assert m.shape == (5, 5)
        assert np.allclose(m, m.T)
        assert np.allclose(np.diag(m), 0.0)
        assert m.min() >= 0.0 and m.max() <= 1.0

    def test_bit_identical_across_runs(self, tmp_path, capsys):
        syn = tmp_path / "syn.csv"
        assert main(["gen-synth", "--kind", "ind", "--n", "150", "--seed",
                     "42", "--output", str(syn)]) == 0
        capsys.readouterr()
        argv = ["compare", "--input", str(syn), "--fns",
                "escore,pt:15,urank,erank,prfe:0.9", "--k", "15",
                "--format", "csv"]
        _, first = run(capsys, argv)
        _, second = run(capsys, argv)
        assert first == second

    def test_single_function_is_usage_error(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        assert main(["compare", "--input", data, "--fns", "escore"]) == 2

    def test_plot_writes_heatmap(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        report = tmp_path / "matrix.csv"
        code = main(
            ["compare", "--input", data, "--fns", "escore,prfe:0.6",
             "--format", "csv", "--output", str(report), "--plot"]
        )
        assert code == 0
        assert (tmp_path / "matrix.png").stat().st_size > 0


class TestGenSynth:
    def test_independent_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["gen-synth", "--kind", "ind", "--n", "100", "--seed",
                     "1", "--output", str(a)]) == 0
        assert main(["gen-synth", "--kind", "ind", "--n", "100", "--seed",
                     "1", "--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
        assert meta["generator"] == "numpy PCG64"
        assert meta["seed"] == 1

    def test_xor_preset_structure(self, tmp_path, capsys):
        path = tmp_path / "xor.json"
        assert main(["gen-synth", "--kind", "xor", "--n", "40", "--seed",
                     "3", "--output", str(path)]) == 0
        tree = load_tree_json(path)
        assert len(tree.leaves) == 40

        def walk(node, depth, is_root):
            if isinstance(node, TreeLeaf):
                assert depth <= 2
                return
            if not is_root:
                assert isinstance(node, TreeXor)
            children = (
                node.children
                if isinstance(node, TreeAnd)
                else [e.node for e in node.children]
            )
            for child in children:
                walk(child, depth + 1, False)

        walk(tree.root, 0, True)

    def test_high_preset_validates(self, tmp_path, capsys):
        path = tmp_path / "high.json"
        assert main(["gen-synth", "--kind", "high", "--n", "50", "--seed",
                     "9", "--output", str(path)]) == 0
        tree = load_tree_json(path)  # validation happens on load
        assert len(tree.leaves) == 50

    def test_junction_kind_writes_bound_pair(self, tmp_path, capsys):
        out = tmp_path / "jt.json"
        assert main(["gen-synth", "--kind", "junction", "--n", "9", "--seed",
                     "4", "--shape", "star", "--output", str(out)]) == 0
        jt = load_junction_tree_json(out)
        check_calibration(jt)
        rel = load_relation_csv(str(tmp_path / "jt.relation.csv"))
        for t in rel:
            assert t.prob == pytest.approx(variable_marginal(jt, t.id), abs=1e-9)

    @pytest.mark.parametrize("kind", sorted(PRESETS))
    def test_round_trip_validates_many_seeds(self, kind, tmp_path, capsys):
        path = tmp_path / "t.json"
        for seed in range(100):
            assert main(["gen-synth", "--kind", kind, "--n", "20", "--seed",
                         str(seed), "--output", str(path)]) == 0
            tree = load_tree_json(path)
            assert len(tree.leaves) == 20

    def test_round_trip_independent_many_seeds(self, tmp_path, capsys):
        path = tmp_path / "t.csv"
        for seed in range(100):
            assert main(["gen-synth", "--kind", "ind", "--n", "20", "--seed",
                         str(seed), "--output", str(path)]) == 0
            rel = load_relation_csv(str(path))
            assert len(rel.tuples) == 20


class TestOracleCheck:
    def test_worked_example_all_ok(self, tmp_path, capsys):
        data = write_example_csv(tmp_path / "ex.csv")
        code, out = run(
            capsys, ["oracle-check", "--input", data, "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 7
        assert all(float(r[1]) < 1e-9 for r in rows)
        assert all(r[2] == "ok" for r in rows)

    def test_tree_model_all_ok(self, tmp_path, capsys):
        path = tmp_path / "tree.json"
        save_tree_json(build_six_tuple_tree(), path)
        code, out = run(
            capsys, ["oracle-check", "--input", str(path), "--model",
                     "andxor", "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert all(float(r[1]) < 1e-9 for r in rows)

    def test_junction_model_all_ok(self, tmp_path, capsys):
        out = tmp_path / "jt.json"
        assert main(["gen-synth", "--kind", "junction", "--n", "8", "--seed",
                     "6", "--output", str(out)]) == 0
        capsys.readouterr()
        code, text = run(
            capsys,
            ["oracle-check", "--input", str(out), "--model", "junction",
             "--relation", str(tmp_path / "jt.relation.csv"),
             "--format", "csv"],
        )
        assert code == 0
        _, rows = parse_csv(text)
        assert all(float(r[1]) < 1e-9 for r in rows)

    def test_near_zero_probabilities_complete(self, tmp_path, capsys):
        path = tmp_path / "tiny.csv"
        lines = ["id,score,prob"]
        for i in range(1, 9):
            prob = "1e-10" if i % 2 else "0.5"
            lines.append(f"{i},{1000 - i},{prob}")
        path.write_text("\n".join(lines) + "\n")
        code, out = run(
            capsys, ["oracle-check", "--input", str(path), "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert all(float(r[1]) < 1e-6 for r in rows)

    def test_synthetic_default_passes(self, capsys):
        code, out = run(capsys, ["oracle-check", "--n", "8", "--format", "csv"])
        assert code == 0

    def test_size_limit(self, tmp_path, capsys):
        rel = gen_independent(25, np.random.default_rng(0))
        path = tmp_path / "big.csv"
        save_relation_csv(rel, str(path))
        assert main(["oracle-check", "--input", str(path)]) == 2


class TestBench:
    def test_prfe_row(self, capsys):
        code, out = run(
            capsys, ["bench", "--task", "prfe", "--n", "2000", "--format", "csv"]
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["n", "algorithm", "params", "seconds"]
        assert rows[0][0] == "2000" and rows[0][1] == "prfe"
        assert float(rows[0][3]) > 0.0

    def test_pt_row(self, capsys):
        code, out = run(
            capsys, ["bench", "--task", "pt", "--n", "1000", "--h", "50",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert rows[0][2] == "h=50"

    def test_mixture_row_and_plot(self, tmp_path, capsys):
        report = tmp_path / "bench.csv"
        code = main(
            ["bench", "--task", "mixture", "--n", "2000", "--h", "50",
             "--terms", "10", "--format", "csv", "--output", str(report),
             "--plot"]
        )
        assert code == 0
        _, rows = parse_csv(report.read_text())
        assert rows[0][2] == "h=50,L=10"
        assert (tmp_path / "bench.png").stat().st_size > 0

    def test_unknown_task_is_usage_error(self, capsys):
        assert main(["bench", "--task", "sort", "--n", "10"]) == 2


class TestLearnCli:
    def test_learn_alpha_recovers_exponential_target(self, tmp_path, capsys):
        rel = gen_independent(30, np.random.default_rng(5))
        order = [s.tuple_id for s in rank_prfe(rel, 0.95)]
        prefs = write_prefs_csv(tmp_path / "prefs.csv", rel, order)
        code, out = run(
            capsys, ["learn-alpha", "--target", prefs, "--tol", "1e-7",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        values = {r[0]: float(r[1]) for r in rows}
        assert values["distance"] == 0.0
        assert abs(values["alpha"] - 0.95) < 0.01

    def test_learn_weights_recovers_tabulated_target(self, tmp_path, capsys):
        from prank.engine import rank_prf
        from prank.weights import Tabulated

        rel = gen_independent(8, np.random.default_rng(6))
        target = [s.tuple_id for s in rank_prf(rel, Tabulated((3.0, 2.0, 1.0)))]
        prefs = write_prefs_csv(tmp_path / "prefs.csv", rel, target)
        code, out = run(
            capsys, ["learn-weights", "--target", prefs, "--h", "3",
                     "--format", "csv"]
        )
        assert code == 0
        _, rows = parse_csv(out)
        values = {r[0]: float(r[1]) for r in rows}
        assert values["distance"] == 0.0
        assert set(values) == {"w1", "w2", "w3", "distance"}

    def test_malformed_preferences_usage_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("tuple,value\n1,2\n")
        assert main(["learn-alpha", "--target", str(path)]) == 2


class TestApprox:
    def test_step_emits_mixture_and_report(self, tmp_path, capsys):
        out = tmp_path / "mix.json"
        code, text = run(
            capsys, ["approx", "--fn", "step", "--h", "50", "--terms", "20",
                     "--output", str(out)]
        )
        assert code == 0
        mixture = load_mixture_json(str(out))
        assert len(mixture) == 20
        assert (tmp_path / "mix.json.meta.json").exists()
        assert "max_residual" in text and "tail_max_abs" in text
        tail = float(
            [line for line in text.splitlines() if "tail_max_abs" in line][0]
            .split()[-1]
        )
        assert tail < 1e-3

    def test_zero_terms_is_usage_error(self, tmp_path, capsys):
        assert main(["approx", "--fn", "step", "--h", "50", "--terms", "0",
                     "--output", str(tmp_path / "m.json")]) == 2

    def test_plot_writes_reconstruction(self, tmp_path, capsys):
        out = tmp_path / "mix.json"
        code = main(["approx", "--fn", "step", "--h", "30", "--terms", "15",
                     "--output", str(out), "--plot"])
        assert code == 0
        assert (tmp_path / "mix.png").stat().st_size > 0
        capsys.readouterr()

    def test_exponential_needs_grid(self, tmp_path, capsys):
        assert main(["approx", "--fn", "exponential", "--alpha", "0.9",
                     "--output", str(tmp_path / "m.json")]) == 2

    def test_exponential_with_grid(self, tmp_path, capsys):
        out = tmp_path / "exp.json"
        code, text = run(
            capsys, ["approx", "--fn", "exponential", "--alpha", "0.9",
                     "--grid", "40", "--terms", "30", "--output", str(out)]
        )
        assert code == 0
        assert load_mixture_json(str(out))


class TestHarness:
    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_thread_cap_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PRANK_THREADS", "2")
        data = write_example_csv(tmp_path / "ex.csv")
        code, out = run(
            capsys, ["rank", "--input", data, "--fn", "escore",
                     "--format", "csv"]
        )
        assert code == 0
