import json
import os

import pytest

import mixmetric as mm
from mixmetric.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


@pytest.fixture
def workdir(tmp_path, data_dir):
    schema = tmp_path / "schema.json"
    train = tmp_path / "train.csv"
    schema.write_text((data_dir / "mixed.schema.json").read_text())
    train.write_text((data_dir / "mixed.csv").read_text())
    return tmp_path


@pytest.fixture
def model_path(workdir, capsys):
    out = workdir / "model.json"
    rc = main(["fit", "--schema", str(workdir / "schema.json"),
               "--data", str(workdir / "train.csv"), "--out", str(out)])
    capsys.readouterr()
    assert rc == 0
    return out


ROW_A = "34,52000,good,172.5,lyon"
ROW_B = "29,41000,fair,180.0,nice"


class TestFit:
    def test_writes_a_loadable_model(self, workdir, model_path):
        fm = mm.load_model(model_path.read_text())
        assert [a.name for a in fm.schema.attributes][0] == "age"

    def test_repeat_runs_are_byte_identical(self, workdir, model_path, capsys):
        first = model_path.read_bytes()
        rc, _, _ = run(capsys, "fit", "--schema", str(workdir / "schema.json"),
                       "--data", str(workdir / "train.csv"),
                       "--out", str(workdir / "model2.json"))
        assert rc == 0
        assert (workdir / "model2.json").read_bytes() == first

    def test_bad_data_leaves_no_output_file(self, workdir, capsys):
        bad = workdir / "bad.csv"
        bad.write_text("age,income,rating,height,city,outcome\nxx,1,good,2,a,b\n")
        out = workdir / "never.json"
        rc, _, err = run(capsys, "fit", "--schema", str(workdir / "schema.json"),
                         "--data", str(bad), "--out", str(out))
        assert rc == 2
        assert "error:" in err and err.count("\n") == 1
        assert not out.exists()


class TestDist:
    def test_identical_rows_print_zero(self, model_path, capsys):
        rc, out, _ = run(capsys, "dist", "--model", str(model_path),
                         "--a", ROW_A, "--b", ROW_A)
        assert rc == 0
        assert out == "0\n"

    def test_matches_library_value(self, model_path, capsys):
        fm = mm.load_model(model_path.read_text())
        a = mm.parse_row(ROW_A, fm.schema)
        b = mm.parse_row(ROW_B, fm.schema)
        rc, out, _ = run(capsys, "dist", "--model", str(model_path),
                         "--a", ROW_A, "--b", ROW_B)
        assert rc == 0
        assert float(out) == mm.record_distance(fm, a, b)

    def test_negative_leading_cell_needs_equals_form(self, model_path, capsys):
        # "-5,..." as a separate word parses as a flag; --a=-5,... is the
        # documented escape hatch.
        rc, _, err = run(capsys, "dist", "--model", str(model_path),
                         "--a", "-5,41000,fair,180.0,nice", "--b", ROW_B)
        assert rc == 1 and "usage error:" in err
        rc, out, _ = run(capsys, "dist", "--model", str(model_path),
                         "--a=-5,41000,fair,180.0,nice", "--b", ROW_B)
        assert rc == 0
        assert 0.0 <= float(out) <= 1.0

    def test_model_file_missing(self, workdir, capsys):
        rc, _, err = run(capsys, "dist", "--model", str(workdir / "nope.json"),
                         "--a", ROW_A, "--b", ROW_B)
        assert rc == 2 and "error:" in err

    def test_malformed_row_is_data_error(self, model_path, capsys):
        rc, _, err = run(capsys, "dist", "--model", str(model_path),
                         "--a", "1,2", "--b", ROW_B)
        assert rc == 2 and "error:" in err


class TestMatrix:
    def test_text_line_count(self, workdir, model_path, capsys):
        out = workdir / "m.txt"
        rc, _, _ = run(capsys, "matrix", "--model", str(model_path),
                       "--data", str(workdir / "train.csv"), "--out", str(out))
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n=12"
        assert len(lines) == 12 * 11 // 2 + 1

    def test_text_values_parse_back_exactly(self, workdir, model_path, capsys):
        out = workdir / "m.txt"
        run(capsys, "matrix", "--model", str(model_path),
            "--data", str(workdir / "train.csv"), "--out", str(out))
        m = mm.read_matrix_text(out.read_text())
        fm = mm.load_model(model_path.read_text())
        data = mm.parse_csv((workdir / "train.csv").read_text(), fm.schema)
        ref = mm.serial_pairwise_matrix(fm, data)
        assert m.values.tobytes() == ref.values.tobytes()

    def test_binary_round_trip(self, workdir, model_path, capsys):
        out = workdir / "m.bin"
        rc, _, _ = run(capsys, "matrix", "--model", str(model_path),
                       "--data", str(workdir / "train.csv"),
                       "--out", str(out), "--format", "binary")
        assert rc == 0
        m = mm.read_matrix_binary(out.read_bytes())
        assert m.n == 12

    def test_threads_flag_changes_nothing(self, workdir, model_path, capsys):
        outs = []
        for t in ("1", "3"):
            out = workdir / f"m{t}.txt"
            rc, _, _ = run(capsys, "matrix", "--model", str(model_path),
                           "--data", str(workdir / "train.csv"),
                           "--out", str(out), "--threads", t)
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_zero_threads_is_usage_error(self, workdir, model_path, capsys):
        rc, _, err = run(capsys, "matrix", "--model", str(model_path),
                         "--data", str(workdir / "train.csv"),
                         "--out", str(workdir / "m.txt"), "--threads", "0")
        assert rc == 1 and "usage error:" in err


class TestPredict:
    def test_label_then_sorted_scores(self, workdir, model_path, capsys):
        rc, out, _ = run(capsys, "predict", "--model", str(model_path),
                         "--data", str(workdir / "train.csv"),
                         "--query", "33,50000,good,173.0,lyon", "--k", "3")
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "label=keep"
        assert lines[1].startswith("score[churn]=")
        assert lines[2].startswith("score[keep]=")

    def test_scores_match_library(self, workdir, model_path, capsys):
        fm = mm.load_model(model_path.read_text())
        data = mm.parse_csv((workdir / "train.csv").read_text(), fm.schema)
        p = mm.predictor_from_fitted(fm, data)
        res = mm.predict(p, mm.parse_row("33,50000,good,173.0,lyon", fm.schema), 3)
        rc, out, _ = run(capsys, "predict", "--model", str(model_path),
                         "--data", str(workdir / "train.csv"),
                         "--query", "33,50000,good,173.0,lyon", "--k", "3")
        scores = dict(
            (line.split("=")[0][6:-1], float(line.split("=")[1]))
            for line in out.splitlines()[1:]
        )
        assert scores == res.class_scores

    def test_bad_k(self, workdir, model_path, capsys):
        rc, _, err = run(capsys, "predict", "--model", str(model_path),
                         "--data", str(workdir / "train.csv"),
                         "--query", ROW_A, "--k", "0")
        assert rc == 1 and "usage error:" in err


class TestEval:
    def test_separated_classes(self, data_dir, capsys):
        rc, out, _ = run(capsys, "eval",
                         "--schema", str(data_dir / "gauss2.schema.json"),
                         "--data", str(data_dir / "gauss2.csv"), "--k", "3")
        assert rc == 0
        assert out == "accuracy=1.0\n"

    def test_accuracy_value_matches_library(self, workdir, capsys):
        schema = mm.parse_schema((workdir / "schema.json").read_text())
        data = mm.parse_csv((workdir / "train.csv").read_text(), schema)
        expect = mm.loo_accuracy(data, 3)
        rc, out, _ = run(capsys, "eval", "--schema", str(workdir / "schema.json"),
                         "--data", str(workdir / "train.csv"), "--k", "3")
        assert rc == 0
        assert out == f"accuracy={expect!r}\n"


class TestUsage:
    def test_no_command(self, capsys):
        rc, _, err = run(capsys)
        assert rc == 1 and "usage error:" in err

    def test_unknown_command(self, capsys):
        rc, _, err = run(capsys, "frobnicate")
        assert rc == 1

    def test_missing_required_flag(self, capsys):
        rc, _, err = run(capsys, "fit", "--schema", "s.json")
        assert rc == 1 and "usage error:" in err

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
